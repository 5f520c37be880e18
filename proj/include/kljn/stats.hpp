#pragma once

#include <cstddef>
#include <span>

namespace kljn {

struct RateEstimate {
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::size_t n = 0;
    std::size_t successes = 0;

    bool overlaps(double lo, double hi) const { return ci_low <= hi && lo <= ci_high; }
    bool contains(double p) const { return ci_low <= p && p <= ci_high; }
};

/// Wilson score interval; z = 1.959963984540054 gives 95%. Throws
/// InsufficientData when n == 0.
RateEstimate wilson_interval(std::size_t successes, std::size_t n, double z = 1.959963984540054);

struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

/// Asymptotic Kolmogorov survival function, P(K > lambda).
double kolmogorov_survival(double lambda);

/// Two-sample Kolmogorov-Smirnov. Both samples need >= 50 points.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Sample standard deviation (n - 1 denominator). Needs >= 2 values.
double sample_stddev(std::span<const double> values);
double sample_mean(std::span<const double> values);

}  // namespace kljn
