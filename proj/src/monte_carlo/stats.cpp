#include "kljn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "kljn/errors.hpp"

namespace kljn {

RateEstimate wilson_interval(std::size_t successes, std::size_t n, double z) {
    if (n == 0) throw InsufficientData("rate estimate: zero denominator");
    if (successes > n) throw InvalidParameter("rate estimate: successes exceed trials");
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = (p + z2 / (2.0 * nn)) / denom;
    const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
    RateEstimate r;
    r.p_hat = p;
    r.n = n;
    r.successes = successes;
    // Clamp rounding so that ci_low <= p_hat <= ci_high holds exactly.
    r.ci_low = std::clamp(center - half, 0.0, p);
    r.ci_high = std::clamp(center + half, p, 1.0);
    return r;
}

double kolmogorov_survival(double lambda) {
    if (!(lambda > 0.0)) return 1.0;
    if (lambda < 1.18) {
        // Jacobi-transformed series, fast for small lambda.
        const double pi2 = std::numbers::pi * std::numbers::pi;
        const double w = -pi2 / (8.0 * lambda * lambda);
        double cdf = 0.0;
        for (int j = 1; j <= 7; ++j) {
            const double k = 2.0 * j - 1.0;
            cdf += std::exp(k * k * w);
        }
        cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double q = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        q += sign * term;
        if (term < 1e-17) break;
        sign = -sign;
    }
    return std::clamp(2.0 * q, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 50 || b.size() < 50) throw InsufficientData("ks_two_sample: each sample needs >= 50 points");
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());

    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;  // step over ties together
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }

    const double ne = nx * ny / (nx + ny);
    const double root = std::sqrt(ne);
    return {d, kolmogorov_survival((root + 0.12 + 0.11 / root) * d)};
}

double sample_mean(std::span<const double> values) {
    if (values.empty()) throw InsufficientData("mean: empty sample");
    double total = 0.0;
    for (double v : values) total += v;
    return total / static_cast<double>(values.size());
}

double sample_stddev(std::span<const double> values) {
    if (values.size() < 2) throw InsufficientData("stddev: need at least 2 values");
    const double mean = sample_mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace kljn
