#pragma once
// Analytic error probabilities for the starred (00/11 -> secure) errors:
// squared-noise spectrum, residual RMS after finite-time averaging, Rice level
// crossings, and the exact Gaussian tail they approximate.

#include <functional>
#include <span>
#include <vector>

namespace kljn {

/// Triangular spectrum of the AC part of D*u^2 for band-limited white u.
struct SquaredNoisePsd {
    double s00 = 1.0;        ///< flat one-sided input density, V^2/Hz
    double bandwidth = 1.0;  ///< Hz
    double d_coeff = 1.0;    ///< 1/V

    /// 2 D^2 B S00^2 (1 - f / 2B) on [0, 2B], zero elsewhere.
    double operator()(double f) const;
    double peak() const { return 2.0 * d_coeff * d_coeff * bandwidth * s00 * s00; }
    /// Closed-form integral over [0, 2B]: 2 (D S00 B)^2.
    double total_power() const;
};

double squared_noise_psd(double f, const SquaredNoisePsd& psd);

/// u_tau = sqrt(f_B * S2(0)) = D S00 f_B sqrt(2 gamma). Requires f_B <= B/4,
/// throws ApproximationDomainError otherwise.
double averaged_square_rms(const SquaredNoisePsd& psd, double f_b);

/// Spectrum sampled on an increasing frequency grid, linear between samples.
struct TabulatedSpectrum {
    std::vector<double> frequency;
    std::vector<double> density;

    /// Samples `fn` on n >= 2 equispaced points over [0, f_max].
    static TabulatedSpectrum sample(const std::function<double(double)>& fn, double f_max,
                                    std::size_t n = 1025);
    static TabulatedSpectrum flat(double level, double f_max, std::size_t n = 1025);

    /// Exact integrals of the piecewise-linear interpolant.
    double moment0() const;
    double moment2() const;
};

/// Rice mean crossing rate (both directions) of `threshold` by a zero-mean
/// Gaussian with RMS `rms` and spectrum `spectrum`:
///   (2/rms) exp(-threshold^2 / 2 rms^2) sqrt(int f^2 S df)
/// Throws InvalidParameter for rms <= 0 or an empty / non-integrable table.
double rice_crossing_frequency(double threshold, double rms, const TabulatedSpectrum& spectrum);

/// Same, with the second moment from adaptive Gauss-Kronrod quadrature of a
/// callable spectrum over [0, f_max] (relative tolerance 1e-10).
double rice_crossing_frequency(double threshold, double rms, const std::function<double(double)>& spectrum,
                               double f_max);

struct PredictorInput {
    double threshold_fraction = 0.5;  ///< beta or delta, in [0, 1]
    double gamma = 100.0;

    void validate() const;
};

struct RiceEstimate {
    double probability = 0.0;
    /// The Poisson identification eps ~ nu_up * tau is only trusted below 0.1.
    bool small_error_valid = true;
};

/// Small-error-rate probability of a 00 -> secure error, (1/sqrt3) exp(-beta^2 gamma / 4).
/// Cross-checks the closed form against the threshold -> RMS -> crossing-rate
/// pipeline and throws std::logic_error if they disagree beyond 1e-12.
RiceEstimate rice_error_probability_00(const PredictorInput& input);
/// Same law with delta on the 11 side.
RiceEstimate rice_error_probability_11(const PredictorInput& input);

/// Composes the pipeline explicitly for physical parameters:
/// Delta = fraction * D S B, u_tau from the squared-noise PSD at f_B = B/gamma,
/// a flat tabulated S_tau on [0, f_B], half the Rice rate, times tau.
double rice_pipeline_probability(const PredictorInput& input, double s00, double bandwidth, double d_coeff);

/// Standard normal upper tail Q(x) = erfc(x / sqrt2) / 2.
double normal_upper_tail(double x);

/// Exact one-sided Gaussian tail with the same RMS: Q(fraction * sqrt(gamma/2)).
double gaussian_tail_probability(const PredictorInput& input);

/// rice / tail.
double pessimism_ratio(const PredictorInput& input);

}  // namespace kljn
