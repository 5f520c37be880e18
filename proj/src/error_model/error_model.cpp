#include "kljn/error_model.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kljn/errors.hpp"

namespace kljn {

double SquaredNoisePsd::operator()(double f) const {
    if (f < 0.0 || f > 2.0 * bandwidth) return 0.0;
    return peak() * (1.0 - f / (2.0 * bandwidth));
}

double SquaredNoisePsd::total_power() const {
    const double x = d_coeff * s00 * bandwidth;
    return 2.0 * x * x;
}

double squared_noise_psd(double f, const SquaredNoisePsd& psd) {
    if (!(f >= 0.0)) throw InvalidParameter("squared_noise_psd: frequency must be >= 0");
    return psd(f);
}

double averaged_square_rms(const SquaredNoisePsd& psd, double f_b) {
    if (!(f_b > 0.0)) throw InvalidParameter("averaged_square_rms: f_B must be > 0");
    if (f_b > psd.bandwidth / 4.0)
        throw ApproximationDomainError("averaged_square_rms: flat-spectrum approximation needs f_B <= B/4");
    return std::sqrt(f_b * psd.peak());
}

TabulatedSpectrum TabulatedSpectrum::sample(const std::function<double(double)>& fn, double f_max, std::size_t n) {
    if (n < 2 || !(f_max > 0.0)) throw InvalidParameter("tabulated spectrum: need n >= 2 and f_max > 0");
    TabulatedSpectrum t;
    t.frequency.resize(n);
    t.density.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Pin the last node to f_max exactly.
        const double f = i + 1 == n ? f_max : f_max * static_cast<double>(i) / static_cast<double>(n - 1);
        t.frequency[i] = f;
        t.density[i] = fn(f);
    }
    return t;
}

TabulatedSpectrum TabulatedSpectrum::flat(double level, double f_max, std::size_t n) {
    return sample([level](double) { return level; }, f_max, n);
}

namespace {

void check_table(const TabulatedSpectrum& t) {
    if (t.frequency.size() < 2 || t.frequency.size() != t.density.size())
        throw InvalidParameter("tabulated spectrum: need >= 2 (frequency, density) pairs");
    for (std::size_t i = 0; i < t.frequency.size(); ++i) {
        if (!std::isfinite(t.frequency[i]) || !std::isfinite(t.density[i]) || t.density[i] < 0.0)
            throw InvalidParameter("tabulated spectrum: non-finite or negative entry");
        if (i > 0 && !(t.frequency[i] > t.frequency[i - 1]))
            throw InvalidParameter("tabulated spectrum: frequencies must increase strictly");
    }
}

}  // namespace

double TabulatedSpectrum::moment0() const {
    check_table(*this);
    double total = 0.0;
    for (std::size_t i = 1; i < frequency.size(); ++i)
        total += 0.5 * (frequency[i] - frequency[i - 1]) * (density[i] + density[i - 1]);
    return total;
}

double TabulatedSpectrum::moment2() const {
    check_table(*this);
    // f^2 S(f) is cubic on each linear piece, so Simpson's rule is exact.
    double total = 0.0;
    for (std::size_t i = 1; i < frequency.size(); ++i) {
        const double f0 = frequency[i - 1];
        const double f1 = frequency[i];
        const double fm = 0.5 * (f0 + f1);
        const double g0 = f0 * f0 * density[i - 1];
        const double g1 = f1 * f1 * density[i];
        const double gm = fm * fm * 0.5 * (density[i - 1] + density[i]);
        total += (f1 - f0) / 6.0 * (g0 + 4.0 * gm + g1);
    }
    return total;
}

namespace {

double rice_rate(double threshold, double rms, double second_moment) {
    if (!(rms > 0.0) || !std::isfinite(rms)) throw InvalidParameter("rice: rms must be > 0");
    if (!(second_moment > 0.0) || !std::isfinite(second_moment))
        throw InvalidParameter("rice: spectrum has no finite, positive second moment");
    const double z = threshold / rms;
    return 2.0 / rms * std::exp(-0.5 * z * z) * std::sqrt(second_moment);
}

}  // namespace

double rice_crossing_frequency(double threshold, double rms, const TabulatedSpectrum& spectrum) {
    return rice_rate(threshold, rms, spectrum.moment2());
}

double rice_crossing_frequency(double threshold, double rms, const std::function<double(double)>& spectrum,
                               double f_max) {
    if (!(f_max > 0.0) || !std::isfinite(f_max)) throw InvalidParameter("rice: f_max must be finite and > 0");
    using boost::math::quadrature::gauss_kronrod;
    const double m2 = gauss_kronrod<double, 61>::integrate([&](double f) { return f * f * spectrum(f); }, 0.0,
                                                           f_max, 20, 1e-10);
    return rice_rate(threshold, rms, m2);
}

void PredictorInput::validate() const {
    if (!(threshold_fraction >= 0.0 && threshold_fraction <= 1.0))
        throw InvalidParameter("predictor: threshold fraction must lie in [0, 1]");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidParameter("predictor: gamma must be > 0");
}

double rice_pipeline_probability(const PredictorInput& input, double s00, double bandwidth, double d_coeff) {
    input.validate();
    const SquaredNoisePsd psd{s00, bandwidth, d_coeff};
    const double f_b = bandwidth / input.gamma;
    const double threshold = input.threshold_fraction * d_coeff * s00 * bandwidth;
    const double rms = averaged_square_rms(psd, f_b);
    const auto s_tau = TabulatedSpectrum::flat(psd.peak(), f_b);
    const double upward = 0.5 * rice_crossing_frequency(threshold, rms, s_tau);
    const double tau = 1.0 / f_b;
    return upward * tau;
}

namespace {

RiceEstimate rice_closed_form(const PredictorInput& input) {
    input.validate();
    const double b = input.threshold_fraction;
    RiceEstimate est;
    est.probability = std::exp(-b * b * input.gamma / 4.0) / std::numbers::sqrt3;
    est.small_error_valid = est.probability <= 0.1;

    // The pipeline needs f_B <= B/4.
    if (input.gamma >= 4.0) {
        const double composed = rice_pipeline_probability(input, 1.0, input.gamma, 1.0);
        if (std::abs(composed - est.probability) > 1e-12 * est.probability)
            throw std::logic_error("rice: closed form and composed pipeline disagree");
    }
    return est;
}

}  // namespace

RiceEstimate rice_error_probability_00(const PredictorInput& input) { return rice_closed_form(input); }

RiceEstimate rice_error_probability_11(const PredictorInput& input) { return rice_closed_form(input); }

double normal_upper_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double gaussian_tail_probability(const PredictorInput& input) {
    input.validate();
    return normal_upper_tail(input.threshold_fraction * std::sqrt(input.gamma / 2.0));
}

double pessimism_ratio(const PredictorInput& input) {
    return rice_error_probability_00(input).probability / gaussian_tail_probability(input);
}

}  // namespace kljn
