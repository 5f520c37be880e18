#include "kljn/noise.hpp"

#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>

#include "fft.hpp"
#include "kljn/errors.hpp"
#include "kljn/simd/kernels.hpp"

namespace kljn {

void NoiseSpec::validate() const {
    if (!(spectral_density >= 0.0) || !std::isfinite(spectral_density))
        throw InvalidParameter("noise spec: spectral_density must be finite and >= 0");
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth))
        throw InvalidParameter("noise spec: bandwidth must be > 0");
    // Allow rounding slack when sample_rate was computed as 2 * oversampling * bandwidth.
    if (!(sample_rate >= 2.0 * bandwidth * (1.0 - 1e-12)))
        throw InvalidParameter("noise spec: sample_rate must be >= 2 * bandwidth (Nyquist)");
    if (n_samples < 2) throw InvalidParameter("noise spec: n_samples must be >= 2");
}

NoiseTrace::NoiseTrace(std::vector<double> samples, double dt) : samples_(std::move(samples)), dt_(dt) {
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw InvalidParameter("trace: dt must be > 0");
    if (samples_.size() < 2) throw InvalidParameter("trace: need at least 2 samples");
    for (double v : samples_) {
        if (!std::isfinite(v)) throw InvalidParameter("trace: non-finite sample");
    }
}

NoiseTrace NoiseTrace::constant(double value, std::size_t n, double dt) {
    return NoiseTrace(std::vector<double>(n, value), dt);
}

double johnson_spectral_density(double resistance, double t_eff, double boltzmann_k) {
    if (!(resistance > 0.0)) throw InvalidParameter("johnson density: resistance must be > 0");
    if (!(t_eff > 0.0)) throw InvalidParameter("johnson density: t_eff must be > 0");
    if (!(boltzmann_k > 0.0)) throw InvalidParameter("johnson density: boltzmann_k must be > 0");
    return 4.0 * boltzmann_k * t_eff * resistance;
}

NoiseTrace synthesize(const NoiseSpec& spec, Seed seed) {
    spec.validate();
    const std::size_t n = spec.n_samples;
    const std::size_t half = n / 2;
    const double bin_width = spec.sample_rate / static_cast<double>(n);
    const double edge = spec.bandwidth / bin_width;
    const auto last_bin = std::min(half, static_cast<std::size_t>(std::floor(edge * (1.0 + 1e-12))));

    // Bin k contributes 2 Re(X_k e^{...}); with Re, Im ~ N(0, s^2) its power is
    // 4 s^2, which must equal S * bin_width. The Nyquist bin is real and
    // contributes X^2 directly.
    std::mt19937_64 rng(seed.value);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::complex<double>> bins(half + 1, {0.0, 0.0});
    const bool even = n % 2 == 0;
    for (std::size_t k = 1; k <= last_bin; ++k) {
        if (even && k == half) {
            bins[k] = {2.0 * normal(rng), 0.0};
        } else {
            const double re = normal(rng);
            const double im = normal(rng);
            bins[k] = {re, im};
        }
    }

    std::vector<double> samples(n);
    detail::inverse_real_fft(bins, samples);
    const double amplitude = std::sqrt(spec.spectral_density * bin_width / 4.0);
    simd::scale(amplitude, samples, samples);
    return NoiseTrace(std::move(samples), 1.0 / spec.sample_rate);
}

double mean_square(std::span<const double> samples) {
    if (samples.empty()) throw InvalidParameter("mean_square: empty trace");
    return simd::sum_squares(samples) / static_cast<double>(samples.size());
}

double mean_square(const NoiseTrace& trace) { return mean_square(trace.samples()); }

std::vector<PsdPoint> estimate_psd(const NoiseTrace& trace, std::size_t n_segments) {
    if (n_segments < 1) throw InvalidParameter("estimate_psd: n_segments must be >= 1");
    const std::size_t seg = trace.size() / n_segments;
    if (seg < 16) throw InvalidParameter("estimate_psd: segments shorter than 16 samples");

    std::vector<double> window(seg);
    for (std::size_t i = 0; i < seg; ++i)
        window[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(seg)));
    const double window_power = simd::sum_squares(window);

    const std::size_t n_bins = seg / 2 + 1;
    std::vector<double> acc(n_bins, 0.0);
    std::vector<double> tapered(seg);
    std::vector<std::complex<double>> spectrum(n_bins);
    const auto samples = trace.samples();
    for (std::size_t s = 0; s < n_segments; ++s) {
        simd::multiply(samples.subspan(s * seg, seg), window, tapered);
        detail::forward_real_fft(tapered, spectrum);
        simd::accumulate_norm(spectrum, acc);
    }

    const double fs = 1.0 / trace.dt();
    const double norm = 1.0 / (static_cast<double>(n_segments) * fs * window_power);
    const bool even = seg % 2 == 0;
    std::vector<PsdPoint> out(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
        const bool unpaired = k == 0 || (even && k == seg / 2);
        out[k] = {static_cast<double>(k) * fs / static_cast<double>(seg), acc[k] * norm * (unpaired ? 1.0 : 2.0)};
    }
    return out;
}

double integrate_psd(std::span<const PsdPoint> psd) {
    if (psd.size() < 2) throw InvalidParameter("integrate_psd: need at least 2 points");
    const double df = psd[1].frequency - psd[0].frequency;
    double total = 0.0;
    for (const auto& p : psd) total += p.density;
    return total * df;
}

void write_trace_csv(std::ostream& out, const NoiseTrace& trace) {
    out << "t_seconds,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < trace.size(); ++i)
        out << static_cast<double>(i) * trace.dt() << ',' << trace[i] << '\n';
}

void write_trace_csv(const std::filesystem::path& path, const NoiseTrace& trace) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_trace_csv(out, trace);
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace kljn
