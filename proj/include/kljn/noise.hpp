#pragma once
// Band-limited white Gaussian noise: Johnson densities, synthesis, and the
// estimators the simulator and its tests rely on.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "kljn/seed.hpp"

namespace kljn {

/// Exact SI value.
inline constexpr double kBoltzmann = 1.380649e-23;

struct NoiseSpec {
    double spectral_density = 0.0;  ///< one-sided, V^2/Hz
    double bandwidth = 1.0;         ///< Hz
    double sample_rate = 8.0;       ///< Hz
    std::size_t n_samples = 2;

    /// Throws InvalidParameter on a violated invariant.
    void validate() const;
    double oversampling() const { return sample_rate / (2.0 * bandwidth); }
};

/// Uniformly sampled waveform. Voltage traces carry V, current traces A.
class NoiseTrace {
public:
    /// Throws InvalidParameter unless dt > 0, size >= 2 and all samples finite.
    NoiseTrace(std::vector<double> samples, double dt);

    static NoiseTrace constant(double value, std::size_t n, double dt);

    std::span<const double> samples() const noexcept { return samples_; }
    double dt() const noexcept { return dt_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double duration() const noexcept { return dt_ * static_cast<double>(samples_.size()); }
    double operator[](std::size_t i) const { return samples_[i]; }

    friend bool operator==(const NoiseTrace&, const NoiseTrace&) = default;

private:
    std::vector<double> samples_;
    double dt_;
};

/// 4 k T_eff R, the one-sided open-circuit density of a resistor's noise source.
double johnson_spectral_density(double resistance, double t_eff, double boltzmann_k = kBoltzmann);

/// Zero-mean Gaussian trace with one-sided PSD `spectral_density` on
/// (0, bandwidth] and nothing above. Built in the frequency domain: independent
/// complex Gaussian bins up to the band edge, zero DC and zero above, inverse
/// real FFT. The trace is one period of the synthesized process. Pure in
/// (spec, seed).
NoiseTrace synthesize(const NoiseSpec& spec, Seed seed);

/// Boxcar estimator: arithmetic mean of the squared samples.
double mean_square(std::span<const double> samples);
double mean_square(const NoiseTrace& trace);

struct PsdPoint {
    double frequency;  ///< Hz
    double density;    ///< unit^2/Hz, one-sided
};

/// Averaged periodogram over `n_segments` equal non-overlapping Hann-windowed
/// segments (trailing samples that do not fill a segment are dropped). The
/// segment mean is NOT removed. Integral over frequency ~ mean square.
std::vector<PsdPoint> estimate_psd(const NoiseTrace& trace, std::size_t n_segments);

/// Rectangle-rule integral (sum of density x bin width). For an estimate from
/// estimate_psd this equals the window-weighted mean square exactly.
double integrate_psd(std::span<const PsdPoint> psd);

/// CSV export: header `t_seconds,value`, one row per sample, 17 significant digits.
void write_trace_csv(std::ostream& out, const NoiseTrace& trace);
void write_trace_csv(const std::filesystem::path& path, const NoiseTrace& trace);

}  // namespace kljn
