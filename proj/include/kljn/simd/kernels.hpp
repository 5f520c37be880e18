#pragma once
// Data-parallel inner loops shared by the noise synthesizer, the channel model
// and the spectral estimators.
//
// Every kernel has a scalar reference implementation. Vector variants (AVX2 on
// x86-64, NEON on AArch64) are selected once at runtime. Elementwise kernels
// produce results bit-identical to the scalar reference; reductions agree to a
// few ulps (their accumulation order differs).

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>

namespace kljn::simd {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
    Backend backend;
    /// sum_i x[i]^2
    double (*sum_squares)(const double* x, std::size_t n);
    /// sum_i x[i]
    double (*sum)(const double* x, std::size_t n);
    /// sum_i x[i]*y[i]
    double (*dot)(const double* x, const double* y, std::size_t n);
    /// out[i] = a*x[i] + b*y[i]
    void (*axpby)(double a, const double* x, double b, const double* y, double* out, std::size_t n);
    /// out[i] = a*x[i]
    void (*scale)(double a, const double* x, double* out, std::size_t n);
    /// out[i] = x[i]*x[i]
    void (*square)(const double* x, double* out, std::size_t n);
    /// out[i] = x[i]*w[i]
    void (*multiply)(const double* x, const double* w, double* out, std::size_t n);
    /// acc[k] += |z[k]|^2, z given as interleaved (re, im) pairs
    void (*accumulate_norm)(const double* z, double* acc, std::size_t n);
};

const KernelTable& scalar_kernels();
/// nullptr when the backend was not compiled in or the CPU lacks support.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

/// Table for `backend`, or nullptr when it is unavailable on this host.
const KernelTable* kernels_for(Backend backend);

/// The dispatched table: best available backend, overridable with the
/// KLJN_SIMD environment variable (scalar | avx2 | neon). Resolved once.
const KernelTable& active();

std::string_view backend_name(Backend backend);

// Span conveniences over the active table.

inline double sum_squares(std::span<const double> x) { return active().sum_squares(x.data(), x.size()); }
inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
double dot(std::span<const double> x, std::span<const double> y);
void axpby(double a, std::span<const double> x, double b, std::span<const double> y, std::span<double> out);
void scale(double a, std::span<const double> x, std::span<double> out);
void square(std::span<const double> x, std::span<double> out);
void multiply(std::span<const double> x, std::span<const double> w, std::span<double> out);
void accumulate_norm(std::span<const std::complex<double>> z, std::span<double> acc);

}  // namespace kljn::simd
