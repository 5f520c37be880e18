#pragma once
// Thin FFTW wrapper. Plans are created once per size (FFTW_ESTIMATE, so they
// are deterministic) and executed from any thread on thread-local aligned
// buffers.

#include <complex>
#include <span>

namespace kljn::detail {

/// out[j] = sum_{k=0}^{n-1} X_k exp(+2 pi i j k / n), X Hermitian; `half`
/// holds X_0..X_{n/2}. Unnormalized.
void inverse_real_fft(std::span<const std::complex<double>> half, std::span<double> out);

/// half[k] = sum_j x_j exp(-2 pi i j k / n), k = 0..n/2.
void forward_real_fft(std::span<const double> in, std::span<std::complex<double>> half);

}  // namespace kljn::detail
