// AArch64 only; Advanced SIMD is mandatory there, so no runtime probe.

#include "kljn/simd/kernels.hpp"

#include <arm_neon.h>

namespace kljn::simd {
namespace {

double sum_squares(const double* x, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float64x2_t v0 = vld1q_f64(x + i);
        const float64x2_t v1 = vld1q_f64(x + i + 2);
        a0 = vaddq_f64(a0, vmulq_f64(v0, v0));
        a1 = vaddq_f64(a1, vmulq_f64(v1, v1));
    }
    double acc = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double sum(const double* x, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0);
    float64x2_t a1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        a0 = vaddq_f64(a0, vld1q_f64(x + i));
        a1 = vaddq_f64(a1, vld1q_f64(x + i + 2));
    }
    double acc = vaddvq_f64(vaddq_f64(a0, a1));
    for (; i < n; ++i) acc += x[i];
    return acc;
}

double dot(const double* x, const double* y, std::size_t n) {
    float64x2_t a0 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) a0 = vaddq_f64(a0, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    double acc = vaddvq_f64(a0);
    for (; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    const float64x2_t vb = vdupq_n_f64(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i, vaddq_f64(vmulq_f64(va, vld1q_f64(x + i)), vmulq_f64(vb, vld1q_f64(y + i))));
    for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void scale(double a, const double* x, double* out, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(va, vld1q_f64(x + i)));
    for (; i < n; ++i) out[i] = a * x[i];
}

void square(const double* x, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t v = vld1q_f64(x + i);
        vst1q_f64(out + i, vmulq_f64(v, v));
    }
    for (; i < n; ++i) out[i] = x[i] * x[i];
}

void multiply(const double* x, const double* w, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(vld1q_f64(x + i), vld1q_f64(w + i)));
    for (; i < n; ++i) out[i] = x[i] * w[i];
}

void accumulate_norm(const double* z, double* acc, std::size_t n) {
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const float64x2x2_t v = vld2q_f64(z + 2 * k);  // de-interleave re / im
        const float64x2_t p = vaddq_f64(vmulq_f64(v.val[0], v.val[0]), vmulq_f64(v.val[1], v.val[1]));
        vst1q_f64(acc + k, vaddq_f64(vld1q_f64(acc + k), p));
    }
    for (; k < n; ++k) {
        const double re = z[2 * k];
        const double im = z[2 * k + 1];
        acc[k] += re * re + im * im;
    }
}

}  // namespace

const KernelTable* neon_kernels() {
    static const KernelTable table{
        Backend::Neon, &sum_squares, &sum, &dot, &axpby, &scale, &square, &multiply, &accumulate_norm,
    };
    return &table;
}

}  // namespace kljn::simd
