#include "kljn/simd/kernels.hpp"

namespace kljn::simd {
namespace {

double sum_squares(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void scale(double a, const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

void square(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * x[i];
}

void multiply(const double* x, const double* w, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * w[i];
}

void accumulate_norm(const double* z, double* acc, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        const double re = z[2 * k];
        const double im = z[2 * k + 1];
        acc[k] += re * re + im * im;
    }
}

}  // namespace

const KernelTable& scalar_kernels() {
    static const KernelTable table{
        Backend::Scalar, &sum_squares, &sum, &dot, &axpby, &scale, &square, &multiply, &accumulate_norm,
    };
    return table;
}

}  // namespace kljn::simd
