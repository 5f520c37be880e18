#include <cstdlib>
#include <string>

#include "kljn/errors.hpp"
#include "kljn/simd/kernels.hpp"

namespace kljn::simd {

#if !KLJN_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif
#if !KLJN_HAVE_NEON
const KernelTable* neon_kernels() { return nullptr; }
#endif

const KernelTable* kernels_for(Backend backend) {
    switch (backend) {
        case Backend::Scalar: return &scalar_kernels();
        case Backend::Avx2: return avx2_kernels();
        case Backend::Neon: return neon_kernels();
    }
    return nullptr;
}

std::string_view backend_name(Backend backend) {
    switch (backend) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "unknown";
}

namespace {

const KernelTable& resolve() {
    if (const char* forced = std::getenv("KLJN_SIMD")) {
        const std::string name(forced);
        for (Backend b : {Backend::Scalar, Backend::Avx2, Backend::Neon}) {
            if (name == backend_name(b)) {
                if (const KernelTable* t = kernels_for(b)) return *t;
            }
        }
        // unknown or unavailable: fall through to auto-detection
    }
    if (const KernelTable* t = avx2_kernels()) return *t;
    if (const KernelTable* t = neon_kernels()) return *t;
    return scalar_kernels();
}

void require_same_size(std::size_t a, std::size_t b) {
    if (a != b) throw InvalidParameter("simd: operand lengths differ");
}

}  // namespace

const KernelTable& active() {
    static const KernelTable& table = resolve();
    return table;
}

double dot(std::span<const double> x, std::span<const double> y) {
    require_same_size(x.size(), y.size());
    return active().dot(x.data(), y.data(), x.size());
}

void axpby(double a, std::span<const double> x, double b, std::span<const double> y, std::span<double> out) {
    require_same_size(x.size(), y.size());
    require_same_size(x.size(), out.size());
    active().axpby(a, x.data(), b, y.data(), out.data(), x.size());
}

void scale(double a, std::span<const double> x, std::span<double> out) {
    require_same_size(x.size(), out.size());
    active().scale(a, x.data(), out.data(), x.size());
}

void square(std::span<const double> x, std::span<double> out) {
    require_same_size(x.size(), out.size());
    active().square(x.data(), out.data(), x.size());
}

void multiply(std::span<const double> x, std::span<const double> w, std::span<double> out) {
    require_same_size(x.size(), w.size());
    require_same_size(x.size(), out.size());
    active().multiply(x.data(), w.data(), out.data(), x.size());
}

void accumulate_norm(std::span<const std::complex<double>> z, std::span<double> acc) {
    require_same_size(z.size(), acc.size());
    active().accumulate_norm(reinterpret_cast<const double*>(z.data()), acc.data(), z.size());
}

}  // namespace kljn::simd
