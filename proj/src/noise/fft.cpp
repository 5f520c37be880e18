#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <utility>

#include "kljn/errors.hpp"

namespace kljn::detail {
namespace {

enum class Direction { Forward, Inverse };

struct AlignedBuffer {
    void* ptr = nullptr;
    std::size_t bytes = 0;

    ~AlignedBuffer() { fftw_free(ptr); }

    void* reserve(std::size_t n) {
        if (n > bytes) {
            fftw_free(ptr);
            ptr = fftw_malloc(n);
            bytes = n;
        }
        return ptr;
    }
};

// One pair of buffers per thread; new-array execution requires the same
// alignment the plan was made with, which fftw_malloc guarantees.
struct Workspace {
    AlignedBuffer real;
    AlignedBuffer complex;
};

Workspace& workspace() {
    thread_local Workspace ws;
    return ws;
}

class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(Direction dir, int n, double* real, fftw_complex* cplx) {
        std::lock_guard lock(mutex_);
        const auto key = std::make_pair(dir, n);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        fftw_plan plan = dir == Direction::Forward
                             ? fftw_plan_dft_r2c_1d(n, real, cplx, FFTW_ESTIMATE)
                             : fftw_plan_dft_c2r_1d(n, cplx, real, FFTW_ESTIMATE);
        if (plan == nullptr) throw Error("fftw: plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<Direction, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

}  // namespace

void inverse_real_fft(std::span<const std::complex<double>> half, std::span<double> out) {
    const std::size_t n = out.size();
    if (half.size() != n / 2 + 1) throw InvalidParameter("inverse_real_fft: expected n/2+1 bins");
    Workspace& ws = workspace();
    auto* real = static_cast<double*>(ws.real.reserve(n * sizeof(double)));
    auto* cplx = static_cast<fftw_complex*>(ws.complex.reserve(half.size() * sizeof(fftw_complex)));
    // c2r overwrites its input, so the caller's bins go through the workspace.
    std::copy(half.begin(), half.end(), reinterpret_cast<std::complex<double>*>(cplx));
    fftw_plan plan = plan_cache().get(Direction::Inverse, static_cast<int>(n), real, cplx);
    fftw_execute_dft_c2r(plan, cplx, real);
    std::copy(real, real + n, out.begin());
}

void forward_real_fft(std::span<const double> in, std::span<std::complex<double>> half) {
    const std::size_t n = in.size();
    if (half.size() != n / 2 + 1) throw InvalidParameter("forward_real_fft: expected n/2+1 bins");
    Workspace& ws = workspace();
    auto* real = static_cast<double*>(ws.real.reserve(n * sizeof(double)));
    auto* cplx = static_cast<fftw_complex*>(ws.complex.reserve(half.size() * sizeof(fftw_complex)));
    std::copy(in.begin(), in.end(), real);
    fftw_plan plan = plan_cache().get(Direction::Forward, static_cast<int>(n), real, cplx);
    fftw_execute_dft_r2c(plan, real, cplx);
    const auto* result = reinterpret_cast<const std::complex<double>*>(cplx);
    std::copy(result, result + half.size(), half.begin());
}

}  // namespace kljn::detail
