#include "burgers/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <new>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace burgers::fft {
namespace {

constexpr unsigned kPlanFlags = FFTW_ESTIMATE;

struct AlignedBuffers {
    double* real = nullptr;
    fftw_complex* half = nullptr;
    std::size_t n = 0;

    ~AlignedBuffers() { release(); }
    void release() {
        fftw_free(real);
        fftw_free(half);
        real = nullptr;
        half = nullptr;
    }
    void ensure(std::size_t size) {
        if (size == n) return;
        release();
        real = fftw_alloc_real(size);
        half = fftw_alloc_complex(size / 2 + 1);
        if (!real || !half) throw std::bad_alloc();
        n = size;
    }
};

struct PlanPair {
    fftw_plan r2c = nullptr;
    fftw_plan c2r = nullptr;
    ~PlanPair() {
        if (r2c) fftw_destroy_plan(r2c);
        if (c2r) fftw_destroy_plan(c2r);
    }
};

const PlanPair& plans_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<PlanPair>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<PlanPair>();
        AlignedBuffers buf;
        buf.ensure(n);
        const int size = static_cast<int>(n);
        slot->r2c = fftw_plan_dft_r2c_1d(size, buf.real, buf.half, kPlanFlags);
        slot->c2r = fftw_plan_dft_c2r_1d(size, buf.half, buf.real, kPlanFlags);
        if (!slot->r2c || !slot->c2r) throw std::runtime_error("FFTW planning failed");
    }
    return *slot;
}

AlignedBuffers& scratch(std::size_t n) {
    thread_local AlignedBuffers buf;
    buf.ensure(n);
    return buf;
}

}  // namespace

void forward(std::span<const double> in, std::span<Complex> out) {
    const std::size_t n = in.size();
    if (out.size() != n / 2 + 1) throw std::invalid_argument("fft::forward: size mismatch");
    const auto& p = plans_for(n);
    auto& buf = scratch(n);
    std::copy(in.begin(), in.end(), buf.real);
    fftw_execute_dft_r2c(p.r2c, buf.real, buf.half);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = Complex{buf.half[k][0] * scale, buf.half[k][1] * scale};
}

void inverse(std::span<const Complex> in, std::span<double> out) {
    const std::size_t n = out.size();
    if (in.size() != n / 2 + 1) throw std::invalid_argument("fft::inverse: size mismatch");
    const auto& p = plans_for(n);
    auto& buf = scratch(n);
    for (std::size_t k = 0; k < in.size(); ++k) {
        buf.half[k][0] = in[k].real();
        buf.half[k][1] = in[k].imag();
    }
    buf.half[0][1] = 0.0;
    buf.half[n / 2][1] = 0.0;
    fftw_execute_dft_c2r(p.c2r, buf.half, buf.real);
    std::copy(buf.real, buf.real + n, out.begin());
}

}  // namespace burgers::fft
