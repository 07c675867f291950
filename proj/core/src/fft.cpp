#include "fft.hpp"

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace tfsst::detail {

namespace {
// FFTW plan creation is not thread-safe.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

Fft::Fft(int n) : n_(n) {
    if (n <= 0) throw std::invalid_argument("fft size must be positive");
    std::lock_guard<std::mutex> lock(plan_mutex());
    buf_ = fftw_alloc_complex(static_cast<std::size_t>(n));
    if (!buf_) throw std::bad_alloc();
    plan_ = fftw_plan_dft_1d(n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    if (!plan_) {
        fftw_free(buf_);
        throw std::runtime_error("fftw plan creation failed");
    }
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(buf_);
}

void Fft::forward(const std::complex<double>* in, std::complex<double>* out) {
    // std::complex<double> is layout-compatible with fftw_complex (C array of 2)
    std::memcpy(static_cast<void*>(buf_), static_cast<const void*>(in),
                sizeof(fftw_complex) * static_cast<std::size_t>(n_));
    fftw_execute(plan_);
    std::memcpy(static_cast<void*>(out), static_cast<const void*>(buf_),
                sizeof(fftw_complex) * static_cast<std::size_t>(n_));
}

}  // namespace tfsst::detail
