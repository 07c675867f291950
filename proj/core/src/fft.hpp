#pragma once

#include <complex>
#include <cstddef>

#include <fftw3.h>

namespace tfsst::detail {

/// Forward complex DFT of a fixed size, one scratch buffer per instance.
/// Instances are not thread-safe; use one per worker.
class Fft {
public:
    explicit Fft(int n);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    int size() const { return n_; }

    /// out[m] = sum_k in[k] e^{-i 2 pi m k / n}
    void forward(const std::complex<double>* in, std::complex<double>* out);

private:
    int n_;
    fftw_complex* buf_;
    fftw_plan plan_;
};

}  // namespace tfsst::detail
