#pragma once

#include "tfsst/matrix.hpp"
#include "tfsst/signal.hpp"
#include "tfsst/window.hpp"

#include <vector>

namespace tfsst {

/// Per-sample window width sigma(t) and its derivative sigma'(t).
struct TimeVaryingParam {
    std::vector<double> sigma;        // seconds, one per sample
    std::vector<double> sigma_prime;  // s/s, one per sample

    static TimeVaryingParam constant(double sigma_value, std::size_t n);
    /// sigma' by central differences, one-sided at the ends.
    static TimeVaryingParam from_track(std::vector<double> sigma_track, double sample_rate);

    std::size_t size() const { return sigma.size(); }
    bool is_constant() const;
};

/// Frequency layout of a TF matrix: Half covers [0, fs/2] (real signals),
/// Full covers [-fs/2, fs/2) on a shifted, strictly increasing grid.
enum class Band { Half, Full };

struct TFMatrix {
    Matrix<cplx> values;            // [num_times x num_freqs]
    std::vector<double> time_grid;  // seconds
    std::vector<double> freq_grid;  // Hz
    TimeVaryingParam sigma_track;
    double fs = 0.0;
    int nfft = 0;
    Band band = Band::Half;
    WindowKind kind = WindowKind::G;
    double epsilon = 0.0;

    std::size_t num_times() const { return values.rows(); }
    std::size_t num_freqs() const { return values.cols(); }
    double freq_step() const { return fs / nfft; }
    Matrix<double> magnitude() const;
};

/// Windowed transform with per-sample window width:
///   values[n, m] = sum_k x[n+k] w_{sigma(t_n)}(k/fs) e^{-i 2 pi eta_m k / fs} / fs
/// over the truncated taps, zero-padded at the signal edges.
/// nfft == 0 selects the signal length. Window taps must fit in one frame.
TFMatrix adaptive_stft(const Signal& signal, const TimeVaryingParam& sigma, WindowKind kind,
                       double epsilon = 0.2, int nfft = 0, Band band = Band::Half);

/// Time derivative of the G-kernel transform assembled from the auxiliary
/// transforms (no finite differencing in time):
///   dV/dt = i 2 pi eta V - V^{g'} - (sigma'/sigma) (V + V^{tau g'}).
TFMatrix stft_time_derivative(const Signal& signal, const TimeVaryingParam& sigma,
                              double epsilon = 0.2, int nfft = 0, Band band = Band::Half);

/// Same, reusing precomputed transforms (grids must match).
TFMatrix stft_time_derivative(const TFMatrix& v, const TFMatrix& v_gprime,
                              const TFMatrix& v_tau_gprime);

/// Full-signal inversion: x(t_n) = sigma(t_n)/g(0) * sum_m values[n,m] dEta,
/// with the real case taking 2 Re over [0, fs/2] (trapezoid end weights).
/// Requires kind == G.
Signal reconstruct_full(const TFMatrix& tf, const TimeVaryingParam& sigma, bool real_input);

/// Closed-form Gaussian-window transform of the linear chirp
/// A exp(i 2 pi (c t + r t^2 / 2)) at (t, eta).
cplx lfm_stft_closed_form(double amplitude, double c_hz, double r_hz_per_s, double sigma,
                          double t, double eta);

}  // namespace tfsst
