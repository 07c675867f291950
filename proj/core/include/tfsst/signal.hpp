#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace tfsst {

using cplx = std::complex<double>;

/// Uniformly sampled signal. Real signals keep zero imaginary parts and
/// real == true; that flag selects half-band transforms and the 2*Re
/// reconstruction path.
struct Signal {
    std::vector<cplx> samples;
    double sample_rate = 0.0;
    double t0 = 0.0;
    bool real = true;

    std::size_t size() const { return samples.size(); }
    double time_at(std::size_t n) const { return t0 + static_cast<double>(n) / sample_rate; }
    std::vector<double> real_part() const;
    double power() const;  // mean |x|^2
};

/// One oscillatory component: amplitude A exp(p t + q t^2 / 2) and phase (in
/// cycles) base + f0 t + chirp t^2/2 + mod_amp cos(2 pi mod_freq t + mod_phase),
/// active on [t_start, t_end]. Covers constant tones, linear chirps,
/// Gaussian-amplitude chirps and the sinusoidally modulated test components.
struct ComponentSpec {
    double amplitude = 1.0;
    double amp_p = 0.0;  // exponential-amplitude linear coefficient, 1/s
    double amp_q = 0.0;  // exponential-amplitude quadratic coefficient, 1/s^2

    double phase_base = 0.0;  // cycles
    double f0 = 0.0;          // Hz
    double chirp = 0.0;       // Hz/s
    double mod_amp = 0.0;     // cycles
    double mod_freq = 0.0;    // Hz
    double mod_phase = 0.0;   // radians

    double t_start = 0.0;
    double t_end = 0.0;

    bool active_at(double t) const { return t >= t_start && t <= t_end; }
    double phase_cycles(double t) const;
    double amplitude_at(double t) const;
};

/// Pointwise sum of A_k(t) cos(2 pi phi_k(t)) on each component's support.
Signal synth(const std::vector<ComponentSpec>& components, double sample_rate, double duration);

/// Complex counterpart A_k(t) exp(i 2 pi phi_k(t)); used by oracle tests.
Signal synth_analytic(const std::vector<ComponentSpec>& components, double sample_rate,
                      double duration);

/// Analytic instantaneous frequency phi'(t) in Hz. Throws std::out_of_range
/// outside the support.
double ground_truth_if(const ComponentSpec& spec, double t);

/// Analytic chirp rate phi''(t) in Hz/s. Throws std::out_of_range outside the support.
double ground_truth_chirp_rate(const ComponentSpec& spec, double t);

/// Additive white Gaussian noise scaled per realization so the empirical SNR
/// equals snr_db exactly. Deterministic per seed.
Signal add_noise(const Signal& signal, double snr_db, std::uint64_t seed);

/// Built-in test signals.
std::vector<ComponentSpec> two_chirp_components();        // 256 Hz, 1 s
std::vector<ComponentSpec> three_component_components();  // 512 Hz, 1 s
bool builtin_signal(const std::string& name, std::vector<ComponentSpec>& components,
                    double& sample_rate, double& duration);

}  // namespace tfsst
