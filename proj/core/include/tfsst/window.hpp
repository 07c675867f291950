#pragma once

#include <vector>

namespace tfsst {

/// Frequency half-support of the unit Gaussian's spectrum at threshold eps:
/// |g^(xi)| = exp(-2 pi^2 xi^2) < eps  iff  |xi| > alpha.
double alpha_from_epsilon(double epsilon);

/// Kernel selector for the windowed transforms. All kernels derive from the
/// unit Gaussian g(u) = exp(-u^2/2)/sqrt(2 pi):
///   G          (1/s) g(tau/s)
///   GPrime     (1/s) g'(tau/s)
///   TauG       (tau/s^2) g(tau/s)
///   TauGPrime  (tau/s^2) g'(tau/s)
enum class WindowKind { G, GPrime, TauG, TauGPrime };

struct WindowSpec {
    double sigma;              // window width, seconds
    double epsilon;            // spectral support threshold in (0,1)
    double alpha;              // derived from epsilon
    double truncation_radius;  // seconds; taps live in [-radius, radius]

    // radius = max(2 pi alpha sigma, 6 sigma); the 6-sigma floor keeps the
    // discarded tail below 2e-8 of the peak so ratio fields stay clean at
    // mask fringes.
    static WindowSpec create(double sigma, double epsilon);
};

/// Sampled kernel: weight(k) at time offset k/fs for k in [-radius, radius].
struct WindowTaps {
    int radius = 0;
    std::vector<double> weights;  // size 2*radius+1, index k + radius

    double at(int offset) const { return weights[static_cast<std::size_t>(offset + radius)]; }
    int count() const { return 2 * radius + 1; }
};

/// Evaluate the selected kernel on the sample grid. max_radius_taps, when
/// positive, caps the tap radius (used to keep windows inside one FFT frame);
/// the cap may not violate the 2 pi alpha sigma support invariant.
WindowTaps sample_window(const WindowSpec& spec, WindowKind kind, double sample_rate,
                         int max_radius_taps = 0);

/// Time-domain duration of the width-sigma Gaussian at threshold epsilon: 4 pi sigma alpha.
double window_duration(const WindowSpec& spec);

}  // namespace tfsst
