#include "tfsst/window.hpp"

#include <cmath>
#include <stdexcept>

namespace tfsst {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // g(0)

double unit_gauss(double u) { return kInvSqrt2Pi * std::exp(-0.5 * u * u); }
}  // namespace

double alpha_from_epsilon(double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0,1)");
    return std::sqrt(2.0 * std::log(1.0 / epsilon)) / (2.0 * kPi);
}

WindowSpec WindowSpec::create(double sigma, double epsilon) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    double alpha = alpha_from_epsilon(epsilon);
    double radius = std::max(2.0 * kPi * alpha * sigma, 6.0 * sigma);
    return WindowSpec{sigma, epsilon, alpha, radius};
}

WindowTaps sample_window(const WindowSpec& spec, WindowKind kind, double sample_rate,
                         int max_radius_taps) {
    if (!(sample_rate > 0.0)) throw std::invalid_argument("sample_rate must be positive");
    if (!(spec.sigma > 0.0)) throw std::invalid_argument("window sigma must be positive");

    int radius = static_cast<int>(std::floor(spec.truncation_radius * sample_rate));
    if (max_radius_taps > 0 && radius > max_radius_taps) {
        radius = max_radius_taps;
        double min_radius = 2.0 * kPi * spec.alpha * spec.sigma;
        if (static_cast<double>(radius) / sample_rate < min_radius)
            throw std::invalid_argument(
                "window does not fit the transform frame; increase nfft or reduce sigma");
    }
    if (radius < 1)
        throw std::invalid_argument("window under-resolved: fewer than 3 taps at this sample rate");

    WindowTaps taps;
    taps.radius = radius;
    taps.weights.resize(static_cast<std::size_t>(2 * radius + 1));
    const double s = spec.sigma;
    for (int k = -radius; k <= radius; ++k) {
        double tau = static_cast<double>(k) / sample_rate;
        double u = tau / s;
        double g = unit_gauss(u);
        double w = 0.0;
        switch (kind) {
            case WindowKind::G:         w = g / s; break;
            case WindowKind::GPrime:    w = -u * g / s; break;
            case WindowKind::TauG:      w = tau / (s * s) * g; break;
            case WindowKind::TauGPrime: w = tau / (s * s) * (-u * g); break;
        }
        taps.weights[static_cast<std::size_t>(k + radius)] = w;
    }
    return taps;
}

double window_duration(const WindowSpec& spec) {
    return 4.0 * kPi * spec.sigma * spec.alpha;
}

}  // namespace tfsst
