#include "tfsst/signal.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace tfsst {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Box-Muller on top of the engine's uniform output; std::normal_distribution
// is implementation-defined and would break cross-build reproducibility.
class GaussDraw {
public:
    explicit GaussDraw(std::uint64_t seed) : rng_(seed) {}
    double operator()() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        have_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

private:
    double uniform() {
        // (0, 1]; avoids log(0)
        return (static_cast<double>(rng_()) + 1.0) * 0x1.0p-64;
    }
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_ = false;
};
}  // namespace

std::vector<double> Signal::real_part() const {
    std::vector<double> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) out[i] = samples[i].real();
    return out;
}

double Signal::power() const {
    double p = 0.0;
    for (const auto& s : samples) p += std::norm(s);
    return samples.empty() ? 0.0 : p / static_cast<double>(samples.size());
}

double ComponentSpec::phase_cycles(double t) const {
    return phase_base + f0 * t + 0.5 * chirp * t * t +
           mod_amp * std::cos(2.0 * kPi * mod_freq * t + mod_phase);
}

double ComponentSpec::amplitude_at(double t) const {
    return amplitude * std::exp(amp_p * t + 0.5 * amp_q * t * t);
}

namespace {
Signal synth_impl(const std::vector<ComponentSpec>& components, double sample_rate,
                  double duration, bool analytic) {
    if (components.empty()) throw std::invalid_argument("component list is empty");
    if (!(sample_rate > 0.0)) throw std::invalid_argument("sample_rate must be positive");
    if (!(duration > 0.0)) throw std::invalid_argument("duration must be positive");

    auto n = static_cast<std::size_t>(std::llround(duration * sample_rate));
    if (n < 2) throw std::invalid_argument("signal must have at least 2 samples");

    Signal out;
    out.sample_rate = sample_rate;
    out.real = !analytic;
    out.samples.assign(n, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(i) / sample_rate;
        cplx acc{0.0, 0.0};
        for (const auto& c : components) {
            if (!c.active_at(t)) continue;
            double ph = 2.0 * kPi * c.phase_cycles(t);
            double a = c.amplitude_at(t);
            if (analytic)
                acc += a * cplx{std::cos(ph), std::sin(ph)};
            else
                acc += a * std::cos(ph);
        }
        out.samples[i] = acc;
    }
    return out;
}
}  // namespace

Signal synth(const std::vector<ComponentSpec>& components, double sample_rate, double duration) {
    return synth_impl(components, sample_rate, duration, false);
}

Signal synth_analytic(const std::vector<ComponentSpec>& components, double sample_rate,
                      double duration) {
    return synth_impl(components, sample_rate, duration, true);
}

double ground_truth_if(const ComponentSpec& spec, double t) {
    if (!spec.active_at(t)) throw std::out_of_range("t outside component support");
    return spec.f0 + spec.chirp * t -
           spec.mod_amp * 2.0 * kPi * spec.mod_freq *
               std::sin(2.0 * kPi * spec.mod_freq * t + spec.mod_phase);
}

double ground_truth_chirp_rate(const ComponentSpec& spec, double t) {
    if (!spec.active_at(t)) throw std::out_of_range("t outside component support");
    double w = 2.0 * kPi * spec.mod_freq;
    return spec.chirp - spec.mod_amp * w * w * std::cos(w * t + spec.mod_phase);
}

Signal add_noise(const Signal& signal, double snr_db, std::uint64_t seed) {
    if (!std::isfinite(snr_db)) throw std::invalid_argument("snr must be finite");
    double ps = signal.power();
    if (!(ps > 0.0)) throw std::invalid_argument("cannot add noise to a zero-power signal");

    GaussDraw draw(seed);
    std::size_t n = signal.size();
    Signal out = signal;

    if (signal.real) {
        std::vector<double> e(n);
        double pe = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            e[i] = draw();
            pe += e[i] * e[i];
        }
        pe /= static_cast<double>(n);
        double scale = std::sqrt(ps * std::pow(10.0, -snr_db / 10.0) / pe);
        for (std::size_t i = 0; i < n; ++i) out.samples[i] += scale * e[i];
    } else {
        std::vector<cplx> e(n);
        double pe = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            e[i] = cplx{draw(), draw()};
            pe += std::norm(e[i]);
        }
        pe /= static_cast<double>(n);
        double scale = std::sqrt(ps * std::pow(10.0, -snr_db / 10.0) / pe);
        for (std::size_t i = 0; i < n; ++i) out.samples[i] += scale * e[i];
    }
    return out;
}

std::vector<ComponentSpec> two_chirp_components() {
    // cos(2 pi (12 t + 25 t^2)) + cos(2 pi (34 t + 32 t^2)) on [0, 1]
    ComponentSpec c1;
    c1.f0 = 12.0;
    c1.chirp = 50.0;
    c1.t_end = 1.0;
    ComponentSpec c2;
    c2.f0 = 34.0;
    c2.chirp = 64.0;
    c2.t_end = 1.0;
    return {c1, c2};
}

std::vector<ComponentSpec> three_component_components() {
    // cos(118 pi (t-1/2) + 100 pi (t-1/2)^2) on [1/2, 1]
    //   = cos(2 pi (9 t + 50 t^2 - 17)) there
    ComponentSpec z1;
    z1.phase_base = -17.0;
    z1.f0 = 9.0;
    z1.chirp = 100.0;
    z1.t_start = 0.5;
    z1.t_end = 1.0;
    // cos(94 pi t + 13 cos(4 pi t - pi/2) + 110 pi t^2) on [0, 1]
    ComponentSpec z2;
    z2.f0 = 47.0;
    z2.chirp = 110.0;
    z2.mod_amp = 13.0 / (2.0 * kPi);
    z2.mod_freq = 2.0;
    z2.mod_phase = -kPi / 2.0;
    z2.t_end = 1.0;
    // cos(194 pi t + 112 pi t^2) on [0, 3/4]
    ComponentSpec z3;
    z3.f0 = 97.0;
    z3.chirp = 112.0;
    z3.t_end = 0.75;
    return {z1, z2, z3};
}

bool builtin_signal(const std::string& name, std::vector<ComponentSpec>& components,
                    double& sample_rate, double& duration) {
    if (name == "two-chirp") {
        components = two_chirp_components();
        sample_rate = 256.0;
        duration = 1.0;
        return true;
    }
    if (name == "three-component") {
        components = three_component_components();
        sample_rate = 512.0;
        duration = 1.0;
        return true;
    }
    return false;
}

}  // namespace tfsst
