#include "tfsst/estimate.hpp"

#include "tfsst/separability.hpp"
#include "tfsst/window.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace tfsst;

namespace {

Signal real_lfm(double c, double r, double fs, std::size_t n) {
    Signal s;
    s.sample_rate = fs;
    s.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double t = i / fs;
        s.samples[i] = cplx{std::cos(2 * M_PI * (c * t + 0.5 * r * t * t)), 0.0};
    }
    return s;
}

EstimatorConfig coarse_config() {
    EstimatorConfig cfg;
    cfg.sigma_max = 0.1;
    cfg.sigma_min = 0.02;
    cfg.sigma_step = 0.002;
    return cfg;
}

}  // namespace

TEST_CASE("concentration measure") {
    SUBCASE("single live cell") {
        Matrix<double> m(3, 5, 0.0);
        m(1, 2) = 0.7;
        CHECK(renyi_entropy(m, 1, 0, 2.5) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("uniform field") {
        Matrix<double> m(1, 16, 0.25);
        CHECK(renyi_entropy(m, 0, 0, 2.5) == doctest::Approx(4.0).epsilon(1e-12));
    }
    SUBCASE("amplitude-scale invariance") {
        Matrix<double> m(5, 8, 0.0);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 8; ++j) m(i, j) = 0.1 + 0.05 * i + 0.01 * j;
        double base = renyi_entropy(m, 2, 2, 2.5);
        for (auto& v : m.storage()) v *= 137.5;
        CHECK(std::abs(renyi_entropy(m, 2, 2, 2.5) - base) < 1e-12);
    }
    SUBCASE("empty window sentinel") {
        Matrix<double> m(3, 5, 0.0);
        CHECK(std::isinf(renyi_entropy(m, 1, 1, 2.5)));
    }
}

TEST_CASE("entropy-optimal width") {
    SUBCASE("chirp prefers the rate-matched width") {
        Signal s = real_lfm(64.0, 64.0, 256.0, 256);
        WindowSelector sel(s, coarse_config());
        double got = sel.sigma_u(128);
        CHECK(std::abs(got - 1.0 / std::sqrt(2 * M_PI * 64.0)) <= 2 * 0.002 + 1e-12);
    }
    SUBCASE("tone prefers the widest window") {
        Signal s = real_lfm(60.0, 0.0, 256.0, 256);
        WindowSelector sel(s, coarse_config());
        CHECK(sel.sigma_u(128) == coarse_config().sigma_max);
    }
}

TEST_CASE("peak extraction") {
    SUBCASE("height threshold") {
        std::vector<double> slice(64, 0.0);
        for (int i = 0; i < 64; ++i) {
            slice[i] += std::exp(-0.5 * std::pow((i - 20) / 2.0, 2));
            slice[i] += 0.2 * std::exp(-0.5 * std::pow((i - 45) / 2.0, 2));
        }
        auto pk = extract_peaks(slice, 0.3);
        REQUIRE(pk.size() == 1);
        CHECK(pk[0] == 20);
    }
    SUBCASE("plateau reports its leftmost bin") {
        std::vector<double> slice = {0.0, 1.0, 1.0, 1.0, 0.0, 2.0, 0.0};
        auto pk = extract_peaks(slice, 0.1);
        REQUIRE(pk.size() == 2);
        CHECK(pk[0] == 1);
        CHECK(pk[1] == 5);
    }
    SUBCASE("all-zero slice") {
        std::vector<double> slice(16, 0.0);
        CHECK(extract_peaks(slice, 0.3).empty());
    }
    SUBCASE("two-chirp slice at t = 0.5") {
        Signal s = synth(two_chirp_components(), 256.0, 1.0);
        EstimatorConfig cfg;
        cfg.sigma_max = 0.0437;
        cfg.sigma_min = 0.0437 - 0.001;
        cfg.sigma_step = 0.001;
        WindowSelector sel(s, cfg);
        auto pk = sel.peaks_at(0, 128);
        REQUIRE(pk.size() == 2);
        CHECK(std::abs(pk[0] - 37.0) <= 2.0);
        CHECK(std::abs(pk[1] - 66.0) <= 2.0);
    }
}

TEST_CASE("chirp-rate fit") {
    const double fs = 256.0;
    const double alpha = alpha_from_epsilon(0.2);
    const double sigma = 0.05;
    Signal s = real_lfm(64.0, 64.0, fs, 256);
    TFMatrix tf = adaptive_stft(s, TimeVaryingParam::constant(sigma, s.size()), WindowKind::G);
    auto mag = tf.magnitude();

    SUBCASE("recovers the true rate") {
        int peak = static_cast<int>(std::lround(64.0 + 64.0 * 0.5));
        auto est = estimate_chirp_rate(mag, 128, peak, sigma, alpha, fs, tf.freq_step());
        CHECK_FALSE(est.degenerate);
        double window_span = 4 * M_PI * alpha * sigma;
        double quantum = tf.freq_step() / window_span;
        CHECK(std::abs(est.value - 64.0) <= quantum);
    }
    SUBCASE("tone fits flat") {
        Signal tone = real_lfm(64.0, 0.0, fs, 256);
        TFMatrix tt =
            adaptive_stft(tone, TimeVaryingParam::constant(sigma, tone.size()), WindowKind::G);
        auto tm = tt.magnitude();
        auto est = estimate_chirp_rate(tm, 128, 64, sigma, alpha, fs, tt.freq_step());
        double quantum = tf.freq_step() / (4 * M_PI * alpha * sigma);
        CHECK(std::abs(est.value) <= quantum);
    }
    SUBCASE("constant slice gives slope zero") {
        Matrix<double> flat(64, 32, 1.0);
        auto est = estimate_chirp_rate(flat, 32, 16, sigma, alpha, fs, 1.0);
        CHECK(est.value == 0.0);
    }
    SUBCASE("degenerate window flagged") {
        Matrix<double> tiny(2, 32, 1.0);
        auto est = estimate_chirp_rate(tiny, 0, 16, sigma, alpha, fs, 1.0);
        CHECK(est.degenerate);
        CHECK(est.value == 0.0);
    }
}

TEST_CASE("support intervals") {
    double alpha = alpha_from_epsilon(0.2);

    SUBCASE("flat rate reduces to the tone interval") {
        auto s = support_intervals({50.0}, {0.0}, 0.05, alpha);
        CHECK(s.intervals[0].low == doctest::Approx(50.0 - alpha / 0.05).epsilon(1e-12));
        CHECK(s.intervals[0].high == doctest::Approx(50.0 + alpha / 0.05).epsilon(1e-12));
        CHECK(s.disjoint());
    }
    SUBCASE("two-chirp intervals just touch at the separability width") {
        // at t = 0 the minimal separating width makes the enlarged zones tangent
        double s2 = 0.04376709866536367;
        auto s = support_intervals({12.0, 34.0}, {50.0, 64.0}, s2, alpha);
        CHECK(std::abs(s.intervals[0].high - s.intervals[1].low) < 1e-9);
        CHECK(s.disjoint());
    }
    SUBCASE("alternate lower-edge convention uses the previous peak") {
        auto s = support_intervals({12.0, 34.0}, {50.0, 64.0}, 0.05, alpha, true);
        double half0 = alpha * (1.0 / 0.05 + 2 * M_PI * 50.0 * 0.05);
        CHECK(s.intervals[1].low == doctest::Approx(12.0 - half0).epsilon(1e-12));
    }
}

TEST_CASE("width descent") {
    SUBCASE("single tone descends to the grid floor") {
        Signal s = real_lfm(60.0, 0.0, 256.0, 256);
        EstimatorConfig cfg = coarse_config();
        WindowSelector sel(s, cfg);
        std::vector<double> raw;
        sel.algorithm1(&raw);
        std::size_t at_floor = 0;
        for (double v : raw)
            if (v == cfg.sigma_min) ++at_floor;
        CHECK(static_cast<double>(at_floor) / raw.size() >= 0.95);
    }
    SUBCASE("identity smoothing filter") {
        Signal s = real_lfm(60.0, 0.0, 256.0, 256);
        EstimatorConfig cfg = coarse_config();
        cfg.smoothing = {1.0};
        WindowSelector sel(s, cfg);
        std::vector<double> raw;
        auto est = sel.algorithm1(&raw);
        CHECK(est == raw);
    }
    SUBCASE("track never exceeds the entropy-optimal width") {
        Signal s = synth(two_chirp_components(), 256.0, 1.0);
        EstimatorConfig cfg = coarse_config();
        WindowSelector sel(s, cfg);
        std::vector<double> raw;
        sel.algorithm1(&raw);
        for (std::size_t t = 0; t < raw.size(); ++t)
            CHECK(raw[t] <= sel.sigma_u(static_cast<int>(t)) + 1e-12);
    }
    SUBCASE("deterministic") {
        Signal s = synth(two_chirp_components(), 256.0, 1.0);
        EstimatorConfig cfg = coarse_config();
        WindowSelector sel(s, cfg);
        CHECK(sel.algorithm1() == sel.algorithm1());
        CHECK(sel.algorithm2() == sel.algorithm2());
    }
    SUBCASE("singleton threshold grid reduces the walk to algorithm 1") {
        Signal s = synth(two_chirp_components(), 256.0, 1.0);
        EstimatorConfig cfg = coarse_config();
        cfg.epsilon = 0.2;
        cfg.epsilon_max = 0.2;
        cfg.epsilon_min = 0.2;
        cfg.epsilon_step = 0.01;
        WindowSelector sel(s, cfg);
        CHECK(sel.algorithm1() == sel.algorithm2());
    }
    SUBCASE("inseparable pair keeps the entropy-optimal width") {
        // two tones 5 Hz apart: resolvable as two peaks at the wide end of the
        // grid, but their intervals (half-width alpha/sigma >= 2.86 Hz) overlap
        // at every width in [0.02, 0.1]
        ComponentSpec a, b;
        a.f0 = 50.0;
        a.t_end = 1.0;
        b.f0 = 55.0;
        b.t_end = 1.0;
        Signal s = synth({a, b}, 256.0, 1.0);
        EstimatorConfig cfg = coarse_config();
        cfg.nfft = 1024;  // fine enough bins to resolve both peaks
        WindowSelector sel(s, cfg);
        auto est2 = sel.algorithm2();
        auto su = smooth_track(sel.sigma_u_track(), cfg.smoothing);
        std::size_t same = 0;
        for (std::size_t t = 0; t < est2.size(); ++t)
            if (est2[t] == su[t]) ++same;
        CHECK(static_cast<double>(same) / est2.size() >= 0.9);
    }
}

TEST_CASE("threshold-walk descent separates the three-component signal") {
    // squeezed with the estimated track, the per-time peak count matches the
    // number of active components over most of the interior
    auto comps = three_component_components();
    Signal s = synth(comps, 512.0, 1.0);
    EstimatorConfig cfg;
    cfg.epsilon_min = 0.2;
    cfg.epsilon_max = 0.8;
    cfg.epsilon_step = 0.01;
    WindowSelector sel(s, cfg);
    auto track = sel.algorithm2();
    SstResult sst =
        compute_sst(s, TimeVaryingParam::from_track(track, 512.0), SstVariant::AdpFsst2);

    std::size_t ok = 0, total = 0;
    for (std::size_t i = 51; i <= 460; ++i) {
        double t = i / 512.0;
        int active = 0;
        for (const auto& c : comps) active += c.active_at(t) ? 1 : 0;
        std::vector<double> col(sst.num_freqs());
        for (std::size_t m = 0; m < sst.num_freqs(); ++m) col[m] = std::abs(sst.energy(i, m));
        ++total;
        if (static_cast<int>(extract_peaks(col, 0.3).size()) == active) ++ok;
    }
    CHECK(static_cast<double>(ok) / total >= 0.85);
}

TEST_CASE("entropy-optimal squeezed width") {
    SUBCASE("track minimizes the measured entropy over the grid") {
        Signal s = real_lfm(64.0, 64.0, 256.0, 256);
        EstimatorConfig cfg = coarse_config();
        cfg.sigma_step = 0.01;
        auto track = sigma_renyi_sst(s, cfg, false);
        auto entropy_at = [&](double sigma, int t) {
            SstOptions opts;
            SstResult sst = compute_sst(s, TimeVaryingParam::constant(sigma, s.size()),
                                        SstVariant::Fsst, opts);
            Matrix<double> mag(sst.num_times(), sst.num_freqs());
            for (std::size_t i = 0; i < sst.num_times(); ++i)
                for (std::size_t m = 0; m < sst.num_freqs(); ++m)
                    mag(i, m) = std::abs(sst.energy(i, m));
            return renyi_entropy(mag, t, cfg.renyi_zeta, cfg.renyi_ell);
        };
        for (int t : {64, 128, 192}) {
            double best = entropy_at(track[static_cast<std::size_t>(t)], t);
            for (double sigma : cfg.sigma_grid())
                CHECK(best <= entropy_at(sigma, t) + 1e-12);
        }
    }
    SUBCASE("clean chirp drives the first-order optimum toward small widths") {
        // reassignment of a first-order estimate degrades as the width grows
        // (the bias slope approaches one), so sharper means smaller here
        Signal s = real_lfm(64.0, 64.0, 256.0, 256);
        EstimatorConfig cfg = coarse_config();
        auto track = sigma_renyi_sst(s, cfg, false);
        CHECK(track[128] <= 1.0 / std::sqrt(2 * M_PI * 64.0));
    }
    SUBCASE("amplitude invariance") {
        Signal s = real_lfm(64.0, 64.0, 256.0, 128);
        Signal s3 = s;
        for (auto& v : s3.samples) v *= 3.0;
        EstimatorConfig cfg = coarse_config();
        cfg.sigma_step = 0.01;
        CHECK(sigma_renyi_sst(s, cfg, false) == sigma_renyi_sst(s3, cfg, false));
    }
    SUBCASE("singleton grid returns itself") {
        Signal s = real_lfm(64.0, 64.0, 256.0, 128);
        EstimatorConfig cfg;
        cfg.sigma_max = 0.05;
        cfg.sigma_min = 0.049;
        cfg.sigma_step = 0.001;
        auto track = sigma_renyi_sst(s, cfg, false);
        for (double v : track) CHECK((v == 0.05 || v == 0.049));
    }
}

TEST_CASE("config validation") {
    EstimatorConfig cfg;
    cfg.sigma_min = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = EstimatorConfig{};
    cfg.gamma1 = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = EstimatorConfig{};
    cfg.renyi_ell = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_NOTHROW(EstimatorConfig{}.validate());
}
