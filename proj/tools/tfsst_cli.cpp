#include "tfsst/io.hpp"
#include "tfsst/ridge.hpp"
#include "tfsst/separability.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCompute = 3;

using namespace tfsst;

struct CommonOpts {
    std::string signal = "two-chirp";
    double sample_rate = 0.0;
    double duration = 0.0;
    std::string sigma_policy = "const";
    double sigma_const = 0.05;
    std::string variant = "adp_fsst2";
    double epsilon = 0.2;
    int nfft = 0;
    double threshold = kDefaultPhaseThreshold;
    double sigma_min = 0.001, sigma_max = 0.2, sigma_step = 0.001;
    double eps_min = 0.2, eps_max = 0.8, eps_step = 0.01;
    double gamma1 = 0.3;
    double renyi_ell = 2.5;
    int renyi_zeta = 4;
    int smooth_taps = 5;
    int num_components = 0;
    int gamma_bins = 15;
    int jump_cap = 2;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--signal", o.signal,
                    "builtin name (two-chirp, three-component) or csv:<path>");
    cmd->add_option("--fs", o.sample_rate, "sample rate override, Hz");
    cmd->add_option("--duration", o.duration, "duration override, s");
    cmd->add_option("--epsilon", o.epsilon, "spectral support threshold");
    cmd->add_option("--nfft", o.nfft, "FFT length (0: signal length)");
    cmd->add_option("--threshold", o.threshold, "phase-transform validity threshold");
}

void add_estimator(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--sigma-min", o.sigma_min, "width grid minimum, s");
    cmd->add_option("--sigma-max", o.sigma_max, "width grid maximum, s");
    cmd->add_option("--sigma-step", o.sigma_step, "width grid step, s");
    cmd->add_option("--eps-min", o.eps_min, "threshold walk minimum");
    cmd->add_option("--eps-max", o.eps_max, "threshold walk maximum");
    cmd->add_option("--eps-step", o.eps_step, "threshold walk step");
    cmd->add_option("--gamma1", o.gamma1, "peak height threshold");
    cmd->add_option("--renyi-ell", o.renyi_ell, "entropy order");
    cmd->add_option("--renyi-zeta", o.renyi_zeta, "entropy window half-width, samples");
    cmd->add_option("--smooth-taps", o.smooth_taps, "smoothing filter length");
}

ExperimentConfig to_config(const CommonOpts& o) {
    ExperimentConfig cfg;
    cfg.signal = o.signal;
    cfg.sample_rate = o.sample_rate;
    cfg.duration = o.duration;
    if (!variant_from_string(o.variant, cfg.variant))
        throw std::invalid_argument("unknown variant '" + o.variant + "'");
    if (!policy_from_string(o.sigma_policy, cfg.policy))
        throw std::invalid_argument("unknown sigma policy '" + o.sigma_policy + "'");
    if (o.sigma_policy.rfind("const:", 0) == 0)
        cfg.sigma_const = std::stod(o.sigma_policy.substr(6));
    else
        cfg.sigma_const = o.sigma_const;
    cfg.estimator.epsilon = o.epsilon;
    cfg.estimator.nfft = o.nfft;
    cfg.estimator.sigma_min = o.sigma_min;
    cfg.estimator.sigma_max = o.sigma_max;
    cfg.estimator.sigma_step = o.sigma_step;
    cfg.estimator.epsilon_min = o.eps_min;
    cfg.estimator.epsilon_max = o.eps_max;
    cfg.estimator.epsilon_step = o.eps_step;
    cfg.estimator.gamma1 = o.gamma1;
    cfg.estimator.renyi_ell = o.renyi_ell;
    cfg.estimator.renyi_zeta = o.renyi_zeta;
    if (o.smooth_taps < 1) throw std::invalid_argument("--smooth-taps must be >= 1");
    cfg.estimator.smoothing.assign(static_cast<std::size_t>(o.smooth_taps),
                                   1.0 / o.smooth_taps);
    cfg.threshold = o.threshold;
    cfg.num_components = o.num_components;
    cfg.gamma_bins = o.gamma_bins;
    cfg.jump_cap = o.jump_cap;
    return cfg;
}

Matrix<double> sst_magnitude(const SstResult& sst) {
    Matrix<double> m(sst.num_times(), sst.num_freqs());
    for (std::size_t i = 0; i < sst.num_times(); ++i)
        for (std::size_t j = 0; j < sst.num_freqs(); ++j) m(i, j) = std::abs(sst.energy(i, j));
    return m;
}

SstResult build_sst(const CommonOpts& o, Signal& signal, std::vector<double>& track,
                    std::vector<ComponentSpec>& comps) {
    ExperimentConfig cfg = to_config(o);
    signal = load_signal(cfg, &comps);
    track = sigma_track_for_policy(signal, cfg, comps);
    SstOptions opts;
    opts.epsilon = o.epsilon;
    opts.nfft = o.nfft;
    opts.threshold = o.threshold;
    return compute_sst(signal, TimeVaryingParam::from_track(track, signal.sample_rate),
                       cfg.variant, opts);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adaptive time-frequency transforms and synchrosqueezing"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string out_path = "out.csv";
    std::string pgm_path;
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 1;
    std::string config_path;

    auto* synth_cmd = app.add_subcommand("synth", "generate a builtin signal as CSV");
    add_common(synth_cmd, o);
    synth_cmd->add_option("--snr", snr_db, "add noise at this SNR, dB");
    synth_cmd->add_option("--seed", seed, "noise seed");
    synth_cmd->add_option("-o,--out", out_path, "output CSV");

    auto* stft_cmd = app.add_subcommand("stft", "windowed transform magnitude");
    add_common(stft_cmd, o);
    stft_cmd->add_option("--sigma-policy", o.sigma_policy, "const|const:V|sigma1|sigma2|u|est|est2|re|re2");
    stft_cmd->add_option("--sigma", o.sigma_const, "constant window width, s");
    add_estimator(stft_cmd, o);
    stft_cmd->add_option("-o,--out", out_path, "output CSV");
    stft_cmd->add_option("--pgm", pgm_path, "also write a PGM image");

    auto* fsst_cmd = app.add_subcommand("fsst", "synchrosqueezed transform magnitude");
    add_common(fsst_cmd, o);
    fsst_cmd->add_option("--variant", o.variant,
                         "fsst|fsst2|adp_fsst|adp_fsst2|regular_pt_adp|regular_pt_adp2");
    fsst_cmd->add_option("--sigma-policy", o.sigma_policy, "width policy");
    fsst_cmd->add_option("--sigma", o.sigma_const, "constant window width, s");
    add_estimator(fsst_cmd, o);
    fsst_cmd->add_option("-o,--out", out_path, "output CSV");
    fsst_cmd->add_option("--pgm", pgm_path, "also write a PGM image");

    auto* sel_cmd = app.add_subcommand("select-sigma", "estimate a window width track");
    add_common(sel_cmd, o);
    sel_cmd->add_option("--sigma-policy", o.sigma_policy, "u|est|est2|re|re2|sigma1|sigma2")
        ->required();
    add_estimator(sel_cmd, o);
    sel_cmd->add_option("-o,--out", out_path, "output CSV (time,sigma)");

    auto* ridge_cmd = app.add_subcommand("ridge", "extract component ridges");
    add_common(ridge_cmd, o);
    ridge_cmd->add_option("--variant", o.variant, "transform variant");
    ridge_cmd->add_option("--sigma-policy", o.sigma_policy, "width policy");
    ridge_cmd->add_option("--sigma", o.sigma_const, "constant window width, s");
    add_estimator(ridge_cmd, o);
    ridge_cmd->add_option("-k,--components", o.num_components, "number of components");
    ridge_cmd->add_option("--gamma-bins", o.gamma_bins, "extraction/integration band half-width");
    ridge_cmd->add_option("--jump-cap", o.jump_cap, "ridge jump cap, bins per step");
    ridge_cmd->add_option("-o,--out", out_path, "output CSV (time,f1,f2,...)");

    auto* rec_cmd = app.add_subcommand("reconstruct", "recover components from ridges");
    add_common(rec_cmd, o);
    rec_cmd->add_option("--variant", o.variant, "transform variant");
    rec_cmd->add_option("--sigma-policy", o.sigma_policy, "width policy");
    rec_cmd->add_option("--sigma", o.sigma_const, "constant window width, s");
    add_estimator(rec_cmd, o);
    rec_cmd->add_option("-k,--components", o.num_components, "number of components");
    rec_cmd->add_option("--gamma-bins", o.gamma_bins, "integration band half-width");
    rec_cmd->add_option("--jump-cap", o.jump_cap, "ridge jump cap, bins per step");
    rec_cmd->add_option("-o,--out", out_path, "output prefix (writes <prefix>_k.csv)");

    auto* ent_cmd = app.add_subcommand("entropy", "per-time concentration of a representation");
    add_common(ent_cmd, o);
    ent_cmd->add_option("--variant", o.variant, "transform variant (or 'stft')");
    ent_cmd->add_option("--sigma-policy", o.sigma_policy, "width policy");
    ent_cmd->add_option("--sigma", o.sigma_const, "constant window width, s");
    add_estimator(ent_cmd, o);
    ent_cmd->add_option("-o,--out", out_path, "output CSV (time,entropy)");

    auto* exp_cmd = app.add_subcommand("experiment", "run a configured experiment");
    exp_cmd->add_option("-c,--config", config_path, "key = value config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth_cmd->parsed()) {
            ExperimentConfig cfg = to_config(o);
            std::vector<ComponentSpec> comps;
            Signal s = load_signal(cfg, &comps);
            if (std::isfinite(snr_db)) s = add_noise(s, snr_db, seed);
            write_signal_csv(s, out_path);
            std::cout << "wrote " << out_path << " (" << s.size() << " samples at "
                      << s.sample_rate << " Hz)\n";
            return kExitOk;
        }
        if (stft_cmd->parsed()) {
            ExperimentConfig cfg = to_config(o);
            std::vector<ComponentSpec> comps;
            Signal s = load_signal(cfg, &comps);
            auto track = sigma_track_for_policy(s, cfg, comps);
            TFMatrix v = adaptive_stft(s, TimeVaryingParam::from_track(track, s.sample_rate),
                                       WindowKind::G, o.epsilon, o.nfft,
                                       s.real ? Band::Half : Band::Full);
            auto mag = v.magnitude();
            write_tf_csv(mag, v.time_grid, v.freq_grid, out_path);
            if (!pgm_path.empty()) write_tf_pgm(mag, pgm_path);
            std::cout << "wrote " << out_path << " (" << v.num_times() << " x " << v.num_freqs()
                      << ")\n";
            return kExitOk;
        }
        if (fsst_cmd->parsed()) {
            Signal s;
            std::vector<double> track;
            std::vector<ComponentSpec> comps;
            SstResult sst = build_sst(o, s, track, comps);
            auto mag = sst_magnitude(sst);
            write_tf_csv(mag, sst.time_grid, sst.out_freq_grid, out_path);
            if (!pgm_path.empty()) write_tf_pgm(mag, pgm_path);
            std::cout << "wrote " << out_path << " (dropped " << sst.dropped_cells
                      << " out-of-band cells)\n";
            return kExitOk;
        }
        if (sel_cmd->parsed()) {
            ExperimentConfig cfg = to_config(o);
            std::vector<ComponentSpec> comps;
            Signal s = load_signal(cfg, &comps);
            auto track = sigma_track_for_policy(s, cfg, comps);
            std::ofstream outf(out_path);
            outf << "time,sigma\n";
            for (std::size_t i = 0; i < track.size(); ++i)
                outf << s.time_at(i) << ',' << track[i] << '\n';
            std::cout << "wrote " << out_path << '\n';
            return kExitOk;
        }
        if (ridge_cmd->parsed() || rec_cmd->parsed()) {
            Signal s;
            std::vector<double> track;
            std::vector<ComponentSpec> comps;
            SstResult sst = build_sst(o, s, track, comps);
            int k = o.num_components > 0 ? o.num_components
                                         : std::max<int>(1, static_cast<int>(comps.size()));
            RidgeOptions ropts;
            ropts.jump_cap = o.jump_cap;
            RidgeSet rs = extract_ridges(sst, k, o.gamma_bins, ropts);
            if (ridge_cmd->parsed()) {
                std::ofstream outf(out_path);
                outf << "time";
                for (std::size_t c = 0; c < rs.ridges.size(); ++c) outf << ",f" << c + 1;
                outf << '\n';
                for (std::size_t i = 0; i < sst.num_times(); ++i) {
                    outf << sst.time_grid[i];
                    for (const auto& ridge : rs.ridges) {
                        if (ridge[i] >= 0)
                            outf << ',' << ridge[i] * sst.freq_step();
                        else
                            outf << ",nan";
                    }
                    outf << '\n';
                }
                std::cout << "wrote " << out_path << " (" << rs.ridges.size() << " ridges)\n";
            } else {
                auto param = TimeVaryingParam::from_track(track, s.sample_rate);
                for (std::size_t c = 0; c < rs.ridges.size(); ++c) {
                    Signal rec =
                        reconstruct_component(sst, rs.ridges[c], o.gamma_bins, param, s.real);
                    std::string path = out_path + "_" + std::to_string(c + 1) + ".csv";
                    write_signal_csv(rec, path);
                    std::cout << "wrote " << path << '\n';
                }
            }
            return kExitOk;
        }
        if (ent_cmd->parsed()) {
            ExperimentConfig cfg = to_config(o);
            std::vector<ComponentSpec> comps;
            Signal s = load_signal(cfg, &comps);
            auto track = sigma_track_for_policy(s, cfg, comps);
            Matrix<double> mag;
            if (o.variant == "stft") {
                TFMatrix v = adaptive_stft(s, TimeVaryingParam::from_track(track, s.sample_rate),
                                           WindowKind::G, o.epsilon, o.nfft,
                                           s.real ? Band::Half : Band::Full);
                mag = v.magnitude();
            } else {
                SstOptions opts;
                opts.epsilon = o.epsilon;
                opts.nfft = o.nfft;
                opts.threshold = o.threshold;
                SstResult sst =
                    compute_sst(s, TimeVaryingParam::from_track(track, s.sample_rate),
                                cfg.variant, opts);
                mag = sst_magnitude(sst);
            }
            std::ofstream outf(out_path);
            outf << "time,entropy\n";
            for (std::size_t t = 0; t < s.size(); ++t)
                outf << s.time_at(t) << ','
                     << renyi_entropy(mag, static_cast<int>(t), o.renyi_zeta, o.renyi_ell)
                     << '\n';
            std::cout << "wrote " << out_path << '\n';
            return kExitOk;
        }
        if (exp_cmd->parsed()) {
            ExperimentConfig cfg = parse_config_file(config_path);
            nlohmann::json report = run_experiment(cfg);
            std::cout << report.dump(2) << '\n';
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "compute error: " << e.what() << '\n';
        return kExitCompute;
    }
    return kExitOk;
}
