#include "tfsst/io.hpp"

#include "tfsst/ridge.hpp"
#include "tfsst/separability.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace tfsst {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double parse_double(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse number '" + s + "' (" + context + ")");
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Signal read_signal_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    Signal out;
    std::vector<double> times, values;
    double header_fs = 0.0;
    std::string line;
    std::size_t lineno = 0;
    bool two_col = false, saw_data = false;

    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto cols = split(t, ',');
        if (!saw_data) {
            if (cols.size() == 2 && trim(cols[0]) == "sample_rate") {
                header_fs = parse_double(trim(cols[1]), path + ":" + std::to_string(lineno));
                continue;
            }
            if (cols.size() == 2 && trim(cols[0]) == "time" && trim(cols[1]) == "value") {
                two_col = true;
                continue;
            }
        }
        if (cols.size() == 2) {
            if (saw_data && !two_col)
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": ragged row");
            two_col = true;
            times.push_back(parse_double(trim(cols[0]), path + ":" + std::to_string(lineno)));
            values.push_back(parse_double(trim(cols[1]), path + ":" + std::to_string(lineno)));
        } else if (cols.size() == 1) {
            if (saw_data && two_col)
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": ragged row");
            values.push_back(parse_double(trim(cols[0]), path + ":" + std::to_string(lineno)));
        } else {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": ragged row");
        }
        saw_data = true;
    }
    if (values.size() < 2) throw std::runtime_error(path + ": too few samples");

    if (two_col) {
        double dt = times[1] - times[0];
        if (!(dt > 0.0)) throw std::runtime_error(path + ":2: non-monotone time column");
        for (std::size_t i = 1; i < times.size(); ++i) {
            double d = times[i] - times[i - 1];
            if (!(d > 0.0))
                throw std::runtime_error(path + ":" + std::to_string(i + 1) +
                                         ": non-monotone time column");
            if (std::abs(d - dt) > 1e-6 * dt)
                throw std::runtime_error(path + ":" + std::to_string(i + 1) +
                                         ": non-uniform time step");
        }
        out.sample_rate = 1.0 / dt;
        out.t0 = times.front();
    } else {
        if (!(header_fs > 0.0))
            throw std::runtime_error(path + ": one-column file needs a sample_rate header");
        out.sample_rate = header_fs;
    }
    out.samples.reserve(values.size());
    for (double v : values) out.samples.emplace_back(v, 0.0);
    out.real = true;
    return out;
}

void write_signal_csv(const Signal& signal, const std::string& path) {
    std::ofstream outf(path);
    if (!outf) throw std::runtime_error("cannot write " + path);
    outf << "time,value\n";
    for (std::size_t i = 0; i < signal.size(); ++i)
        outf << fmt(signal.time_at(i)) << ',' << fmt(signal.samples[i].real()) << '\n';
    if (!outf) throw std::runtime_error("write failed: " + path);
}

void write_tf_csv(const Matrix<double>& mag, const std::vector<double>& time_grid,
                  const std::vector<double>& freq_grid, const std::string& path) {
    if (mag.rows() != time_grid.size() || mag.cols() != freq_grid.size())
        throw std::invalid_argument("grid sizes do not match the matrix");
    std::ofstream outf(path);
    if (!outf) throw std::runtime_error("cannot write " + path);
    outf << "time\\freq";
    for (double f : freq_grid) outf << ',' << fmt(f);
    outf << '\n';
    for (std::size_t i = 0; i < mag.rows(); ++i) {
        outf << fmt(time_grid[i]);
        for (std::size_t m = 0; m < mag.cols(); ++m) outf << ',' << fmt(mag(i, m));
        outf << '\n';
    }
    if (!outf) throw std::runtime_error("write failed: " + path);
}

TfCsv read_tf_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    auto head = split(trim(line), ',');
    if (head.size() < 2) throw std::runtime_error(path + ":1: bad header");
    TfCsv out;
    for (std::size_t i = 1; i < head.size(); ++i)
        out.freq_grid.push_back(parse_double(trim(head[i]), path + ":1"));
    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        auto cols = split(t, ',');
        if (cols.size() != head.size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": ragged row");
        out.time_grid.push_back(parse_double(trim(cols[0]), path + ":" + std::to_string(lineno)));
        std::vector<double> r;
        for (std::size_t i = 1; i < cols.size(); ++i)
            r.push_back(parse_double(trim(cols[i]), path + ":" + std::to_string(lineno)));
        rows.push_back(std::move(r));
    }
    out.mag = Matrix<double>(rows.size(), out.freq_grid.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t m = 0; m < out.freq_grid.size(); ++m) out.mag(i, m) = rows[i][m];
    return out;
}

void write_tf_pgm(const Matrix<double>& mag, const std::string& path) {
    double top = 0.0;
    for (double v : mag.storage()) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite magnitude");
        top = std::max(top, v);
    }
    std::ofstream outf(path, std::ios::binary);
    if (!outf) throw std::runtime_error("cannot write " + path);
    const std::size_t w = mag.rows();   // time on x
    const std::size_t h = mag.cols();   // frequency on y
    outf << "P5\n" << w << ' ' << h << "\n65535\n";
    const double floor_db = -80.0;
    for (std::size_t y = 0; y < h; ++y) {
        std::size_t m = h - 1 - y;  // origin bottom-left
        for (std::size_t x = 0; x < w; ++x) {
            double v = mag(x, m);
            double db = (top > 0.0 && v > 0.0) ? 20.0 * std::log10(v / top) : floor_db;
            db = std::clamp(db, floor_db, 0.0);
            auto pix = static_cast<unsigned>(std::lround((db - floor_db) / -floor_db * 65535.0));
            unsigned char bytes[2] = {static_cast<unsigned char>(pix >> 8),
                                      static_cast<unsigned char>(pix & 0xff)};
            outf.write(reinterpret_cast<const char*>(bytes), 2);
        }
    }
    if (!outf) throw std::runtime_error("write failed: " + path);
}

bool policy_from_string(const std::string& name, SigmaPolicy& out) {
    if (name.rfind("const", 0) == 0) { out = SigmaPolicy::Constant; return true; }
    if (name == "sigma1") { out = SigmaPolicy::Sigma1; return true; }
    if (name == "sigma2") { out = SigmaPolicy::Sigma2; return true; }
    if (name == "u" || name == "sigma_u") { out = SigmaPolicy::SigmaU; return true; }
    if (name == "est") { out = SigmaPolicy::Est; return true; }
    if (name == "est2") { out = SigmaPolicy::Est2; return true; }
    if (name == "re" || name == "renyi") { out = SigmaPolicy::Renyi; return true; }
    if (name == "re2" || name == "renyi2") { out = SigmaPolicy::Renyi2; return true; }
    return false;
}

std::string to_string(SigmaPolicy policy) {
    switch (policy) {
        case SigmaPolicy::Constant: return "const";
        case SigmaPolicy::Sigma1: return "sigma1";
        case SigmaPolicy::Sigma2: return "sigma2";
        case SigmaPolicy::SigmaU: return "u";
        case SigmaPolicy::Est: return "est";
        case SigmaPolicy::Est2: return "est2";
        case SigmaPolicy::Renyi: return "re";
        case SigmaPolicy::Renyi2: return "re2";
    }
    return "?";
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        auto ctx = path + ":" + std::to_string(lineno);

        if (key == "signal") cfg.signal = val;
        else if (key == "sample_rate") cfg.sample_rate = parse_double(val, ctx);
        else if (key == "duration") cfg.duration = parse_double(val, ctx);
        else if (key == "variant") {
            if (!variant_from_string(val, cfg.variant))
                throw std::invalid_argument(ctx + ": unknown variant '" + val + "'");
        } else if (key == "sigma_policy") {
            if (!policy_from_string(val, cfg.policy))
                throw std::invalid_argument(ctx + ": unknown sigma_policy '" + val + "'");
            if (val.rfind("const:", 0) == 0)
                cfg.sigma_const = parse_double(val.substr(6), ctx);
        } else if (key == "sigma_const") cfg.sigma_const = parse_double(val, ctx);
        else if (key == "epsilon") cfg.estimator.epsilon = parse_double(val, ctx);
        else if (key == "epsilon_min") cfg.estimator.epsilon_min = parse_double(val, ctx);
        else if (key == "epsilon_max") cfg.estimator.epsilon_max = parse_double(val, ctx);
        else if (key == "epsilon_step") cfg.estimator.epsilon_step = parse_double(val, ctx);
        else if (key == "sigma_min") cfg.estimator.sigma_min = parse_double(val, ctx);
        else if (key == "sigma_max") cfg.estimator.sigma_max = parse_double(val, ctx);
        else if (key == "sigma_step") cfg.estimator.sigma_step = parse_double(val, ctx);
        else if (key == "gamma1") cfg.estimator.gamma1 = parse_double(val, ctx);
        else if (key == "renyi_ell") cfg.estimator.renyi_ell = parse_double(val, ctx);
        else if (key == "renyi_zeta") cfg.estimator.renyi_zeta =
            static_cast<int>(parse_double(val, ctx));
        else if (key == "smooth_taps") {
            int k = static_cast<int>(parse_double(val, ctx));
            if (k < 1) throw std::invalid_argument(ctx + ": smooth_taps must be >= 1");
            cfg.estimator.smoothing.assign(static_cast<std::size_t>(k), 1.0 / k);
        } else if (key == "nfft") cfg.estimator.nfft = static_cast<int>(parse_double(val, ctx));
        else if (key == "threshold") cfg.threshold = parse_double(val, ctx);
        else if (key == "num_components") cfg.num_components =
            static_cast<int>(parse_double(val, ctx));
        else if (key == "gamma_bins") cfg.gamma_bins = static_cast<int>(parse_double(val, ctx));
        else if (key == "jump_cap") cfg.jump_cap = static_cast<int>(parse_double(val, ctx));
        else if (key == "snr_db") {
            cfg.snr_db.clear();
            for (const auto& part : split(val, ','))
                if (!trim(part).empty()) cfg.snr_db.push_back(parse_double(trim(part), ctx));
        } else if (key == "runs") cfg.runs = static_cast<int>(parse_double(val, ctx));
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_double(val, ctx));
        else if (key == "out_dir") cfg.out_dir = val;
        else throw std::invalid_argument(ctx + ": unknown key '" + key + "'");
    }
    return cfg;
}

Signal load_signal(const ExperimentConfig& config, std::vector<ComponentSpec>* components_out) {
    if (components_out) components_out->clear();
    if (config.signal.rfind("csv:", 0) == 0) {
        Signal s = read_signal_csv(config.signal.substr(4));
        if (config.sample_rate > 0.0) s.sample_rate = config.sample_rate;
        return s;
    }
    std::vector<ComponentSpec> comps;
    double fs = 0.0, dur = 0.0;
    if (!builtin_signal(config.signal, comps, fs, dur))
        throw std::invalid_argument("unknown signal '" + config.signal +
                                    "' (use a builtin name or csv:<path>)");
    if (config.sample_rate > 0.0) fs = config.sample_rate;
    if (config.duration > 0.0) dur = config.duration;
    if (components_out) *components_out = comps;
    return synth(comps, fs, dur);
}

namespace {

// Ground-truth IF/rate lists per sample, sorted by IF, for active components.
void truth_lists(const std::vector<ComponentSpec>& comps, double fs, std::size_t n,
                 std::vector<std::vector<double>>& ifs, std::vector<std::vector<double>>& rates) {
    ifs.assign(n, {});
    rates.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(i) / fs;
        std::vector<std::pair<double, double>> acc;
        for (const auto& c : comps)
            if (c.active_at(t)) acc.emplace_back(ground_truth_if(c, t), ground_truth_chirp_rate(c, t));
        std::sort(acc.begin(), acc.end());
        for (auto& [f, r] : acc) {
            ifs[i].push_back(f);
            rates[i].push_back(r);
        }
    }
}

std::vector<double> fill_nan(std::vector<double> v, double fallback) {
    // nearest valid neighbour, then fallback
    std::vector<double> out = v;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!std::isnan(out[i])) continue;
        double best = fallback;
        for (std::size_t d = 1; d < out.size(); ++d) {
            if (i >= d && !std::isnan(v[i - d])) { best = v[i - d]; break; }
            if (i + d < v.size() && !std::isnan(v[i + d])) { best = v[i + d]; break; }
        }
        out[i] = best;
    }
    return out;
}

}  // namespace

std::vector<double> sigma_track_for_policy(const Signal& signal, const ExperimentConfig& config,
                                           const std::vector<ComponentSpec>& components) {
    std::size_t n = signal.size();
    switch (config.policy) {
        case SigmaPolicy::Constant:
            return std::vector<double>(n, config.sigma_const);
        case SigmaPolicy::Sigma1:
        case SigmaPolicy::Sigma2: {
            if (components.empty())
                throw std::invalid_argument(
                    "sigma_policy: ground-truth policies need a builtin signal");
            std::vector<std::vector<double>> ifs, rates;
            truth_lists(components, signal.sample_rate, n, ifs, rates);
            double alpha = alpha_from_epsilon(config.estimator.epsilon);
            std::vector<double> track = config.policy == SigmaPolicy::Sigma1
                                            ? sigma1(ifs, alpha)
                                            : sigma2(ifs, rates, alpha).sigma2;
            return fill_nan(std::move(track), config.sigma_const);
        }
        case SigmaPolicy::SigmaU:
            return WindowSelector(signal, config.estimator).sigma_u_track();
        case SigmaPolicy::Est:
            return WindowSelector(signal, config.estimator).algorithm1();
        case SigmaPolicy::Est2:
            return WindowSelector(signal, config.estimator).algorithm2();
        case SigmaPolicy::Renyi:
            return sigma_renyi_sst(signal, config.estimator, false);
        case SigmaPolicy::Renyi2:
            return sigma_renyi_sst(signal, config.estimator, true);
    }
    throw std::invalid_argument("sigma_policy: unhandled policy");
}

namespace {

struct PipelineResult {
    SstResult sst;
    RidgeSet ridges;
    std::vector<Signal> recon;          // ordered like matched truth when available
    std::vector<int> matching;          // truth index -> ridge index
    std::vector<double> errors;         // per truth component
};

std::vector<int> match_ridges(const RidgeSet& rs, const std::vector<ComponentSpec>& comps,
                              double fs, double freq_step, std::size_t n) {
    std::size_t k = comps.size();
    std::size_t r = rs.ridges.size();

    // mean IF distance of ridge j to component c over the component's support
    auto cost_of = [&](std::size_t c, std::size_t j) {
        const auto& ridge = rs.ridges[j];
        double acc = 0.0;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double t = static_cast<double>(i) / fs;
            if (!comps[c].active_at(t)) continue;
            double target = ground_truth_if(comps[c], t);
            acc += ridge[i] >= 0 ? std::abs(ridge[i] * freq_step - target) : 4.0 * freq_step;
            ++cnt;
        }
        return cnt ? acc / static_cast<double>(cnt) : 1e9;
    };
    Matrix<double> cost(k, r);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t j = 0; j < r; ++j) cost(c, j) = cost_of(c, j);

    std::vector<int> best(k, -1);
    if (r <= 6) {  // exhaustive assignment for small counts
        std::vector<int> perm(r);
        std::iota(perm.begin(), perm.end(), 0);
        double best_cost = std::numeric_limits<double>::infinity();
        do {
            double total = 0.0;
            for (std::size_t c = 0; c < k && c < r; ++c)
                total += cost(c, static_cast<std::size_t>(perm[c]));
            if (total < best_cost) {
                best_cost = total;
                for (std::size_t c = 0; c < k; ++c)
                    best[c] = c < r ? perm[c] : -1;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {  // greedy by ascending cost
        std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
        for (std::size_t c = 0; c < k; ++c)
            for (std::size_t j = 0; j < r; ++j) edges.emplace_back(cost(c, j), c, j);
        std::sort(edges.begin(), edges.end());
        std::vector<bool> used(r, false);
        for (const auto& [w, c, j] : edges) {
            if (best[c] >= 0 || used[j]) continue;
            best[c] = static_cast<int>(j);
            used[j] = true;
        }
    }
    return best;
}

PipelineResult run_pipeline(const Signal& signal, const std::vector<double>& track,
                            const ExperimentConfig& config,
                            const std::vector<ComponentSpec>& comps, SstVariant variant) {
    PipelineResult pr;
    auto param = TimeVaryingParam::from_track(track, signal.sample_rate);
    SstOptions opts;
    opts.epsilon = config.estimator.epsilon;
    opts.nfft = config.estimator.nfft;
    opts.threshold = config.threshold;
    pr.sst = compute_sst(signal, param, variant, opts);

    int num = config.num_components > 0 ? config.num_components
                                        : static_cast<int>(comps.size());
    if (num <= 0) num = 1;
    RidgeOptions ropts;
    ropts.jump_cap = config.jump_cap;
    pr.ridges = extract_ridges(pr.sst, num, config.gamma_bins, ropts);

    if (!comps.empty() && !pr.ridges.ridges.empty()) {
        pr.matching = match_ridges(pr.ridges, comps, signal.sample_rate, pr.sst.freq_step(),
                                   signal.size());
        std::vector<Signal> truth;
        for (const auto& c : comps)
            truth.push_back(synth({c}, signal.sample_rate,
                                  static_cast<double>(signal.size()) / signal.sample_rate));
        for (std::size_t c = 0; c < comps.size(); ++c) {
            if (pr.matching[c] < 0) {
                Signal zero = truth[c];
                std::fill(zero.samples.begin(), zero.samples.end(), cplx{0.0, 0.0});
                pr.recon.push_back(std::move(zero));
                continue;
            }
            pr.recon.push_back(reconstruct_component(
                pr.sst, pr.ridges.ridges[static_cast<std::size_t>(pr.matching[c])],
                config.gamma_bins, param, signal.real));
        }
        pr.errors = component_errors(truth, pr.recon);
    } else {
        for (const auto& ridge : pr.ridges.ridges)
            pr.recon.push_back(
                reconstruct_component(pr.sst, ridge, config.gamma_bins, param, signal.real));
    }
    return pr;
}

}  // namespace

nlohmann::json run_experiment(const ExperimentConfig& config) {
    namespace fs = std::filesystem;
    nlohmann::json report;

    std::vector<ComponentSpec> comps;
    Signal signal = load_signal(config, &comps);
    fs::create_directories(config.out_dir);
    auto artifact = [&](const std::string& name) {
        return (fs::path(config.out_dir) / name).string();
    };
    std::vector<std::string> artifacts;

    report["config"]["signal"] = config.signal;
    report["config"]["variant"] = to_string(config.variant);
    report["config"]["sigma_policy"] = to_string(config.policy);
    report["config"]["seed"] = config.seed;
    report["config"]["runs"] = config.runs;

    write_signal_csv(signal, artifact("signal.csv"));
    artifacts.push_back(artifact("signal.csv"));

    // noiseless pipeline with the configured method
    std::vector<double> track = sigma_track_for_policy(signal, config, comps);
    report["sigma_track"] = track;
    {
        std::ofstream st(artifact("sigma.csv"));
        st << "time,sigma\n";
        for (std::size_t i = 0; i < track.size(); ++i)
            st << fmt(signal.time_at(i)) << ',' << fmt(track[i]) << '\n';
        artifacts.push_back(artifact("sigma.csv"));
    }

    PipelineResult pr = run_pipeline(signal, track, config, comps, config.variant);

    auto param = TimeVaryingParam::from_track(track, signal.sample_rate);
    TFMatrix v = adaptive_stft(signal, param, WindowKind::G, config.estimator.epsilon,
                               config.estimator.nfft,
                               signal.real ? Band::Half : Band::Full);
    Matrix<double> vmag = v.magnitude();

    Matrix<double> emag(pr.sst.num_times(), pr.sst.num_freqs());
    for (std::size_t i = 0; i < pr.sst.num_times(); ++i)
        for (std::size_t m = 0; m < pr.sst.num_freqs(); ++m)
            emag(i, m) = std::abs(pr.sst.energy(i, m));

    write_tf_csv(vmag, v.time_grid, v.freq_grid, artifact("stft_mag.csv"));
    write_tf_pgm(vmag, artifact("stft.pgm"));
    write_tf_csv(emag, pr.sst.time_grid, pr.sst.out_freq_grid, artifact("sst_mag.csv"));
    write_tf_pgm(emag, artifact("sst.pgm"));
    for (const char* name : {"stft_mag.csv", "stft.pgm", "sst_mag.csv", "sst.pgm"})
        artifacts.push_back(artifact(name));

    // entropy curves
    {
        std::vector<double> e_sst(signal.size()), e_stft(signal.size());
        for (std::size_t t = 0; t < signal.size(); ++t) {
            e_sst[t] = renyi_entropy(emag, static_cast<int>(t), config.estimator.renyi_zeta,
                                     config.estimator.renyi_ell);
            e_stft[t] = renyi_entropy(vmag, static_cast<int>(t), config.estimator.renyi_zeta,
                                      config.estimator.renyi_ell);
        }
        auto clean = [](std::vector<double>& v) {
            for (double& x : v)
                if (!std::isfinite(x)) x = -1.0;
        };
        clean(e_sst);
        clean(e_stft);
        report["entropy"]["sst"] = e_sst;
        report["entropy"]["stft"] = e_stft;
    }

    // ridges + reconstruction
    nlohmann::json jr = nlohmann::json::array();
    for (const auto& ridge : pr.ridges.ridges) jr.push_back(ridge);
    report["ridges"]["bins"] = jr;
    report["ridges"]["truncated"] = pr.ridges.truncated;
    for (std::size_t k = 0; k < pr.recon.size(); ++k) {
        std::string name = "recon_" + std::to_string(k + 1) + ".csv";
        write_signal_csv(pr.recon[k], artifact(name));
        artifacts.push_back(artifact(name));
    }
    if (!pr.errors.empty()) {
        report["rmse"]["noiseless"]["per_component"] = pr.errors;
        report["rmse"]["noiseless"]["mean"] =
            std::accumulate(pr.errors.begin(), pr.errors.end(), 0.0) /
            static_cast<double>(pr.errors.size());
        // median ridge-IF error in bins per component
        std::vector<double> med;
        for (std::size_t c = 0; c < comps.size(); ++c) {
            std::vector<double> errs;
            if (pr.matching[c] >= 0) {
                const auto& ridge = pr.ridges.ridges[static_cast<std::size_t>(pr.matching[c])];
                for (std::size_t i = 0; i < signal.size(); ++i) {
                    double t = static_cast<double>(i) / signal.sample_rate;
                    if (!comps[c].active_at(t) || ridge[i] < 0) continue;
                    errs.push_back(std::abs(ridge[i] * pr.sst.freq_step() -
                                            ground_truth_if(comps[c], t)) /
                                   pr.sst.freq_step());
                }
            }
            if (errs.empty()) {
                med.push_back(-1.0);
            } else {
                std::nth_element(errs.begin(), errs.begin() + errs.size() / 2, errs.end());
                med.push_back(errs[errs.size() / 2]);
            }
        }
        report["ridges"]["median_if_error_bins"] = med;
    }

    // noisy sweep with the four reference methods
    if (!config.snr_db.empty() && !comps.empty()) {
        struct Method {
            const char* name;
            SstVariant variant;
            SigmaPolicy policy;
        };
        const Method methods[] = {
            {"adp_fsst2_est2", SstVariant::AdpFsst2, SigmaPolicy::Est2},
            {"regular_pt_adp_re", SstVariant::RegularPtAdp, SigmaPolicy::Renyi},
            {"regular_pt_adp2_re2", SstVariant::RegularPtAdp2, SigmaPolicy::Renyi2},
            {"fsst2_const", SstVariant::Fsst2, SigmaPolicy::Constant},
        };
        report["rmse"]["sweep"]["snr_db"] = config.snr_db;
        for (const auto& method : methods) {
            std::vector<double> per_snr;
            for (double snr : config.snr_db) {
                double acc = 0.0;
                for (int run = 0; run < config.runs; ++run) {
                    Signal noisy = add_noise(signal, snr,
                                             config.seed + static_cast<std::uint64_t>(run) * 9973 +
                                                 static_cast<std::uint64_t>(
                                                     std::llround(snr * 1000.0)));
                    ExperimentConfig mc = config;
                    mc.policy = method.policy;
                    if (method.policy == SigmaPolicy::Constant) mc.sigma_const = 0.01;
                    std::vector<double> mtrack = sigma_track_for_policy(noisy, mc, comps);
                    PipelineResult mpr = run_pipeline(noisy, mtrack, mc, comps, method.variant);
                    double sum = std::accumulate(mpr.errors.begin(), mpr.errors.end(), 0.0);
                    acc += mpr.errors.empty() ? 2.0
                                              : sum / static_cast<double>(mpr.errors.size());
                }
                per_snr.push_back(acc / static_cast<double>(std::max(1, config.runs)));
            }
            report["rmse"]["sweep"]["methods"][method.name] = per_snr;
        }
    }

    report["artifacts"] = artifacts;
    {
        std::ofstream jf(artifact("report.json"));
        jf << report.dump(2) << '\n';
        artifacts.push_back(artifact("report.json"));
    }
    return report;
}

}  // namespace tfsst
