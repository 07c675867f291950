#pragma once

#include "tfsst/estimate.hpp"
#include "tfsst/signal.hpp"
#include "tfsst/squeeze.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

namespace tfsst {

/// Signal CSV: either "time,value" rows or a "sample_rate,<fs>" header line
/// followed by one value per row. Lines starting with '#' are ignored.
/// Parse failures throw std::runtime_error naming the line.
Signal read_signal_csv(const std::string& path);
void write_signal_csv(const Signal& signal, const std::string& path);

/// Magnitude matrix with grid headers: first row "time\\freq,f0,f1,...",
/// then one row per time.
void write_tf_csv(const Matrix<double>& mag, const std::vector<double>& time_grid,
                  const std::vector<double>& freq_grid, const std::string& path);

struct TfCsv {
    Matrix<double> mag;
    std::vector<double> time_grid;
    std::vector<double> freq_grid;
};
TfCsv read_tf_csv(const std::string& path);

/// 16-bit grayscale PGM, log-magnitude normalized over 80 dB, time on x,
/// frequency on y with the origin bottom-left.
void write_tf_pgm(const Matrix<double>& mag, const std::string& path);

enum class SigmaPolicy { Constant, Sigma1, Sigma2, SigmaU, Est, Est2, Renyi, Renyi2 };

bool policy_from_string(const std::string& name, SigmaPolicy& out);
std::string to_string(SigmaPolicy policy);

struct ExperimentConfig {
    std::string signal = "two-chirp";  // builtin name or csv:<path>
    double sample_rate = 0.0;          // 0: builtin default / csv value
    double duration = 0.0;             // 0: builtin default
    SstVariant variant = SstVariant::AdpFsst2;
    SigmaPolicy policy = SigmaPolicy::Est2;
    double sigma_const = 0.05;         // for Constant policy
    EstimatorConfig estimator;
    double threshold = kDefaultPhaseThreshold;

    int num_components = 0;            // 0: builtin ground truth count
    int gamma_bins = 15;
    int jump_cap = 2;

    std::vector<double> snr_db;        // empty: noiseless only
    int runs = 1;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
};

/// Key = value file, '#' comments. Unknown keys and malformed values throw
/// std::invalid_argument naming the key.
ExperimentConfig parse_config_file(const std::string& path);

/// Resolve the configured signal source (builtin or CSV).
Signal load_signal(const ExperimentConfig& config, std::vector<ComponentSpec>* components_out);

/// Compute the configured width track on a signal. Ground-truth policies
/// (sigma1/sigma2) require builtin components.
std::vector<double> sigma_track_for_policy(const Signal& signal, const ExperimentConfig& config,
                                           const std::vector<ComponentSpec>& components);

/// Full pipeline: width track, squeezed transform, ridges, reconstruction,
/// error table across the SNR sweep (methods: configured variant+policy and
/// the fixed conventional baselines). Writes artifacts under out_dir and
/// returns the report.
nlohmann::json run_experiment(const ExperimentConfig& config);

}  // namespace tfsst
