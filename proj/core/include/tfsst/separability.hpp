#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace tfsst {

/// Separation bounds for one adjacent component pair at one time:
///   a = 2 pi alpha (|r_{k-1}| + |r_k|),  b = if_k - if_{k-1},
///   disc = b^2 - 8 alpha a, window widths in [lower, upper] separate the pair.
struct PairBounds {
    double a = 0.0;
    double b = 0.0;
    double discriminant = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    bool separable = false;
};

struct SeparabilityReport {
    std::vector<std::vector<PairBounds>> pairs;  // per time, per adjacent pair
    std::vector<double> sigma2;                  // NaN where not separable/undefined
    std::vector<std::uint8_t> separable;         // all pairs separable and bounds consistent
};

/// Sinusoidal-model minimal separating width: max_k 2 alpha / (if_k - if_{k-1}).
/// NaN where fewer than two components; +inf collapses to NaN (flagged
/// non-separable by callers).
std::vector<double> sigma1(const std::vector<std::vector<double>>& ifs_per_time, double alpha);

/// Chirp-model minimal separating width (quadratic bound) plus the full report.
SeparabilityReport sigma2(const std::vector<std::vector<double>>& ifs_per_time,
                          const std::vector<std::vector<double>>& rates_per_time, double alpha);

/// Enlarged spectral support of one component: if_hz +- alpha (1/sigma + 2 pi |rate| sigma).
std::pair<double, double> support_zone(double if_hz, double chirp_rate, double sigma,
                                       double alpha);

/// Both separability conditions (rate-gap bound and bound consistency) per time.
std::vector<std::uint8_t> check_separability(const std::vector<std::vector<double>>& ifs_per_time,
                                         const std::vector<std::vector<double>>& rates_per_time,
                                         double alpha);

}  // namespace tfsst
