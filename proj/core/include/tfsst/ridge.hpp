#pragma once

#include "tfsst/squeeze.hpp"

#include <vector>

namespace tfsst {

struct RidgeOptions {
    int jump_cap = 2;          // max bin move per time step
    double death_frac = 0.1;   // |E| below this fraction of the running ridge
    int death_run = 8;         // ... strength for this many steps ends the ridge
    int strength_win = 16;     // running-strength median window
    double active_gate = 1e-3; // band energy below gate * column max => absent
};

struct RidgeSet {
    std::vector<RidgeTrack> ridges;  // extraction order; -1 marks absent points
    bool truncated = false;          // fewer ridges than requested (energy ran out)
};

/// Greedy sequential extraction: walk the argmax trajectory out from the
/// global maximum under the jump cap, end a ridge where its energy collapses
/// (death detection), zero +-gamma_bins around the live part, repeat.
RidgeSet extract_ridges(const SstResult& sst, int num_components, int gamma_bins,
                        const RidgeOptions& opts = {});

/// Mean relative l2 error: (1/K) sum_k ||z_k - zhat_k|| / ||z_k||.
double rmse(const std::vector<Signal>& true_components,
            const std::vector<Signal>& reconstructed);

/// Per-component relative l2 errors.
std::vector<double> component_errors(const std::vector<Signal>& true_components,
                                     const std::vector<Signal>& reconstructed);

}  // namespace tfsst
