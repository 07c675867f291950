#pragma once

#include "tfsst/phase.hpp"
#include "tfsst/stft.hpp"

#include <string>
#include <vector>

namespace tfsst {

enum class SstVariant {
    Fsst,           // constant-width transform, first-order estimate
    Fsst2,          // constant-width transform, second-order estimate
    AdpFsst,        // time-varying width, width-aware first-order estimate
    AdpFsst2,       // time-varying width, width-aware second-order estimate
    RegularPtAdp,   // time-varying width, conventional first-order estimate
    RegularPtAdp2,  // time-varying width, conventional second-order estimate
};

std::string to_string(SstVariant v);
bool variant_from_string(const std::string& name, SstVariant& out);

/// Reassigned transform. energy[n, b] collects the V values of the valid
/// cells whose omega rounds to output bin b; per-time sums are conserved
/// (out-of-range mass is tallied in dropped).
struct SstResult {
    Matrix<cplx> energy;
    std::vector<double> out_freq_grid;  // equals the input grid
    std::vector<double> time_grid;
    PhaseField source_phase;
    SstVariant variant = SstVariant::Fsst;
    TimeVaryingParam sigma_track;
    double fs = 0.0;
    int nfft = 0;
    Band band = Band::Half;

    std::vector<cplx> dropped;        // per-time sum of discarded mass
    std::size_t dropped_cells = 0;

    double freq_step() const { return fs / nfft; }
    std::size_t num_times() const { return energy.rows(); }
    std::size_t num_freqs() const { return energy.cols(); }
};

SstResult squeeze(const TFMatrix& v, const PhaseField& omega,
                  SstVariant variant = SstVariant::Fsst);

/// Per-time bin indices of one component's trajectory; -1 marks inactive times.
using RidgeTrack = std::vector<int>;

/// Integrate energy in a band of +-gamma_bins around the ridge and scale by
/// sigma(t)/g(0) (times 2 Re for real input).
Signal reconstruct_component(const SstResult& sst, const RidgeTrack& ridge, int gamma_bins,
                             const TimeVaryingParam& sigma, bool real_input);

struct SstOptions {
    double epsilon = 0.2;
    int nfft = 0;  // 0: signal length
    double threshold = kDefaultPhaseThreshold;
    double degeneracy_tol = kDefaultDegeneracyTol;
};

/// Build the transform stack required by `variant` and squeeze it.
SstResult compute_sst(const Signal& signal, const TimeVaryingParam& sigma, SstVariant variant,
                      const SstOptions& opts = {});

}  // namespace tfsst
