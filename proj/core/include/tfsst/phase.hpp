#pragma once

#include "tfsst/matrix.hpp"
#include "tfsst/stft.hpp"

#include <cstdint>

namespace tfsst {

/// Instantaneous-frequency estimate per TF cell plus its validity mask.
/// Cells are valid where |V| exceeds threshold * max|V| and the estimate is finite.
struct PhaseField {
    Matrix<double> omega;        // Hz
    Matrix<std::uint8_t> valid;  // 1 where omega is usable
};

inline constexpr double kDefaultPhaseThreshold = 1e-4;
inline constexpr double kDefaultDegeneracyTol = 1e-8;  // on |d/dEta (V^{tau g}/V)|, 1/Hz

/// Re{ dV/dt / (i 2 pi V) }.
PhaseField omega_conventional(const TFMatrix& v, const TFMatrix& dv_dt,
                              double threshold = kDefaultPhaseThreshold);

/// Conventional estimate plus the sigma'(t) correction:
/// Re{ dV/dt / (i 2 pi V) } + (sigma'/sigma) Re{ V^{tau g'} / (i 2 pi V) }.
PhaseField omega_adaptive(const TFMatrix& v, const TFMatrix& v_tau_gprime, const TFMatrix& dv_dt,
                          const TimeVaryingParam& sigma,
                          double threshold = kDefaultPhaseThreshold);

/// Second-order estimate with time-varying width. Falls back to the
/// first-order value where |d/dEta (V^{tau g}/V)| is under degeneracy_tol.
/// d/dEta is taken by centered differences on the frequency grid.
PhaseField omega_adaptive_2nd(const TFMatrix& v, const TFMatrix& v_tau_g,
                              const TFMatrix& v_tau_gprime, const TFMatrix& dv_dt,
                              const TimeVaryingParam& sigma,
                              double threshold = kDefaultPhaseThreshold,
                              double degeneracy_tol = kDefaultDegeneracyTol);

/// Second-order estimate with the sigma' terms dropped (constant-width form).
PhaseField omega_conventional_2nd(const TFMatrix& v, const TFMatrix& v_tau_g,
                                  const TFMatrix& dv_dt,
                                  double threshold = kDefaultPhaseThreshold,
                                  double degeneracy_tol = kDefaultDegeneracyTol);

}  // namespace tfsst
