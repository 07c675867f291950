#include "tfsst/phase.hpp"

#include <cmath>
#include <stdexcept>

namespace tfsst {

namespace {
constexpr double kPi = 3.14159265358979323846;
const cplx kI2Pi{0.0, 2.0 * kPi};

void check_grids(const TFMatrix& a, const TFMatrix& b) {
    if (a.num_times() != b.num_times() || a.num_freqs() != b.num_freqs())
        throw std::invalid_argument("transform grids do not match");
}

double max_abs(const TFMatrix& v) {
    double m = 0.0;
    for (const auto& z : v.values.storage()) m = std::max(m, std::abs(z));
    return m;
}

// Centered difference along the frequency axis, one-sided at the edges.
void d_eta_row(const cplx* row, std::size_t nb, double deta, cplx* out) {
    if (nb < 2) {
        for (std::size_t m = 0; m < nb; ++m) out[m] = cplx{0.0, 0.0};
        return;
    }
    out[0] = (row[1] - row[0]) / deta;
    out[nb - 1] = (row[nb - 1] - row[nb - 2]) / deta;
    for (std::size_t m = 1; m + 1 < nb; ++m) out[m] = (row[m + 1] - row[m - 1]) / (2.0 * deta);
}

PhaseField make_field(std::size_t rows, std::size_t cols) {
    PhaseField f;
    f.omega = Matrix<double>(rows, cols);
    f.valid = Matrix<std::uint8_t>(rows, cols, 0);
    return f;
}

void finalize_cell(PhaseField& f, std::size_t i, std::size_t m, double omega, bool strong) {
    if (strong && std::isfinite(omega)) {
        f.omega(i, m) = omega;
        f.valid(i, m) = 1;
    } else {
        f.omega(i, m) = 0.0;
        f.valid(i, m) = 0;
    }
}

}  // namespace

PhaseField omega_conventional(const TFMatrix& v, const TFMatrix& dv_dt, double threshold) {
    check_grids(v, dv_dt);
    PhaseField f = make_field(v.num_times(), v.num_freqs());
    const double gate = threshold * max_abs(v);
    for (std::size_t i = 0; i < v.num_times(); ++i) {
        const cplx* vr = v.values.row(i);
        const cplx* dr = dv_dt.values.row(i);
        for (std::size_t m = 0; m < v.num_freqs(); ++m) {
            bool strong = std::abs(vr[m]) > gate;
            double w = strong ? (dr[m] / (kI2Pi * vr[m])).real() : 0.0;
            finalize_cell(f, i, m, w, strong);
        }
    }
    return f;
}

PhaseField omega_adaptive(const TFMatrix& v, const TFMatrix& v_tau_gprime, const TFMatrix& dv_dt,
                          const TimeVaryingParam& sigma, double threshold) {
    check_grids(v, v_tau_gprime);
    check_grids(v, dv_dt);
    if (sigma.size() != v.num_times())
        throw std::invalid_argument("sigma track length must match the transform");

    PhaseField f = make_field(v.num_times(), v.num_freqs());
    const double gate = threshold * max_abs(v);
    for (std::size_t i = 0; i < v.num_times(); ++i) {
        const double ratio = sigma.sigma_prime[i] / sigma.sigma[i];
        const cplx* vr = v.values.row(i);
        const cplx* tr = v_tau_gprime.values.row(i);
        const cplx* dr = dv_dt.values.row(i);
        for (std::size_t m = 0; m < v.num_freqs(); ++m) {
            bool strong = std::abs(vr[m]) > gate;
            double w = 0.0;
            if (strong) {
                cplx inv = 1.0 / (kI2Pi * vr[m]);
                w = (dr[m] * inv).real() + ratio * (tr[m] * inv).real();
            }
            finalize_cell(f, i, m, w, strong);
        }
    }
    return f;
}

namespace {

// Shared body of the two second-order estimates; conventional drops the
// sigma' terms (ratio == 0).
//
// d/dEta of the ratios A/V is taken by the quotient rule on centered
// differences of the transforms themselves: the ratio fields jump wildly
// next to spectral nodes of V, while the transforms stay smooth, so this
// form only divides by the cell's own V (already gated by the mask). The
// operator is still linear over the ratio fields with constants killed,
// which is all the chirp-exactness cancellation needs.
PhaseField omega_2nd_impl(const TFMatrix& v, const TFMatrix& v_tau_g, const TFMatrix* v_tau_gprime,
                          const TFMatrix& dv_dt, const TimeVaryingParam* sigma, double threshold,
                          double degeneracy_tol) {
    check_grids(v, v_tau_g);
    check_grids(v, dv_dt);
    if (v_tau_gprime) check_grids(v, *v_tau_gprime);

    const std::size_t nt = v.num_times(), nb = v.num_freqs();
    PhaseField f = make_field(nt, nb);
    const double gate = threshold * max_abs(v);
    const double deta = v.freq_step();

    std::vector<cplx> dV(nb), dTG(nb), dTGP(nb), dDT(nb);

    for (std::size_t i = 0; i < nt; ++i) {
        const double ratio = sigma ? sigma->sigma_prime[i] / sigma->sigma[i] : 0.0;
        const cplx* vr = v.values.row(i);
        const cplx* tg = v_tau_g.values.row(i);
        const cplx* tgp = v_tau_gprime ? v_tau_gprime->values.row(i) : nullptr;
        const cplx* dr = dv_dt.values.row(i);

        d_eta_row(vr, nb, deta, dV.data());
        d_eta_row(tg, nb, deta, dTG.data());
        d_eta_row(dr, nb, deta, dDT.data());
        if (tgp) d_eta_row(tgp, nb, deta, dTGP.data());

        for (std::size_t m = 0; m < nb; ++m) {
            bool strong = std::abs(vr[m]) > gate;
            if (!strong) {
                finalize_cell(f, i, m, 0.0, false);
                continue;
            }
            cplx inv = 1.0 / (kI2Pi * vr[m]);
            double first = (dr[m] * inv).real();
            if (tgp) first += ratio * (tgp[m] * inv).real();

            cplx v2 = vr[m] * vr[m];
            cplx dW = (dTG[m] * vr[m] - tg[m] * dV[m]) / v2;
            double w;
            if (std::abs(dW) > degeneracy_tol) {
                cplx dD = (dDT[m] * vr[m] - dr[m] * dV[m]) / v2;
                cplx dU = tgp ? (dTGP[m] * vr[m] - tgp[m] * dV[m]) / v2 : cplx{0.0, 0.0};
                cplx p0 = (dD + ratio * dU) / dW;
                cplx w_ratio = tg[m] / vr[m];
                w = first - (w_ratio / kI2Pi * p0).real();
            } else {
                w = first;
            }
            finalize_cell(f, i, m, w, true);
        }
    }
    return f;
}

}  // namespace

PhaseField omega_adaptive_2nd(const TFMatrix& v, const TFMatrix& v_tau_g,
                              const TFMatrix& v_tau_gprime, const TFMatrix& dv_dt,
                              const TimeVaryingParam& sigma, double threshold,
                              double degeneracy_tol) {
    if (sigma.size() != v.num_times())
        throw std::invalid_argument("sigma track length must match the transform");
    return omega_2nd_impl(v, v_tau_g, &v_tau_gprime, dv_dt, &sigma, threshold, degeneracy_tol);
}

PhaseField omega_conventional_2nd(const TFMatrix& v, const TFMatrix& v_tau_g,
                                  const TFMatrix& dv_dt, double threshold,
                                  double degeneracy_tol) {
    return omega_2nd_impl(v, v_tau_g, nullptr, dv_dt, nullptr, threshold, degeneracy_tol);
}

}  // namespace tfsst
