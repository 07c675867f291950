#include "tfsst/squeeze.hpp"

#include <cmath>
#include <stdexcept>

namespace tfsst {

namespace {
constexpr double kG0 = 0.39894228040143267794;
}

std::string to_string(SstVariant v) {
    switch (v) {
        case SstVariant::Fsst: return "fsst";
        case SstVariant::Fsst2: return "fsst2";
        case SstVariant::AdpFsst: return "adp_fsst";
        case SstVariant::AdpFsst2: return "adp_fsst2";
        case SstVariant::RegularPtAdp: return "regular_pt_adp";
        case SstVariant::RegularPtAdp2: return "regular_pt_adp2";
    }
    return "?";
}

bool variant_from_string(const std::string& name, SstVariant& out) {
    for (SstVariant v : {SstVariant::Fsst, SstVariant::Fsst2, SstVariant::AdpFsst,
                         SstVariant::AdpFsst2, SstVariant::RegularPtAdp,
                         SstVariant::RegularPtAdp2}) {
        if (to_string(v) == name) {
            out = v;
            return true;
        }
    }
    return false;
}

SstResult squeeze(const TFMatrix& v, const PhaseField& omega, SstVariant variant) {
    if (omega.omega.rows() != v.num_times() || omega.omega.cols() != v.num_freqs())
        throw std::invalid_argument("phase field grid does not match the transform");

    SstResult r;
    r.energy = Matrix<cplx>(v.num_times(), v.num_freqs());
    r.out_freq_grid = v.freq_grid;
    r.time_grid = v.time_grid;
    r.source_phase = omega;
    r.variant = variant;
    r.sigma_track = v.sigma_track;
    r.fs = v.fs;
    r.nfft = v.nfft;
    r.band = v.band;
    r.dropped.assign(v.num_times(), cplx{0.0, 0.0});

    const double f0 = v.freq_grid.front();
    const double deta = v.freq_step();
    const long nb = static_cast<long>(v.num_freqs());

    for (std::size_t i = 0; i < v.num_times(); ++i) {
        const cplx* vr = v.values.row(i);
        cplx* er = r.energy.row(i);
        for (std::size_t m = 0; m < v.num_freqs(); ++m) {
            if (!omega.valid(i, m)) continue;
            long b = std::lround((omega.omega(i, m) - f0) / deta);
            if (b < 0 || b >= nb) {
                r.dropped[i] += vr[m];
                ++r.dropped_cells;
            } else {
                er[static_cast<std::size_t>(b)] += vr[m];
            }
        }
    }
    return r;
}

Signal reconstruct_component(const SstResult& sst, const RidgeTrack& ridge, int gamma_bins,
                             const TimeVaryingParam& sigma, bool real_input) {
    if (ridge.size() != sst.num_times())
        throw std::invalid_argument("ridge must cover the full time grid");
    if (sigma.size() != sst.num_times())
        throw std::invalid_argument("sigma track length must match the transform");
    if (gamma_bins < 0) throw std::invalid_argument("gamma_bins must be non-negative");

    const long nb = static_cast<long>(sst.num_freqs());
    const double deta = sst.freq_step();
    const bool even = sst.nfft % 2 == 0;

    Signal out;
    out.sample_rate = sst.fs;
    out.t0 = sst.time_grid.empty() ? 0.0 : sst.time_grid.front();
    out.real = real_input;
    out.samples.assign(sst.num_times(), cplx{0.0, 0.0});

    for (std::size_t i = 0; i < sst.num_times(); ++i) {
        int rb = ridge[i];
        if (rb < 0) continue;  // component inactive here
        if (rb >= nb) throw std::invalid_argument("ridge index outside the frequency grid");
        long lo = std::max<long>(0, rb - gamma_bins);
        long hi = std::min<long>(nb - 1, rb + gamma_bins);
        const cplx* er = sst.energy.row(i);
        cplx acc{0.0, 0.0};
        for (long b = lo; b <= hi; ++b) {
            double w = 1.0;
            if (real_input && sst.band == Band::Half) {
                if (b == 0) w = 0.5;
                if (even && b == nb - 1) w = 0.5;
            }
            acc += w * er[static_cast<std::size_t>(b)];
        }
        double scale = sigma.sigma[i] / kG0;
        if (real_input)
            out.samples[i] = cplx{2.0 * scale * acc.real() * deta, 0.0};
        else
            out.samples[i] = scale * acc * deta;
    }
    return out;
}

SstResult compute_sst(const Signal& signal, const TimeVaryingParam& sigma, SstVariant variant,
                      const SstOptions& opts) {
    Band band = signal.real ? Band::Half : Band::Full;
    TFMatrix v = adaptive_stft(signal, sigma, WindowKind::G, opts.epsilon, opts.nfft, band);
    TFMatrix vgp = adaptive_stft(signal, sigma, WindowKind::GPrime, opts.epsilon, opts.nfft, band);
    TFMatrix vtgp =
        adaptive_stft(signal, sigma, WindowKind::TauGPrime, opts.epsilon, opts.nfft, band);
    TFMatrix dv = stft_time_derivative(v, vgp, vtgp);

    PhaseField omega;
    switch (variant) {
        case SstVariant::Fsst:
        case SstVariant::RegularPtAdp:
            omega = omega_conventional(v, dv, opts.threshold);
            break;
        case SstVariant::AdpFsst:
            omega = omega_adaptive(v, vtgp, dv, sigma, opts.threshold);
            break;
        case SstVariant::Fsst2:
        case SstVariant::RegularPtAdp2: {
            TFMatrix vtg =
                adaptive_stft(signal, sigma, WindowKind::TauG, opts.epsilon, opts.nfft, band);
            omega = omega_conventional_2nd(v, vtg, dv, opts.threshold, opts.degeneracy_tol);
            break;
        }
        case SstVariant::AdpFsst2: {
            TFMatrix vtg =
                adaptive_stft(signal, sigma, WindowKind::TauG, opts.epsilon, opts.nfft, band);
            omega = omega_adaptive_2nd(v, vtg, vtgp, dv, sigma, opts.threshold,
                                       opts.degeneracy_tol);
            break;
        }
    }
    return squeeze(v, omega, variant);
}

}  // namespace tfsst
