#include "tfsst/stft.hpp"

#include "fft.hpp"
#include "parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace tfsst {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kG0 = 0.39894228040143267794;  // unit Gaussian at 0
}  // namespace

TimeVaryingParam TimeVaryingParam::constant(double sigma_value, std::size_t n) {
    if (!(sigma_value > 0.0)) throw std::invalid_argument("sigma must be positive");
    TimeVaryingParam p;
    p.sigma.assign(n, sigma_value);
    p.sigma_prime.assign(n, 0.0);
    return p;
}

TimeVaryingParam TimeVaryingParam::from_track(std::vector<double> sigma_track,
                                              double sample_rate) {
    if (sigma_track.size() < 2) throw std::invalid_argument("sigma track too short");
    for (double s : sigma_track)
        if (!(s > 0.0)) throw std::invalid_argument("sigma track must be positive");
    TimeVaryingParam p;
    std::size_t n = sigma_track.size();
    p.sigma_prime.resize(n);
    double dt = 1.0 / sample_rate;
    p.sigma_prime[0] = (sigma_track[1] - sigma_track[0]) / dt;
    p.sigma_prime[n - 1] = (sigma_track[n - 1] - sigma_track[n - 2]) / dt;
    for (std::size_t i = 1; i + 1 < n; ++i)
        p.sigma_prime[i] = (sigma_track[i + 1] - sigma_track[i - 1]) / (2.0 * dt);
    p.sigma = std::move(sigma_track);
    return p;
}

bool TimeVaryingParam::is_constant() const {
    if (sigma.empty()) return true;
    for (double s : sigma)
        if (s != sigma.front()) return false;
    return true;
}

Matrix<double> TFMatrix::magnitude() const {
    Matrix<double> m(values.rows(), values.cols());
    for (std::size_t i = 0; i < values.rows(); ++i)
        for (std::size_t j = 0; j < values.cols(); ++j) m(i, j) = std::abs(values(i, j));
    return m;
}

namespace {

std::size_t half_bins(int nfft) { return static_cast<std::size_t>(nfft / 2 + 1); }

void check_inputs(const Signal& signal, const TimeVaryingParam& sigma, int& nfft) {
    if (signal.size() < 2) throw std::invalid_argument("signal too short");
    if (!(signal.sample_rate > 0.0)) throw std::invalid_argument("sample_rate must be positive");
    if (sigma.size() != signal.size())
        throw std::invalid_argument("sigma track length must match the signal");
    if (nfft == 0) nfft = static_cast<int>(signal.size());
    if (nfft < 4) throw std::invalid_argument("nfft too small");
}

}  // namespace

TFMatrix adaptive_stft(const Signal& signal, const TimeVaryingParam& sigma, WindowKind kind,
                       double epsilon, int nfft, Band band) {
    check_inputs(signal, sigma, nfft);

    const double fs = signal.sample_rate;
    const std::size_t n = signal.size();
    const std::size_t nbins = band == Band::Half ? half_bins(nfft) : static_cast<std::size_t>(nfft);
    const int max_radius = (nfft - 1) / 2;

    TFMatrix tf;
    tf.values = Matrix<cplx>(n, nbins);
    tf.fs = fs;
    tf.nfft = nfft;
    tf.band = band;
    tf.kind = kind;
    tf.epsilon = epsilon;
    tf.sigma_track = sigma;
    tf.time_grid.resize(n);
    for (std::size_t i = 0; i < n; ++i) tf.time_grid[i] = signal.time_at(i);
    tf.freq_grid.resize(nbins);
    const double df = fs / nfft;
    if (band == Band::Half) {
        for (std::size_t m = 0; m < nbins; ++m) tf.freq_grid[m] = static_cast<double>(m) * df;
    } else {
        for (std::size_t j = 0; j < nbins; ++j)
            tf.freq_grid[j] = (static_cast<double>(j) - nfft / 2) * df;
    }

    const cplx* x = signal.samples.data();

    detail::parallel_chunks(n, [&](std::size_t begin, std::size_t end) {
        detail::Fft fft(nfft);
        std::vector<cplx> buf(static_cast<std::size_t>(nfft));
        std::vector<cplx> spec(static_cast<std::size_t>(nfft));
        WindowTaps taps;
        double cached_sigma = -1.0;

        for (std::size_t i = begin; i < end; ++i) {
            double s = sigma.sigma[i];
            if (s != cached_sigma) {
                taps = sample_window(WindowSpec::create(s, epsilon), kind, fs, max_radius);
                cached_sigma = s;
            }
            std::fill(buf.begin(), buf.end(), cplx{0.0, 0.0});
            int lo = -taps.radius, hi = taps.radius;
            if (static_cast<long>(i) + lo < 0) lo = -static_cast<int>(i);
            if (i + static_cast<std::size_t>(hi) >= n) hi = static_cast<int>(n - 1 - i);
            for (int k = lo; k <= hi; ++k) {
                int idx = k >= 0 ? k : k + nfft;
                buf[static_cast<std::size_t>(idx)] +=
                    x[i + static_cast<std::size_t>(k)] * taps.at(k) / fs;
            }
            fft.forward(buf.data(), spec.data());
            cplx* row = tf.values.row(i);
            if (band == Band::Half) {
                for (std::size_t m = 0; m < nbins; ++m) row[m] = spec[m];
            } else {
                for (std::size_t j = 0; j < nbins; ++j)
                    row[j] = spec[static_cast<std::size_t>((j + nbins / 2) % nbins)];
            }
        }
    });
    return tf;
}

TFMatrix stft_time_derivative(const TFMatrix& v, const TFMatrix& v_gprime,
                              const TFMatrix& v_tau_gprime) {
    if (v.num_times() != v_gprime.num_times() || v.num_times() != v_tau_gprime.num_times() ||
        v.num_freqs() != v_gprime.num_freqs() || v.num_freqs() != v_tau_gprime.num_freqs())
        throw std::invalid_argument("transform grids do not match");
    if (v.kind != WindowKind::G || v_gprime.kind != WindowKind::GPrime ||
        v_tau_gprime.kind != WindowKind::TauGPrime)
        throw std::invalid_argument("derivative needs the G, g' and tau g' transforms");

    TFMatrix out = v;
    const auto& track = v.sigma_track;
    for (std::size_t i = 0; i < v.num_times(); ++i) {
        double s = track.sigma[i];
        double ratio = track.sigma_prime[i] / s;
        const cplx* vr = v.values.row(i);
        const cplx* gr = v_gprime.values.row(i);
        const cplx* tr = v_tau_gprime.values.row(i);
        cplx* orow = out.values.row(i);
        for (std::size_t m = 0; m < v.num_freqs(); ++m) {
            cplx i2pe{0.0, 2.0 * kPi * v.freq_grid[m]};
            orow[m] = i2pe * vr[m] - gr[m] / s - ratio * (vr[m] + tr[m]);
        }
    }
    return out;
}

TFMatrix stft_time_derivative(const Signal& signal, const TimeVaryingParam& sigma, double epsilon,
                              int nfft, Band band) {
    TFMatrix v = adaptive_stft(signal, sigma, WindowKind::G, epsilon, nfft, band);
    TFMatrix vg = adaptive_stft(signal, sigma, WindowKind::GPrime, epsilon, nfft, band);
    TFMatrix vt = adaptive_stft(signal, sigma, WindowKind::TauGPrime, epsilon, nfft, band);
    return stft_time_derivative(v, vg, vt);
}

Signal reconstruct_full(const TFMatrix& tf, const TimeVaryingParam& sigma, bool real_input) {
    if (tf.kind != WindowKind::G)
        throw std::invalid_argument("reconstruction requires the G-kernel transform");
    if (sigma.size() != tf.num_times())
        throw std::invalid_argument("sigma track length must match the transform");
    if (real_input && tf.band != Band::Half)
        throw std::invalid_argument("real reconstruction expects a half-band transform");

    const double deta = tf.freq_step();
    Signal out;
    out.sample_rate = tf.fs;
    out.t0 = tf.time_grid.empty() ? 0.0 : tf.time_grid.front();
    out.real = real_input;
    out.samples.resize(tf.num_times());

    const std::size_t nb = tf.num_freqs();
    const bool even = tf.nfft % 2 == 0;
    for (std::size_t i = 0; i < tf.num_times(); ++i) {
        const cplx* row = tf.values.row(i);
        cplx acc{0.0, 0.0};
        if (real_input) {
            // trapezoid end weights make the discrete sum match the full-band
            // aliased integral exactly
            for (std::size_t m = 0; m < nb; ++m) {
                double w = 1.0;
                if (m == 0) w = 0.5;
                if (even && m == nb - 1) w = 0.5;
                acc += w * row[m];
            }
            double val = 2.0 * (sigma.sigma[i] / kG0) * acc.real() * deta;
            out.samples[i] = cplx{val, 0.0};
        } else {
            for (std::size_t m = 0; m < nb; ++m) acc += row[m];
            out.samples[i] = (sigma.sigma[i] / kG0) * acc * deta;
        }
    }
    return out;
}

cplx lfm_stft_closed_form(double amplitude, double c_hz, double r_hz_per_s, double sigma, double t,
                          double eta) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    const double s2r = 2.0 * kPi * sigma * sigma * r_hz_per_s;
    const cplx denom = std::sqrt(cplx{1.0, -s2r});
    const double xi = eta - (c_hz + r_hz_per_s * t);
    const double coeff = 2.0 * kPi * kPi * sigma * sigma / (1.0 + s2r * s2r);
    const cplx expo = -coeff * cplx{1.0, s2r} * xi * xi;
    const double phase = 2.0 * kPi * (c_hz * t + 0.5 * r_hz_per_s * t * t);
    return amplitude / denom * std::exp(cplx{0.0, phase}) * std::exp(expo);
}

}  // namespace tfsst
