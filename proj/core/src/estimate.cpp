#include "tfsst/estimate.hpp"

#include "parallel.hpp"
#include "tfsst/stft.hpp"
#include "tfsst/window.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tfsst {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

std::vector<double> EstimatorConfig::sigma_grid() const {
    validate();
    auto count = static_cast<std::size_t>(std::llround((sigma_max - sigma_min) / sigma_step)) + 1;
    std::vector<double> g(count);
    for (std::size_t j = 0; j < count; ++j) g[j] = sigma_max - static_cast<double>(j) * sigma_step;
    g.back() = sigma_min;
    return g;
}

std::vector<double> EstimatorConfig::epsilon_grid() const {
    validate();
    auto count =
        static_cast<std::size_t>(std::llround((epsilon_max - epsilon_min) / epsilon_step)) + 1;
    std::vector<double> g(count);
    for (std::size_t j = 0; j < count; ++j)
        g[j] = epsilon_max - static_cast<double>(j) * epsilon_step;
    g.back() = epsilon_min;
    return g;
}

void EstimatorConfig::validate() const {
    if (!(sigma_min > 0.0) || !(sigma_max > sigma_min) || !(sigma_step > 0.0))
        throw std::invalid_argument("sigma grid must satisfy 0 < sigma_min < sigma_max, step > 0");
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0,1)");
    if (!(epsilon_min > 0.0) || !(epsilon_min < 1.0) || !(epsilon_max > 0.0) ||
        !(epsilon_max < 1.0) || epsilon_max < epsilon_min || !(epsilon_step > 0.0))
        throw std::invalid_argument("epsilon grid must satisfy 0 < eps_min <= eps_max < 1");
    if (!(gamma1 > 0.0) || !(gamma1 < 1.0))
        throw std::invalid_argument("gamma1 must lie in (0,1)");
    if (!(renyi_ell > 1.0)) throw std::invalid_argument("renyi_ell must exceed 1");
    if (renyi_zeta < 0) throw std::invalid_argument("renyi_zeta must be non-negative");
    if (smoothing.empty()) throw std::invalid_argument("smoothing filter must be non-empty");
}

double renyi_entropy(const Matrix<double>& tf_mag, int t_index, int zeta, double ell) {
    if (tf_mag.empty()) return kInf;
    long nt = static_cast<long>(tf_mag.rows());
    long lo = std::max<long>(0, t_index - zeta);
    long hi = std::min<long>(nt - 1, t_index + zeta);
    double s2 = 0.0, s2l = 0.0;
    for (long i = lo; i <= hi; ++i) {
        const double* row = tf_mag.row(static_cast<std::size_t>(i));
        for (std::size_t m = 0; m < tf_mag.cols(); ++m) {
            double p = row[m] * row[m];
            s2 += p;
            s2l += std::pow(p, ell);
        }
    }
    if (!(s2 > 0.0)) return kInf;
    return std::log2(s2l / std::pow(s2, ell)) / (1.0 - ell);
}

namespace {

template <typename T>
std::vector<int> peaks_impl(const T* slice, std::size_t n, double gamma1_on_scale) {
    std::vector<int> out;
    if (n == 0) return out;
    T top = *std::max_element(slice, slice + n);
    if (!(top > T{0})) return out;
    const double gate = gamma1_on_scale * static_cast<double>(top);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && slice[j + 1] == slice[i]) ++j;
        bool rise = i > 0 && slice[i - 1] < slice[i];
        bool fall = j + 1 < n && slice[j + 1] < slice[i];
        if (rise && fall && static_cast<double>(slice[i]) > gate)
            out.push_back(static_cast<int>(i));  // leftmost bin of a plateau
        i = j + 1;
    }
    return out;
}

template <typename T>
ChirpRateEstimate fit_slope(const Matrix<T>& mag, int t_index, int peak_bin, double sigma,
                            double alpha, double fs, double freq_step) {
    long nt = static_cast<long>(mag.rows());
    long nb = static_cast<long>(mag.cols());
    int dn = static_cast<int>(std::lround(2.0 * kPi * alpha * sigma * fs));
    long lo = std::max<long>(0, t_index - dn);
    long hi = std::min<long>(nt - 1, t_index + dn);
    if (hi - lo + 1 < 3) return {0.0, true};

    int bw = std::max(1, static_cast<int>(std::lround(alpha / sigma / freq_step)));
    long b0 = std::max<long>(0, peak_bin - bw);
    long b1 = std::min<long>(nb - 1, peak_bin + bw);

    // least-squares slope of the argmax trajectory
    double st = 0.0, sd = 0.0, stt = 0.0, std_ = 0.0;
    long cnt = hi - lo + 1;
    for (long i = lo; i <= hi; ++i) {
        const T* row = mag.row(static_cast<std::size_t>(i));
        long arg = b0;
        for (long b = b0 + 1; b <= b1; ++b)
            if (row[b] > row[arg]) arg = b;
        double tt = static_cast<double>(i) / fs;
        double dd = static_cast<double>(arg) * freq_step;
        st += tt;
        sd += dd;
        stt += tt * tt;
        std_ += tt * dd;
    }
    double denom = stt - st * st / static_cast<double>(cnt);
    if (!(denom > 0.0)) return {0.0, false};
    return {(std_ - st * sd / static_cast<double>(cnt)) / denom, false};
}

}  // namespace

std::vector<int> extract_peaks(const double* slice, std::size_t n, double gamma1) {
    return peaks_impl(slice, n, gamma1);
}

std::vector<int> extract_peaks(const std::vector<double>& mag_slice, double gamma1) {
    return peaks_impl(mag_slice.data(), mag_slice.size(), gamma1);
}

ChirpRateEstimate estimate_chirp_rate(const Matrix<double>& tf_mag, int t_index, int peak_bin,
                                      double sigma, double alpha, double fs, double freq_step) {
    return fit_slope(tf_mag, t_index, peak_bin, sigma, alpha, fs, freq_step);
}

bool SupportIntervals::disjoint() const {
    for (std::size_t k = 1; k < intervals.size(); ++k)
        if (intervals[k - 1].high > intervals[k].low) return false;
    return true;
}

SupportIntervals support_intervals(const std::vector<double>& peak_freqs,
                                   const std::vector<double>& chirp_rates, double sigma,
                                   double alpha, bool prev_peak_lower) {
    if (peak_freqs.size() != chirp_rates.size())
        throw std::invalid_argument("peak/rate counts differ");
    SupportIntervals s;
    s.intervals.resize(peak_freqs.size());
    auto half = [&](std::size_t k) {
        return alpha * (1.0 / sigma + 2.0 * kPi * std::abs(chirp_rates[k]) * sigma);
    };
    for (std::size_t k = 0; k < peak_freqs.size(); ++k) {
        Interval& iv = s.intervals[k];
        iv.peak_freq = peak_freqs[k];
        iv.chirp_rate = chirp_rates[k];
        iv.high = peak_freqs[k] + half(k);
        iv.low = prev_peak_lower && k > 0 ? peak_freqs[k - 1] - half(k - 1)
                                          : peak_freqs[k] - half(k);
    }
    return s;
}

std::vector<double> smooth_track(const std::vector<double>& track,
                                 const std::vector<double>& taps) {
    if (taps.empty() || track.empty()) return track;
    std::size_t r = taps.size() / 2;
    std::size_t n = track.size();
    if (n < r + 1) return track;
    std::vector<double> padded;
    padded.reserve(n + 2 * r);
    for (std::size_t i = r; i >= 1; --i) padded.push_back(track[i]);
    padded.insert(padded.end(), track.begin(), track.end());
    for (std::size_t i = 0; i < r; ++i) padded.push_back(track[n - 2 - i]);
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < taps.size(); ++k) out[i] += taps[k] * padded[i + k];
    return out;
}

// ---------------------------------------------------------------------------

struct WindowSelector::Impl {
    EstimatorConfig cfg;
    std::vector<double> grid;
    double fs = 0.0;
    std::size_t n = 0;
    std::size_t nb = 0;
    double freq_step = 0.0;

    std::vector<Matrix<float>> power;           // |V|^2 per grid width
    std::vector<std::vector<double>> pref2;     // [j][t+1] prefix of column sum |V|^2
    std::vector<std::vector<double>> pref2l;    // [j][t+1] prefix of column sum |V|^(2l)
    std::vector<std::vector<std::vector<int>>> peaks;  // [j][t]

    int sigma_u_index(int t) const {
        long nt = static_cast<long>(n);
        long lo = std::max<long>(0, t - cfg.renyi_zeta);
        long hi = std::min<long>(nt - 1, t + cfg.renyi_zeta);
        int best = 0;
        double best_e = kInf;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            double w2 = pref2[j][static_cast<std::size_t>(hi + 1)] -
                        pref2[j][static_cast<std::size_t>(lo)];
            double w2l = pref2l[j][static_cast<std::size_t>(hi + 1)] -
                         pref2l[j][static_cast<std::size_t>(lo)];
            double e = w2 > 0.0
                           ? std::log2(w2l / std::pow(w2, cfg.renyi_ell)) / (1.0 - cfg.renyi_ell)
                           : kInf;
            if (e < best_e) {
                best_e = e;
                best = static_cast<int>(j);
            }
        }
        return best;
    }

    SupportIntervals intervals_at(std::size_t j, int t, double eps) const {
        double alpha = alpha_from_epsilon(eps);
        double sigma = grid[j];
        const auto& pk = peaks[j][static_cast<std::size_t>(t)];
        std::vector<double> freqs(pk.size()), rates(pk.size());
        for (std::size_t k = 0; k < pk.size(); ++k) {
            freqs[k] = static_cast<double>(pk[k]) * freq_step;
            rates[k] = fit_slope(power[j], t, pk[k], sigma, alpha, fs, freq_step).value;
        }
        return support_intervals(freqs, rates, sigma, alpha);
    }

    // Width descent shared by both algorithms; ok(j) decides acceptance.
    template <typename Ok>
    std::vector<double> descend(Ok&& ok) const {
        std::vector<double> c(n, 0.0);
        detail::parallel_chunks(n, [&](std::size_t begin, std::size_t end) {
            for (std::size_t t = begin; t < end; ++t) {
                int ti = static_cast<int>(t);
                std::size_t z = static_cast<std::size_t>(sigma_u_index(ti));
                std::size_t m = peaks[z][t].size();
                if (m != 0 && ok(z, ti)) {
                    while (z + 1 < grid.size() && peaks[z + 1][t].size() == m &&
                           ok(z + 1, ti)) {
                        ++z;
                    }
                }
                c[t] = grid[z];
            }
        });
        return c;
    }
};

WindowSelector::WindowSelector(const Signal& signal, const EstimatorConfig& config)
    : impl_(std::make_unique<Impl>()) {
    config.validate();
    impl_->cfg = config;
    impl_->grid = config.sigma_grid();
    impl_->fs = signal.sample_rate;
    impl_->n = signal.size();

    int nfft = config.nfft > 0 ? config.nfft : static_cast<int>(signal.size());
    impl_->freq_step = signal.sample_rate / nfft;

    const double ell = config.renyi_ell;
    impl_->power.resize(impl_->grid.size());
    impl_->pref2.resize(impl_->grid.size());
    impl_->pref2l.resize(impl_->grid.size());
    impl_->peaks.resize(impl_->grid.size());

    const double g1sq = config.gamma1 * config.gamma1;
    for (std::size_t j = 0; j < impl_->grid.size(); ++j) {
        TFMatrix tf = adaptive_stft(signal, TimeVaryingParam::constant(impl_->grid[j], impl_->n),
                                    WindowKind::G, config.epsilon, nfft, Band::Half);
        impl_->nb = tf.num_freqs();
        Matrix<float>& p = impl_->power[j];
        p = Matrix<float>(impl_->n, impl_->nb);
        auto& pre2 = impl_->pref2[j];
        auto& pre2l = impl_->pref2l[j];
        pre2.assign(impl_->n + 1, 0.0);
        pre2l.assign(impl_->n + 1, 0.0);
        impl_->peaks[j].resize(impl_->n);
        for (std::size_t i = 0; i < impl_->n; ++i) {
            const cplx* row = tf.values.row(i);
            float* pr = p.row(i);
            double s2 = 0.0, s2l = 0.0;
            for (std::size_t m = 0; m < impl_->nb; ++m) {
                double pw = std::norm(row[m]);
                pr[m] = static_cast<float>(pw);
                s2 += pw;
                s2l += std::pow(pw, ell);
            }
            pre2[i + 1] = pre2[i] + s2;
            pre2l[i + 1] = pre2l[i] + s2l;
            // peaks of |V|^2 and |V| coincide; the height gate squares
            impl_->peaks[j][i] = peaks_impl(pr, impl_->nb, g1sq);
        }
    }
}

WindowSelector::~WindowSelector() = default;
WindowSelector::WindowSelector(WindowSelector&&) noexcept = default;
WindowSelector& WindowSelector::operator=(WindowSelector&&) noexcept = default;

const EstimatorConfig& WindowSelector::config() const { return impl_->cfg; }
const std::vector<double>& WindowSelector::grid() const { return impl_->grid; }
std::size_t WindowSelector::num_times() const { return impl_->n; }

int WindowSelector::sigma_u_index(int t_index) const { return impl_->sigma_u_index(t_index); }
double WindowSelector::sigma_u(int t_index) const {
    return impl_->grid[static_cast<std::size_t>(impl_->sigma_u_index(t_index))];
}

std::vector<double> WindowSelector::sigma_u_track() const {
    std::vector<double> out(impl_->n);
    for (std::size_t t = 0; t < impl_->n; ++t)
        out[t] = impl_->grid[static_cast<std::size_t>(impl_->sigma_u_index(static_cast<int>(t)))];
    return out;
}

std::vector<int> WindowSelector::peaks_at(int grid_index, int t_index) const {
    return impl_->peaks[static_cast<std::size_t>(grid_index)][static_cast<std::size_t>(t_index)];
}

SupportIntervals WindowSelector::intervals_at(int grid_index, int t_index, double epsilon) const {
    return impl_->intervals_at(static_cast<std::size_t>(grid_index), t_index, epsilon);
}

std::vector<double> WindowSelector::algorithm1(std::vector<double>* raw_out) const {
    const double eps = impl_->cfg.epsilon;
    auto raw = impl_->descend(
        [&](std::size_t j, int t) { return impl_->intervals_at(j, t, eps).disjoint(); });
    if (raw_out) *raw_out = raw;
    return smooth_track(raw, impl_->cfg.smoothing);
}

std::vector<double> WindowSelector::algorithm2(std::vector<double>* raw_out) const {
    auto eps_grid = impl_->cfg.epsilon_grid();
    auto raw = impl_->descend([&](std::size_t j, int t) {
        for (double eps : eps_grid)
            if (!impl_->intervals_at(j, t, eps).disjoint()) return false;
        return true;
    });
    if (raw_out) *raw_out = raw;
    return smooth_track(raw, impl_->cfg.smoothing);
}

std::vector<double> sigma_renyi_sst(const Signal& signal, const EstimatorConfig& config,
                                    bool second_order) {
    config.validate();
    auto grid = config.sigma_grid();
    std::size_t n = signal.size();

    SstOptions opts;
    opts.epsilon = config.epsilon;
    opts.nfft = config.nfft;

    std::vector<double> best_e(n, kInf);
    std::vector<double> best_sigma(n, grid.front());
    for (double sigma : grid) {
        SstResult sst = compute_sst(signal, TimeVaryingParam::constant(sigma, n),
                                    second_order ? SstVariant::Fsst2 : SstVariant::Fsst, opts);
        std::size_t nb = sst.num_freqs();
        // column sums of |E|^2 and |E|^(2l), then sliding-window entropies
        std::vector<double> s2(n, 0.0), s2l(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const cplx* row = sst.energy.row(i);
            for (std::size_t m = 0; m < nb; ++m) {
                double p = std::norm(row[m]);
                s2[i] += p;
                s2l[i] += std::pow(p, config.renyi_ell);
            }
        }
        for (std::size_t t = 0; t < n; ++t) {
            long lo = std::max<long>(0, static_cast<long>(t) - config.renyi_zeta);
            long hi = std::min<long>(static_cast<long>(n) - 1,
                                     static_cast<long>(t) + config.renyi_zeta);
            double w2 = 0.0, w2l = 0.0;
            for (long i = lo; i <= hi; ++i) {
                w2 += s2[static_cast<std::size_t>(i)];
                w2l += s2l[static_cast<std::size_t>(i)];
            }
            double e = w2 > 0.0 ? std::log2(w2l / std::pow(w2, config.renyi_ell)) /
                                      (1.0 - config.renyi_ell)
                                : kInf;
            if (e < best_e[t]) {
                best_e[t] = e;
                best_sigma[t] = sigma;
            }
        }
    }
    return best_sigma;
}

}  // namespace tfsst
