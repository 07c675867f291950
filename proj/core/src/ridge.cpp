#include "tfsst/ridge.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace tfsst {

namespace {

// Running-strength reference: median of the most recent accepted ridge values.
class StrengthWindow {
public:
    explicit StrengthWindow(std::size_t cap) : cap_(cap) {}
    void push(double v) {
        vals_.push_back(v);
        if (vals_.size() > cap_) vals_.pop_front();
    }
    bool empty() const { return vals_.empty(); }
    double median() const {
        std::vector<double> tmp(vals_.begin(), vals_.end());
        std::nth_element(tmp.begin(), tmp.begin() + tmp.size() / 2, tmp.end());
        return tmp[tmp.size() / 2];
    }

private:
    std::size_t cap_;
    std::deque<double> vals_;
};

}  // namespace

RidgeSet extract_ridges(const SstResult& sst, int num_components, int gamma_bins,
                        const RidgeOptions& opts) {
    if (num_components < 1) throw std::invalid_argument("need at least one component");
    if (gamma_bins < 0) throw std::invalid_argument("gamma_bins must be non-negative");

    const std::size_t nt = sst.num_times();
    const long nb = static_cast<long>(sst.num_freqs());

    Matrix<double> work(nt, sst.num_freqs());
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t m = 0; m < sst.num_freqs(); ++m) work(i, m) = std::abs(sst.energy(i, m));

    std::vector<double> col_max(nt, 0.0);
    for (std::size_t i = 0; i < nt; ++i)
        col_max[i] = *std::max_element(work.row(i), work.row(i) + work.cols());

    RidgeSet rs;
    for (int comp = 0; comp < num_components; ++comp) {
        // seed at the global maximum of the residual
        double best = 0.0;
        std::size_t bi = 0;
        long bb = 0;
        for (std::size_t i = 0; i < nt; ++i) {
            const double* row = work.row(i);
            for (long m = 0; m < nb; ++m)
                if (row[m] > best) {
                    best = row[m];
                    bi = i;
                    bb = m;
                }
        }
        if (!(best > 0.0)) {
            rs.truncated = true;
            break;
        }

        RidgeTrack ridge(nt, -1);
        ridge[bi] = static_cast<int>(bb);

        auto extend = [&](long from, long to, long step) {
            StrengthWindow strength(static_cast<std::size_t>(opts.strength_win));
            strength.push(best);
            int weak_run = 0;
            for (long i = from; i != to; i += step) {
                long prev = ridge[static_cast<std::size_t>(i - step)];
                long lo = std::max<long>(0, prev - opts.jump_cap);
                long hi = std::min<long>(nb - 1, prev + opts.jump_cap);
                const double* row = work.row(static_cast<std::size_t>(i));
                long arg = lo;
                for (long m = lo + 1; m <= hi; ++m)
                    if (row[m] > row[arg]) arg = m;
                double v = row[arg];
                double ref = strength.median();
                if (ref > 0.0 && v < opts.death_frac * ref) {
                    if (++weak_run >= opts.death_run) {
                        // the component ended where the weak run began
                        for (int back = 0; back < opts.death_run; ++back) {
                            long idx = i - static_cast<long>(back) * step;
                            if (idx >= 0 && idx < static_cast<long>(nt))
                                ridge[static_cast<std::size_t>(idx)] = -1;
                        }
                        return;
                    }
                } else {
                    weak_run = 0;
                    strength.push(v);
                }
                ridge[static_cast<std::size_t>(i)] = static_cast<int>(arg);
            }
        };
        extend(static_cast<long>(bi) + 1, static_cast<long>(nt), 1);
        extend(static_cast<long>(bi) - 1, -1, -1);

        // pointwise activity gate, then zero the live band for the next pass
        for (std::size_t i = 0; i < nt; ++i) {
            if (ridge[i] < 0) continue;
            long lo = std::max<long>(0, ridge[i] - gamma_bins);
            long hi = std::min<long>(nb - 1, ridge[i] + gamma_bins);
            double band = 0.0;
            const double* row = work.row(i);
            for (long m = lo; m <= hi; ++m) band += row[m];
            if (band < opts.active_gate * col_max[i]) {
                ridge[i] = -1;
                continue;
            }
            double* wrow = work.row(i);
            for (long m = lo; m <= hi; ++m) wrow[m] = 0.0;
        }
        rs.ridges.push_back(std::move(ridge));
    }
    if (static_cast<int>(rs.ridges.size()) < num_components) rs.truncated = true;
    return rs;
}

std::vector<double> component_errors(const std::vector<Signal>& true_components,
                                     const std::vector<Signal>& reconstructed) {
    if (true_components.size() != reconstructed.size())
        throw std::invalid_argument("component counts differ");
    std::vector<double> out;
    out.reserve(true_components.size());
    for (std::size_t k = 0; k < true_components.size(); ++k) {
        const auto& z = true_components[k].samples;
        const auto& zh = reconstructed[k].samples;
        if (z.size() != zh.size()) throw std::invalid_argument("component lengths differ");
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) {
            num += std::norm(z[i] - zh[i]);
            den += std::norm(z[i]);
        }
        if (!(den > 0.0)) throw std::invalid_argument("true component has zero norm");
        out.push_back(std::sqrt(num / den));
    }
    return out;
}

double rmse(const std::vector<Signal>& true_components,
            const std::vector<Signal>& reconstructed) {
    auto errs = component_errors(true_components, reconstructed);
    double acc = 0.0;
    for (double e : errs) acc += e;
    return acc / static_cast<double>(errs.size());
}

}  // namespace tfsst
