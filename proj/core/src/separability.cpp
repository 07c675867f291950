#include "tfsst/separability.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tfsst {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

std::vector<double> sigma1(const std::vector<std::vector<double>>& ifs_per_time, double alpha) {
    std::vector<double> out(ifs_per_time.size(), kNaN);
    for (std::size_t i = 0; i < ifs_per_time.size(); ++i) {
        const auto& ifs = ifs_per_time[i];
        if (ifs.size() < 2) continue;
        double worst = 0.0;
        bool ok = true;
        for (std::size_t k = 1; k < ifs.size(); ++k) {
            double gap = ifs[k] - ifs[k - 1];
            if (!(gap > 0.0)) {
                ok = false;  // equal/inverted adjacent IFs: not separable
                break;
            }
            worst = std::max(worst, 2.0 * alpha / gap);
        }
        if (ok) out[i] = worst;
    }
    return out;
}

SeparabilityReport sigma2(const std::vector<std::vector<double>>& ifs_per_time,
                          const std::vector<std::vector<double>>& rates_per_time, double alpha) {
    if (ifs_per_time.size() != rates_per_time.size())
        throw std::invalid_argument("IF and chirp-rate lists must have equal length");

    SeparabilityReport rep;
    rep.pairs.resize(ifs_per_time.size());
    rep.sigma2.assign(ifs_per_time.size(), kNaN);
    rep.separable.assign(ifs_per_time.size(), 0);

    for (std::size_t i = 0; i < ifs_per_time.size(); ++i) {
        const auto& ifs = ifs_per_time[i];
        const auto& rates = rates_per_time[i];
        if (ifs.size() != rates.size())
            throw std::invalid_argument("IF and chirp-rate counts differ at a time instant");
        if (ifs.size() < 2) continue;

        double max_lower = 0.0, min_upper = std::numeric_limits<double>::infinity();
        bool all_ok = true;
        for (std::size_t k = 1; k < ifs.size(); ++k) {
            PairBounds pb;
            pb.b = ifs[k] - ifs[k - 1];
            pb.a = 2.0 * kPi * alpha * (std::abs(rates[k - 1]) + std::abs(rates[k]));
            pb.discriminant = pb.b * pb.b - 8.0 * alpha * pb.a;
            if (pb.b > 0.0 && pb.discriminant >= 0.0) {
                double root = std::sqrt(pb.discriminant);
                pb.lower = 4.0 * alpha / (pb.b + root);
                pb.upper = pb.b > root ? 4.0 * alpha / (pb.b - root)
                                       : std::numeric_limits<double>::infinity();
                pb.separable = true;
            } else {
                pb.lower = kNaN;
                pb.upper = kNaN;
                pb.separable = false;
                all_ok = false;
            }
            if (pb.separable) {
                max_lower = std::max(max_lower, pb.lower);
                min_upper = std::min(min_upper, pb.upper);
            }
            rep.pairs[i].push_back(pb);
        }
        if (all_ok) {
            rep.sigma2[i] = max_lower;
            rep.separable[i] = max_lower <= min_upper ? 1 : 0;
        }
    }
    return rep;
}

std::pair<double, double> support_zone(double if_hz, double chirp_rate, double sigma,
                                       double alpha) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
    double half = alpha * (1.0 / sigma + 2.0 * kPi * std::abs(chirp_rate) * sigma);
    return {if_hz - half, if_hz + half};
}

std::vector<std::uint8_t> check_separability(const std::vector<std::vector<double>>& ifs_per_time,
                                         const std::vector<std::vector<double>>& rates_per_time,
                                         double alpha) {
    SeparabilityReport rep = sigma2(ifs_per_time, rates_per_time, alpha);
    std::vector<std::uint8_t> out(ifs_per_time.size(), 0);
    for (std::size_t i = 0; i < ifs_per_time.size(); ++i) {
        const auto& ifs = ifs_per_time[i];
        const auto& rates = rates_per_time[i];
        if (ifs.size() < 2) continue;
        // rate-gap condition: 4 alpha sqrt(pi) sqrt(|r_k| + |r_{k-1}|) <= gap
        bool ok = true;
        for (std::size_t k = 1; k < ifs.size(); ++k) {
            double lhs = 4.0 * alpha * std::sqrt(kPi) *
                         std::sqrt(std::abs(rates[k]) + std::abs(rates[k - 1]));
            if (!(lhs <= ifs[k] - ifs[k - 1])) {
                ok = false;
                break;
            }
        }
        out[i] = (ok && rep.separable[i]) ? 1 : 0;
    }
    return out;
}

}  // namespace tfsst
