#pragma once

#include "tfsst/matrix.hpp"
#include "tfsst/signal.hpp"
#include "tfsst/squeeze.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace tfsst {

struct EstimatorConfig {
    // Descending width grid [sigma_max .. sigma_min] with step sigma_step.
    double sigma_max = 0.2;
    double sigma_min = 0.001;
    double sigma_step = 0.001;

    double epsilon = 0.2;  // single threshold (algorithm 1, zones)

    // Threshold walk for algorithm 2, descending from epsilon_max to epsilon_min.
    double epsilon_max = 0.8;
    double epsilon_min = 0.2;
    double epsilon_step = 0.01;

    double gamma1 = 0.3;    // peak height threshold, relative to slice max
    double renyi_ell = 2.5;
    int renyi_zeta = 4;     // local window half-width, samples

    std::vector<double> smoothing = {0.2, 0.2, 0.2, 0.2, 0.2};

    int nfft = 0;  // 0: signal length

    std::vector<double> sigma_grid() const;    // descending
    std::vector<double> epsilon_grid() const;  // descending

    void validate() const;  // throws std::invalid_argument
};

/// Concentration of |V| over the time window [t-zeta, t+zeta] (clipped):
/// log2( sum |V|^{2l} / (sum |V|^2)^l ) / (1-l). All-zero windows give +inf.
double renyi_entropy(const Matrix<double>& tf_mag, int t_index, int zeta, double ell);

/// Strict local maxima above gamma1 * slice max; plateaus report their
/// leftmost bin. Slice endpoints never qualify.
std::vector<int> extract_peaks(const std::vector<double>& mag_slice, double gamma1);
std::vector<int> extract_peaks(const double* slice, std::size_t n, double gamma1);

struct ChirpRateEstimate {
    double value = 0.0;  // Hz/s
    bool degenerate = false;  // fit window had fewer than 3 samples
};

/// Least-squares slope of the argmax trajectory near (t, peak_bin):
/// window t +- 2 pi alpha sigma, band +- alpha/sigma Hz around the peak.
ChirpRateEstimate estimate_chirp_rate(const Matrix<double>& tf_mag, int t_index, int peak_bin,
                                      double sigma, double alpha, double fs, double freq_step);

struct Interval {
    double low = 0.0;   // Hz
    double high = 0.0;  // Hz
    double peak_freq = 0.0;
    double chirp_rate = 0.0;
};

struct SupportIntervals {
    std::vector<Interval> intervals;  // ordered by peak frequency
    bool disjoint() const;            // high_k <= low_{k+1} for all adjacent pairs
};

/// Intervals peak +- alpha (1/sigma + 2 pi |rate| sigma). prev_peak_lower
/// selects an alternate convention that derives interval k's lower edge from
/// peak k-1's parameters.
SupportIntervals support_intervals(const std::vector<double>& peak_freqs,
                                   const std::vector<double>& chirp_rates, double sigma,
                                   double alpha, bool prev_peak_lower = false);

/// Width selection from data. Holds |V(t, eta, sigma)| over the whole width
/// grid (built once; the grid windows share the 6-sigma truncation so the
/// magnitudes are threshold-independent).
class WindowSelector {
public:
    WindowSelector(const Signal& signal, const EstimatorConfig& config);
    ~WindowSelector();
    WindowSelector(WindowSelector&&) noexcept;
    WindowSelector& operator=(WindowSelector&&) noexcept;

    const EstimatorConfig& config() const;
    const std::vector<double>& grid() const;
    std::size_t num_times() const;

    /// Entropy-minimizing grid index / width at time t (first minimum wins).
    int sigma_u_index(int t_index) const;
    double sigma_u(int t_index) const;
    std::vector<double> sigma_u_track() const;

    /// Magnitude slice peaks at (grid index, time).
    std::vector<int> peaks_at(int grid_index, int t_index) const;
    SupportIntervals intervals_at(int grid_index, int t_index, double epsilon) const;

    /// Width descent with the single configured threshold. Returns the
    /// smoothed track; raw_out, when set, receives the pre-smoothing track.
    std::vector<double> algorithm1(std::vector<double>* raw_out = nullptr) const;

    /// Width descent accepting a width only if intervals stay disjoint across
    /// the whole descending threshold grid.
    std::vector<double> algorithm2(std::vector<double>* raw_out = nullptr) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Entropy-minimizing constant width of the squeezed representation, per time.
/// second_order selects the second-order phase estimate.
std::vector<double> sigma_renyi_sst(const Signal& signal, const EstimatorConfig& config,
                                    bool second_order);

/// Convolution with reflect padding (used for the track smoothing).
std::vector<double> smooth_track(const std::vector<double>& track,
                                 const std::vector<double>& taps);

}  // namespace tfsst
