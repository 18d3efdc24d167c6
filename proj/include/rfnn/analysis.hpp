#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "rfnn/error.hpp"
#include "rfnn/network.hpp"
#include "rfnn/sampler.hpp"
#include "rfnn/trainer.hpp"

namespace rfnn {

/// Mean squared error n^-1 sum (pred - truth)^2.
double mse(const Eigen::VectorXd& predictions, const Eigen::VectorXd& truths);

/// Per-block convergence rows next to the C/(W l) reference anchored at the
/// block-1 test error.
struct ConvergenceRow {
    int block = 0;
    double wl = 0.0;
    double train_mse = 0.0;
    double test_mse = 0.0;
    double theory_ref = 0.0;
    double acceptance_rate_omega = 0.0;
    double acceptance_rate_omega_prime = 0.0;
    double seconds = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double c_fit = 0.0;      // theory_ref(l) = c_fit / (W l)
    double fitted_slope = 0.0;  // log test_mse vs log WL over all rows
};

/// reference(l) = C_fit / (W l) with C_fit = test_mse(1) * W.
std::vector<double> theory_curve(const std::vector<BlockReport>& reports, int width);

ConvergenceReport build_convergence_report(const std::vector<BlockReport>& reports, int width);

/// Least-squares slope of log(test_mse) against log(WL) over blocks
/// [from_block, to_block] (1-based, inclusive).
double fit_rate(const ConvergenceReport& report, int from_block, int to_block);

void write_convergence_csv(const std::string& path, const ConvergenceReport& report,
                           const std::vector<std::string>& comments = {});

struct Histogram {
    double lo = 0.0, hi = 0.0;
    std::vector<long> counts;

    int bins() const { return static_cast<int>(counts.size()); }
    double bin_width() const { return (hi - lo) / counts.size(); }
    double bin_left(int i) const { return lo + i * bin_width(); }
    double bin_center(int i) const { return lo + (i + 0.5) * bin_width(); }
    long total() const;
};

Histogram make_histogram(const std::vector<double>& samples, int bins);
Histogram make_histogram(const std::vector<double>& samples, int bins, double lo, double hi);

/// Post-burn-in accepted-frequency histograms pooled over all chains of the
/// given traces. Omega components are de-normalized to physical units by
/// dividing by the per-dimension input std; one histogram per input dimension
/// plus one for the omega-prime chains (z-space frequencies, no rescaling).
struct FrequencyHistograms {
    std::vector<Histogram> omega;       // size d
    Histogram omega_prime;              // empty counts if no primed traces
    bool has_prime = false;
};

FrequencyHistograms frequency_histogram(std::span<const ChainTrace> traces, int burn_in,
                                        const NormStats& stats, int bins);

/// Pooled de-normalized post-burn-in omega samples for one input dimension.
std::vector<double> pooled_omega_samples(std::span<const ChainTrace> traces, int burn_in,
                                         const NormStats& stats, int dim);
std::vector<double> pooled_omega_prime_samples(std::span<const ChainTrace> traces, int burn_in);

/// Top-k histogram modes of a sample set: greedy local maxima separated by at
/// least min_separation, each refined to the median of the samples within
/// +/- min_separation/2 of the peak bin. Returned in decreasing mass order.
std::vector<double> top_frequency_modes(const std::vector<double>& samples, int bins, int k,
                                        double min_separation);

/// CSV with per-type, per-dimension rows (bin edges in both physical and
/// normalized units for the omega histograms).
void write_histogram_csv(const std::string& path, const FrequencyHistograms& hists,
                         const NormStats& stats, const std::vector<std::string>& comments = {});

/// Prediction trace (theta..., q_true, q_pred) on a dataset.
void write_predictions_csv(const std::string& path, const Network& net, const Dataset& data,
                           const std::vector<std::string>& comments = {});

} // namespace rfnn
