#include "rfnn/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rfnn/csv.hpp"
#include "rfnn/kernels.hpp"

namespace rfnn {

double mse(const Eigen::VectorXd& predictions, const Eigen::VectorXd& truths) {
    if (predictions.size() != truths.size())
        throw DimensionError("prediction length " + std::to_string(predictions.size()) +
                             " does not match truth length " + std::to_string(truths.size()));
    if (predictions.size() == 0) throw DimensionError("mse requires at least one sample");
    return kernels::sum_sq_diff(predictions.data(), truths.data(),
                                static_cast<std::size_t>(predictions.size())) /
           static_cast<double>(predictions.size());
}

std::vector<double> theory_curve(const std::vector<BlockReport>& reports, int width) {
    if (reports.empty()) return {};
    if (!(reports.front().test_mse > 0.0))
        throw Error("theory curve requires positive block-1 test MSE");
    const double c_fit = reports.front().test_mse * width;
    std::vector<double> curve;
    curve.reserve(reports.size());
    for (const auto& r : reports) curve.push_back(c_fit / (static_cast<double>(width) * r.block));
    return curve;
}

ConvergenceReport build_convergence_report(const std::vector<BlockReport>& reports, int width) {
    ConvergenceReport report;
    if (reports.empty()) return report;
    const std::vector<double> curve = theory_curve(reports, width);
    report.c_fit = reports.front().test_mse * width;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const BlockReport& r = reports[i];
        report.rows.push_back({r.block, static_cast<double>(width) * r.block, r.train_mse,
                               r.test_mse, curve[i], r.acceptance_rate_omega,
                               r.acceptance_rate_omega_prime, r.seconds});
    }
    report.fitted_slope =
        report.rows.size() >= 2
            ? fit_rate(report, report.rows.front().block, report.rows.back().block)
            : std::numeric_limits<double>::quiet_NaN();
    return report;
}

double fit_rate(const ConvergenceReport& report, int from_block, int to_block) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (const auto& row : report.rows) {
        if (row.block < from_block || row.block > to_block) continue;
        if (!(row.test_mse > 0.0))
            throw Error("fit_rate requires positive test MSE at block " +
                        std::to_string(row.block));
        const double x = std::log(row.wl);
        const double y = std::log(row.test_mse);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count < 2) throw Error("fit_rate requires at least two blocks in range");
    const double denom = count * sxx - sx * sx;
    return (count * sxy - sx * sy) / denom;
}

void write_convergence_csv(const std::string& path, const ConvergenceReport& report,
                           const std::vector<std::string>& comments) {
    CsvWriter writer(path);
    for (const auto& c : comments) writer.comment(c);
    writer.header({"block", "WL", "train_mse", "test_mse", "theory_ref",
                   "acceptance_rate_omega", "acceptance_rate_omega_prime", "seconds"});
    for (const auto& row : report.rows)
        writer.row({static_cast<double>(row.block), row.wl, row.train_mse, row.test_mse,
                    row.theory_ref, row.acceptance_rate_omega, row.acceptance_rate_omega_prime,
                    row.seconds});
}

long Histogram::total() const {
    long sum = 0;
    for (long c : counts) sum += c;
    return sum;
}

Histogram make_histogram(const std::vector<double>& samples, int bins, double lo, double hi) {
    if (bins < 1) throw Error("histogram requires bins >= 1");
    if (!(hi > lo)) throw Error("histogram requires hi > lo");
    Histogram hist;
    hist.lo = lo;
    hist.hi = hi;
    hist.counts.assign(static_cast<std::size_t>(bins), 0);
    const double scale = bins / (hi - lo);
    for (double s : samples) {
        if (s < lo || s > hi) continue;
        auto idx = static_cast<long>((s - lo) * scale);
        if (idx >= bins) idx = bins - 1;
        ++hist.counts[static_cast<std::size_t>(idx)];
    }
    return hist;
}

Histogram make_histogram(const std::vector<double>& samples, int bins) {
    if (samples.empty()) throw Error("histogram requires samples");
    double lo = *std::min_element(samples.begin(), samples.end());
    double hi = *std::max_element(samples.begin(), samples.end());
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    return make_histogram(samples, bins, lo, hi);
}

std::vector<double> pooled_omega_samples(std::span<const ChainTrace> traces, int burn_in,
                                         const NormStats& stats, int dim) {
    std::vector<double> samples;
    for (const auto& trace : traces) {
        if (burn_in >= trace.iterations)
            throw Error("burn_in " + std::to_string(burn_in) + " >= trace iterations " +
                        std::to_string(trace.iterations));
        if (dim >= trace.dim) throw Error("dimension index out of range");
        for (int it = burn_in; it < trace.iterations; ++it)
            for (int j = 0; j < trace.width; ++j)
                samples.push_back(trace.freq_at(it, j, dim) / stats.std[dim]);
    }
    return samples;
}

std::vector<double> pooled_omega_prime_samples(std::span<const ChainTrace> traces, int burn_in) {
    std::vector<double> samples;
    for (const auto& trace : traces) {
        if (!trace.has_prime) continue;
        if (burn_in >= trace.iterations)
            throw Error("burn_in " + std::to_string(burn_in) + " >= trace iterations " +
                        std::to_string(trace.iterations));
        for (int it = burn_in; it < trace.iterations; ++it)
            for (int j = 0; j < trace.width; ++j)
                samples.push_back(trace.freq_prime_at(it, j));
    }
    return samples;
}

FrequencyHistograms frequency_histogram(std::span<const ChainTrace> traces, int burn_in,
                                        const NormStats& stats, int bins) {
    if (traces.empty()) throw Error("frequency_histogram requires at least one trace");
    FrequencyHistograms out;
    const int d = traces.front().dim;
    for (int k = 0; k < d; ++k)
        out.omega.push_back(make_histogram(pooled_omega_samples(traces, burn_in, stats, k), bins));
    const std::vector<double> prime = pooled_omega_prime_samples(traces, burn_in);
    if (!prime.empty()) {
        out.omega_prime = make_histogram(prime, bins);
        out.has_prime = true;
    }
    return out;
}

std::vector<double> top_frequency_modes(const std::vector<double>& samples, int bins, int k,
                                        double min_separation) {
    if (samples.empty()) throw Error("mode detection requires samples");
    Histogram hist = make_histogram(samples, bins);
    std::vector<double> modes;
    std::vector<bool> blocked(hist.counts.size(), false);
    for (int found = 0; found < k; ++found) {
        long best = -1;
        int best_bin = -1;
        for (int i = 0; i < hist.bins(); ++i) {
            if (blocked[static_cast<std::size_t>(i)]) continue;
            if (hist.counts[static_cast<std::size_t>(i)] > best) {
                best = hist.counts[static_cast<std::size_t>(i)];
                best_bin = i;
            }
        }
        if (best_bin < 0 || best == 0) break;
        const double center = hist.bin_center(best_bin);
        const double win_lo = center - 0.5 * min_separation;
        const double win_hi = center + 0.5 * min_separation;
        std::vector<double> members;
        for (double s : samples)
            if (s >= win_lo && s <= win_hi) members.push_back(s);
        std::sort(members.begin(), members.end());
        modes.push_back(members[members.size() / 2]);
        for (int i = 0; i < hist.bins(); ++i)
            if (std::abs(hist.bin_center(i) - center) < min_separation)
                blocked[static_cast<std::size_t>(i)] = true;
    }
    return modes;
}

void write_histogram_csv(const std::string& path, const FrequencyHistograms& hists,
                         const NormStats& stats, const std::vector<std::string>& comments) {
    CsvWriter writer(path);
    for (const auto& c : comments) writer.comment(c);
    writer.header({"freq_type", "dim", "bin_left", "bin_right", "bin_left_normalized",
                   "bin_right_normalized", "count"});
    for (std::size_t k = 0; k < hists.omega.size(); ++k) {
        const Histogram& h = hists.omega[k];
        const double sd = stats.std[static_cast<Eigen::Index>(k)];
        for (int i = 0; i < h.bins(); ++i) {
            writer.raw_row({"omega", std::to_string(k + 1), format_double(h.bin_left(i)),
                            format_double(h.bin_left(i) + h.bin_width()),
                            format_double(h.bin_left(i) * sd),
                            format_double((h.bin_left(i) + h.bin_width()) * sd),
                            std::to_string(h.counts[static_cast<std::size_t>(i)])});
        }
    }
    if (hists.has_prime) {
        const Histogram& h = hists.omega_prime;
        for (int i = 0; i < h.bins(); ++i)
            writer.raw_row({"omega_prime", "1", format_double(h.bin_left(i)),
                            format_double(h.bin_left(i) + h.bin_width()),
                            format_double(h.bin_left(i)),
                            format_double(h.bin_left(i) + h.bin_width()),
                            std::to_string(h.counts[static_cast<std::size_t>(i)])});
    }
}

void write_predictions_csv(const std::string& path, const Network& net, const Dataset& data,
                           const std::vector<std::string>& comments) {
    CsvWriter writer(path);
    for (const auto& c : comments) writer.comment(c);
    std::vector<std::string> columns;
    for (Eigen::Index k = 0; k < data.dim(); ++k)
        columns.push_back("theta_" + std::to_string(k + 1));
    columns.push_back("q_true");
    columns.push_back("q_pred");
    writer.header(columns);
    const Eigen::VectorXd pred = forward(net, data.inputs);
    std::vector<double> row(static_cast<std::size_t>(data.dim()) + 2);
    for (Eigen::Index i = 0; i < data.size(); ++i) {
        for (Eigen::Index k = 0; k < data.dim(); ++k)
            row[static_cast<std::size_t>(k)] = data.inputs(i, k);
        row[static_cast<std::size_t>(data.dim())] = data.targets[i];
        row[static_cast<std::size_t>(data.dim()) + 1] = pred[i];
        writer.row(row);
    }
}

} // namespace rfnn
