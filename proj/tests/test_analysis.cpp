#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rfnn/analysis.hpp"
#include "rfnn/rng.hpp"

using namespace rfnn;

namespace {

std::vector<BlockReport> reports_on_curve(int width, int blocks, double c,
                                          double exponent) {
    std::vector<BlockReport> reports;
    for (int l = 1; l <= blocks; ++l) {
        BlockReport r;
        r.block = l;
        r.test_mse = c / std::pow(static_cast<double>(width) * l, exponent);
        r.train_mse = r.test_mse;
        reports.push_back(r);
    }
    return reports;
}

} // namespace

TEST_CASE("mse basics") {
    Eigen::VectorXd a(3), b(3);
    a << 1.0, 2.0, 3.0;
    b = a;
    CHECK(mse(a, b) == 0.0);
    b.array() += 1.0;
    CHECK(mse(a, b) == doctest::Approx(1.0));

    Eigen::VectorXd p(2), t(2);
    p << 0.0, 0.0;
    t << 3.0, 4.0;
    CHECK(mse(p, t) == doctest::Approx(12.5));

    Eigen::VectorXd wrong(4);
    CHECK_THROWS_AS(static_cast<void>(mse(a, wrong)), DimensionError);

    // permutation invariance under paired shuffles
    Rng rng(4);
    Eigen::VectorXd x(50), y(50);
    for (int i = 0; i < 50; ++i) {
        x[i] = rng.normal();
        y[i] = rng.normal();
    }
    std::vector<int> perm(50);
    for (int i = 0; i < 50; ++i) perm[static_cast<std::size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), std::mt19937(3));
    Eigen::VectorXd xp(50), yp(50);
    for (int i = 0; i < 50; ++i) {
        xp[i] = x[perm[static_cast<std::size_t>(i)]];
        yp[i] = y[perm[static_cast<std::size_t>(i)]];
    }
    CHECK(mse(xp, yp) == doctest::Approx(mse(x, y)).epsilon(1e-13));
}

TEST_CASE("theory curve anchoring") {
    std::vector<BlockReport> reports = reports_on_curve(6, 10, 1.0, 1.0);
    reports[0].test_mse = 0.1;
    const std::vector<double> curve = theory_curve(reports, 6);
    CHECK(curve[0] == doctest::Approx(0.1));
    CHECK(curve[1] == doctest::Approx(0.05));
    CHECK(curve[9] == doctest::Approx(0.01));
    for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i] < curve[i - 1]);
}

TEST_CASE("fit_rate recovers exact slopes") {
    {
        const ConvergenceReport report =
            build_convergence_report(reports_on_curve(6, 10, 2.0, 1.0), 6);
        CHECK(fit_rate(report, 1, 10) == doctest::Approx(-1.0).epsilon(1e-12));
    }
    {
        const ConvergenceReport report =
            build_convergence_report(reports_on_curve(4, 8, 5.0, 2.0), 4);
        CHECK(fit_rate(report, 1, 8) == doctest::Approx(-2.0).epsilon(1e-12));
    }
    {
        std::vector<BlockReport> flat = reports_on_curve(4, 8, 0.25, 0.0);
        const ConvergenceReport report = build_convergence_report(flat, 4);
        CHECK(fit_rate(report, 1, 8) == doctest::Approx(0.0).epsilon(1e-12));
    }
    // the anchored reference itself has slope exactly -1
    {
        std::vector<BlockReport> reports = reports_on_curve(6, 10, 3.0, 0.7);
        ConvergenceReport report = build_convergence_report(reports, 6);
        for (auto& row : report.rows) row.test_mse = row.theory_ref;
        CHECK(fit_rate(report, 1, 10) == doctest::Approx(-1.0).epsilon(1e-12));
    }
}

TEST_CASE("histogram counting and ranges") {
    std::vector<double> samples = {0.1, 0.2, 0.9, 1.4, 2.7};
    const Histogram h = make_histogram(samples, 3, 0.0, 3.0);
    CHECK(h.total() == 5);
    CHECK(h.counts[0] == 3);
    CHECK(h.counts[1] == 1);
    CHECK(h.counts[2] == 1);
    // out-of-range samples are dropped when a range is given
    const Histogram clipped = make_histogram(samples, 3, 0.0, 1.0);
    CHECK(clipped.total() == 3);
}

TEST_CASE("frequency histograms pool chains and de-normalize") {
    // hand-built trace: 2 chains stuck at normalized 2.0 and -1.0, std 0.5
    ChainTrace trace;
    trace.block = 1;
    trace.width = 2;
    trace.dim = 1;
    trace.has_prime = false;
    trace.iterations = 10;
    for (int it = 0; it < 10; ++it) {
        trace.freqs.push_back(2.0);
        trace.freqs.push_back(-1.0);
        trace.magnitudes.push_back(1.0);
        trace.magnitudes.push_back(1.0);
        trace.accepted.push_back(0);
        trace.accepted.push_back(0);
    }
    NormStats stats;
    stats.mean = Eigen::VectorXd::Zero(1);
    stats.std = Eigen::VectorXd::Constant(1, 0.5);

    const std::vector<ChainTrace> traces = {trace};
    const FrequencyHistograms hists = frequency_histogram(traces, 4, stats, 16);
    CHECK_FALSE(hists.has_prime);
    REQUIRE(hists.omega.size() == 1);
    // 6 post-burn-in iterations x 2 chains
    CHECK(hists.omega[0].total() == 12);
    // de-normalized samples are 4.0 and -2.0
    const std::vector<double> samples = pooled_omega_samples(traces, 4, stats, 0);
    CHECK(*std::max_element(samples.begin(), samples.end()) == doctest::Approx(4.0));
    CHECK(*std::min_element(samples.begin(), samples.end()) == doctest::Approx(-2.0));

    // std = 1 de-normalization is the identity
    stats.std[0] = 1.0;
    const std::vector<double> identity = pooled_omega_samples(traces, 4, stats, 0);
    CHECK(identity[0] == 2.0);

    CHECK_THROWS_AS(static_cast<void>(frequency_histogram(traces, 10, stats, 16)), Error);
}

TEST_CASE("mode detection on a clustered sample set") {
    Rng rng(12);
    std::vector<double> samples;
    for (int i = 0; i < 4000; ++i) samples.push_back(4.0 + 0.2 * rng.normal());
    for (int i = 0; i < 2500; ++i) samples.push_back(70.0 + 0.5 * rng.normal());
    for (int i = 0; i < 900; ++i) samples.push_back(150.0 + 0.5 * rng.normal());
    for (int i = 0; i < 300; ++i) samples.push_back(rng.uniform(0.0, 160.0));

    const std::vector<double> modes = top_frequency_modes(samples, 400, 3, 8.0);
    REQUIRE(modes.size() == 3);
    std::vector<double> sorted = modes;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted[0] == doctest::Approx(4.0).epsilon(0.05));
    CHECK(sorted[1] == doctest::Approx(70.0).epsilon(0.05));
    CHECK(sorted[2] == doctest::Approx(150.0).epsilon(0.05));
    // mass ordering: the 4-cluster dominates
    CHECK(modes[0] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("single stuck chain occupies one bin") {
    std::vector<double> samples(100, 5.0);
    const Histogram h = make_histogram(samples, 11);
    int occupied = 0;
    for (long c : h.counts) occupied += c > 0 ? 1 : 0;
    CHECK(occupied == 1);
    CHECK(h.total() == 100);
}
