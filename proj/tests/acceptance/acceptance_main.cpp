// Acceptance suite. Each criterion prints one PASS/FAIL line per check and
// the binary exits nonzero if any check in the selected criterion fails.
//
//   acceptance c1|c2a|c2b|c3|c4|c5|c6|all

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "rfnn/analysis.hpp"
#include "rfnn/baseline.hpp"
#include "rfnn/oracle.hpp"
#include "rfnn/targets.hpp"
#include "rfnn/trainer.hpp"

using namespace rfnn;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& name, const std::string& detail) {
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// ---- shared configurations -------------------------------------------------

TrainConfig multiscale_config(int blocks, int sweeps) {
    TrainConfig cfg;
    cfg.W = 6;
    cfg.L_max = blocks;
    cfg.sweeps = {sweeps};
    cfg.gamma = 10.0;
    cfg.gamma_prime = 10.0;
    cfg.delta = 5.76;
    cfg.delta_prime = 5.76;
    cfg.lambdas = {1e-4};
    cfg.seed = 1;
    cfg.burn_in = 500;
    return cfg;
}

TrainConfig stairstep_config(int blocks, int sweeps) {
    TrainConfig cfg;
    cfg.W = 6;
    cfg.L_max = blocks;
    cfg.sweeps = {sweeps};
    cfg.gamma = 10.0;
    cfg.gamma_prime = 10.0;
    cfg.delta = 5.76;
    cfg.delta_prime = 5.76;
    cfg.lambdas = {1e-6};
    cfg.seed = 1;
    cfg.burn_in = 500;
    return cfg;
}

TrainConfig multidim_config(int blocks, int sweeps) {
    TrainConfig cfg;
    cfg.W = 4;
    cfg.L_max = blocks;
    cfg.sweeps = {sweeps};
    cfg.gamma = 20.0;
    cfg.gamma_prime = 20.0;
    cfg.delta = 5.76 / 3.0;
    cfg.delta_prime = 5.76;
    cfg.lambdas = {1e-4};
    cfg.seed = 1;
    cfg.burn_in = 250;
    return cfg;
}

TrainResult run_multiscale(int blocks, int sweeps) {
    const TargetFunction& target = find_target("multiscale");
    const Dataset data = generate_dataset(target, 2000, 11);
    const Dataset test = generate_dataset(target, 10000, 12);
    return train(data, test, multiscale_config(blocks, sweeps));
}

// ---- criteria ---------------------------------------------------------------

void criterion_c1() {
    const TrainResult result = run_multiscale(3, 2000);

    std::vector<double> samples =
        pooled_omega_samples(result.traces, 500, result.net.norm_stats, 0);
    std::erase_if(samples, [](double s) { return s < 0.0 || s > 200.0; });
    const std::vector<double> modes = top_frequency_modes(samples, 600, 3, 12.0);

    std::vector<double> sorted = modes;
    std::sort(sorted.begin(), sorted.end());
    std::string mode_text;
    for (double m : sorted) mode_text += fmt(m) + " ";
    const double truth[3] = {4.0, 70.0, 150.0};
    bool modes_ok = sorted.size() == 3;
    for (int i = 0; i < 3 && modes_ok; ++i)
        modes_ok = std::abs(sorted[static_cast<std::size_t>(i)] - truth[i]) <= 0.05 * truth[i];
    check(modes_ok, "criterion-1-modes",
          "top-3 de-normalized modes {" + mode_text + "} within 5% of {4 70 150}");

    const double mse3 = result.reports[2].test_mse;
    check(mse3 < 1e-2, "criterion-1-mse",
          "block-3 test MSE " + fmt(mse3) + " < 1e-2 on 10000 test points");
}

void criterion_c2a() {
    const TrainResult result = run_multiscale(10, 2000);
    const ConvergenceReport report = build_convergence_report(result.reports, 6);
    const double slope = fit_rate(report, 2, 10);
    check(slope <= -1.0, "criterion-2a-slope",
          "multiscale log-log slope over blocks 2-10 is " + fmt(slope) + " <= -1.0");
}

void criterion_c2b() {
    const TargetFunction& target = find_target("sine3d");
    const Dataset data = generate_dataset(target, 20 * 20 * 20, 21);
    const Dataset test = generate_dataset(target, 25 * 25 * 25, 22);
    const TrainResult result = train(data, test, multidim_config(10, 1000));
    const ConvergenceReport report = build_convergence_report(result.reports, 4);
    const double slope = fit_rate(report, 2, 10);
    check(slope <= -0.8, "criterion-2b-slope",
          "3-D sine-discontinuity log-log slope over blocks 2-10 is " + fmt(slope) +
              " <= -0.8");
}

void criterion_c3() {
    const TargetFunction& target = find_target("stairstep");
    const Dataset data = generate_dataset(target, 1000, 31);
    const Dataset test = generate_dataset(target, 10000, 32);

    TrainConfig cfg1 = stairstep_config(10, 2000);
    const TrainResult method1 = train(data, test, cfg1);

    TrainConfig cfg2 = cfg1;
    cfg2.method = Method::Method2;
    const TrainResult method2 = train(data, test, cfg2);

    const double m1 = method1.reports[9].test_mse;
    const double m2 = method2.reports[9].test_mse;
    check(m1 <= m2 / 3.0, "criterion-3-ablation",
          "method1 block-10 test MSE " + fmt(m1) + " <= (1/3) * method2 " + fmt(m2));

    const ConvergenceReport report = build_convergence_report(method1.reports, 6);
    const double reference = report.rows[9].theory_ref;
    check(m1 <= reference, "criterion-3-theory",
          "method1 block-10 test MSE " + fmt(m1) + " <= anchored reference " + fmt(reference) +
              " at WL=60");
}

void criterion_c4() {
    const TargetFunction& target = find_target("multiscale");
    const Dataset data = generate_dataset(target, 2000, 11);
    const Dataset test = generate_dataset(target, 10000, 12);

    const TrainResult blockwise = train(data, test, multiscale_config(3, 2000));
    const double block3 = blockwise.reports[2].test_mse;

    AdamConfig adam_cfg;
    adam_cfg.epochs = 5000;
    adam_cfg.learning_rate = 1e-3;
    adam_cfg.batch_size = 256;
    adam_cfg.lambda = 1e-4;
    adam_cfg.seed = 1;
    const AdamResult adam = adam_train(data, test, 6, 3, adam_cfg);
    const double adam_mse = adam.test_mse.back();

    check(adam_mse >= 10.0 * block3, "criterion-4-stagnation",
          "adam (W,L)=(6,3) 5000-epoch test MSE " + fmt(adam_mse) +
              " >= 10x block-by-block block-3 " + fmt(block3));
}

void criterion_c5() {
    SpectralGridSpec spec;
    spec.omega_max = 200.0;
    spec.d_omega = 0.1;
    spec.theta_samples = 131073;
    const SpectralGrid grid =
        numeric_fourier_transform([](double t) { return multiscale(t); }, -1.0, 1.0, spec);
    const Eigen::VectorXd density = optimal_density(grid);

    const double l1 = grid.l1_norm();
    const BoundValue at_opt = bound_functional(density, grid);
    const double rel = std::abs(at_opt.value - l1 * l1) / (l1 * l1);
    check(!at_opt.infinite && rel <= 1e-8, "criterion-5-closed-form",
          "bound(p*) " + fmt(at_opt.value) + " equals squared l1 norm " + fmt(l1 * l1) +
              " (rel err " + fmt(rel) + ")");

    Rng rng(51);
    bool minimal = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd p(grid.size());
        for (Eigen::Index k = 0; k < p.size(); ++k) p[k] = rng.uniform() + 1e-9;
        p /= p.sum() * grid.d_omega;
        const double value = bound_functional(p, grid).value;
        minimal = minimal && at_opt.value <= value;
        worst_margin = std::min(worst_margin, value - at_opt.value);
    }
    check(minimal, "criterion-5-minimality",
          "bound(p*) below all 100 random densities (worst margin " + fmt(worst_margin) + ")");

    Rng mc_rng(52);
    bool unbiased = true;
    std::string sigma_text;
    for (double probe : {-0.62, -0.25, 0.0, 0.3, 0.55}) {
        const McEstimate est = mc_estimator_check(grid, density, 8, 10000, probe, mc_rng);
        const double sigmas = std::abs(est.mean - multiscale(probe)) / est.std_error;
        sigma_text += fmt(sigmas) + " ";
        unbiased = unbiased && sigmas <= 3.0;
    }
    check(unbiased, "criterion-5-unbiased",
          "5 probe deviations in std errors: " + sigma_text + "(all <= 3)");
}

void criterion_c6() {
    // Rates, normal-equation residuals, and monotone train MSE measured on
    // desk-scale versions of the three presets under the 2.4^2/d defaults.
    struct Run {
        const char* name;
        TrainResult result;
    };
    std::vector<Run> runs;
    {
        const TargetFunction& target = find_target("multiscale");
        TrainConfig cfg = multiscale_config(4, 600);
        cfg.delta.reset();        // fall back to 2.4^2/d
        cfg.delta_prime.reset();
        runs.push_back({"multiscale",
                        train(generate_dataset(target, 2000, 11),
                              generate_dataset(target, 4000, 12), cfg)});
    }
    {
        const TargetFunction& target = find_target("stairstep");
        TrainConfig cfg = stairstep_config(4, 600);
        cfg.delta.reset();
        cfg.delta_prime.reset();
        runs.push_back({"stairstep",
                        train(generate_dataset(target, 1000, 31),
                              generate_dataset(target, 4000, 32), cfg)});
    }
    {
        const TargetFunction& target = find_target("sine3d");
        TrainConfig cfg = multidim_config(3, 300);
        cfg.delta.reset();
        cfg.delta_prime.reset();
        runs.push_back({"sine3d",
                        train(generate_dataset(target, 8000, 21),
                              generate_dataset(target, 4000, 22), cfg)});
    }

    double worst_residual = 0.0;
    bool monotone = true;
    bool rates_ok = true;
    std::string rate_text;
    for (const Run& run : runs) {
        for (std::size_t i = 0; i < run.result.reports.size(); ++i) {
            const BlockReport& r = run.result.reports[i];
            worst_residual = std::max(worst_residual, r.max_normal_eq_residual);
            if (i > 0)
                monotone = monotone &&
                           r.train_mse <= run.result.reports[i - 1].train_mse + 1e-12;
            const bool omega_ok =
                r.acceptance_rate_omega >= 0.1 && r.acceptance_rate_omega <= 0.6;
            bool prime_ok = true;
            if (!std::isnan(r.acceptance_rate_omega_prime))
                prime_ok = r.acceptance_rate_omega_prime >= 0.1 &&
                           r.acceptance_rate_omega_prime <= 0.6;
            if (!omega_ok || !prime_ok)
                rate_text += std::string(run.name) + "/b" + std::to_string(r.block) + "=" +
                             fmt(r.acceptance_rate_omega) + "," +
                             fmt(r.acceptance_rate_omega_prime) + " ";
            rates_ok = rates_ok && omega_ok && prime_ok;
        }
    }
    check(worst_residual <= 1e-8, "criterion-6-normal-equations",
          "max relative normal-equation residual over all solves " + fmt(worst_residual));
    check(monotone, "criterion-6-monotone", "per-block train MSE non-increasing on all runs");
    check(rates_ok, "criterion-6-acceptance-rates",
          rates_ok ? "all per-block rates within [0.1, 0.6] under 2.4^2/d defaults"
                   : "out of range: " + rate_text);

    // exact recovery of a realizable cosine target (improvement-indicator
    // acceptance; depth mops up the finite-sample detuning of each block)
    {
        const TargetFunction cos5{"cos5_acc", 1, {{-1.0, 1.0}},
                                  [](const double* t) { return std::cos(5.0 * t[0]); }};
        const Dataset data = generate_dataset(cos5, 500, 11);
        TrainConfig cfg;
        cfg.W = 1;
        cfg.L_max = 10;
        cfg.sweeps = {3000};
        cfg.gamma = 1e6;
        cfg.delta = 0.5;
        cfg.lambdas = {0.0};
        cfg.seed = 7;
        cfg.stop_tolerance = 5e-7;
        const TrainResult result = train(data, data, cfg);
        check(result.reports.back().train_mse < 1e-6, "criterion-6-exact-recovery",
              "realizable cosine target train MSE " + fmt(result.reports.back().train_mse) +
                  " < 1e-6 with lambda = 0");
    }

    // finite-difference agreement of the baseline gradient
    {
        Rng rng(71);
        double worst = 0.0;
        for (const auto& [d, depth] :
             std::vector<std::pair<int, int>>{{1, 1}, {1, 3}, {3, 1}, {3, 3}}) {
            Network net;
            net.input_dim = d;
            net.width = 2;
            net.norm_stats.mean = Eigen::VectorXd::Zero(d);
            net.norm_stats.std = Eigen::VectorXd::Ones(d);
            for (int l = 0; l < depth; ++l) {
                BlockParams block;
                block.freqs.resize(2, d);
                block.re_b.resize(2);
                block.im_b.resize(2);
                for (Eigen::Index i = 0; i < block.freqs.size(); ++i)
                    block.freqs.data()[i] = rng.normal();
                for (int j = 0; j < 2; ++j) {
                    block.re_b[j] = 0.6 * rng.normal();
                    block.im_b[j] = 0.6 * rng.normal();
                }
                if (l > 0) {
                    block.freqs_prime.resize(2);
                    block.re_b_prime.resize(2);
                    block.im_b_prime.resize(2);
                    for (int j = 0; j < 2; ++j) {
                        block.freqs_prime[j] = rng.normal();
                        block.re_b_prime[j] = 0.6 * rng.normal();
                        block.im_b_prime[j] = 0.6 * rng.normal();
                    }
                }
                net.blocks.push_back(std::move(block));
            }
            Eigen::MatrixXd inputs(16, d);
            Eigen::VectorXd targets(16);
            for (Eigen::Index i = 0; i < inputs.size(); ++i)
                inputs.data()[i] = rng.uniform(-1.0, 1.0);
            for (Eigen::Index i = 0; i < 16; ++i) targets[i] = rng.normal();

            const auto [loss, grad] = loss_and_gradient(net, inputs, targets, 1e-3);
            (void)loss;
            const Eigen::VectorXd base = flatten_parameters(net);
            Network probe = net;
            Eigen::VectorXd fd(base.size());
            for (Eigen::Index i = 0; i < base.size(); ++i) {
                Eigen::VectorXd plus = base, minus = base;
                plus[i] += 1e-5;
                minus[i] -= 1e-5;
                set_parameters(probe, plus);
                const double fp = loss_and_gradient(probe, inputs, targets, 1e-3).first;
                set_parameters(probe, minus);
                const double fm = loss_and_gradient(probe, inputs, targets, 1e-3).first;
                fd[i] = (fp - fm) / 2e-5;
            }
            const double scale = std::max(1.0, fd.cwiseAbs().maxCoeff());
            worst = std::max(worst, (grad - fd).cwiseAbs().maxCoeff() / scale);
        }
        check(worst <= 1e-4, "criterion-6-gradients",
              "baseline analytic vs central-difference gradients, worst relative " + fmt(worst));
    }

    // bitwise determinism of a full run
    {
        const TargetFunction& target = find_target("multiscale");
        const Dataset data = generate_dataset(target, 400, 81);
        const Dataset test = generate_dataset(target, 200, 82);
        TrainConfig cfg = multiscale_config(3, 200);
        cfg.W = 3;
        cfg.burn_in = 50;
        const TrainResult a = train(data, test, cfg);
        const TrainResult b = train(data, test, cfg);
        bool identical = network_to_string(a.net) == network_to_string(b.net);
        for (std::size_t i = 0; i < a.reports.size() && identical; ++i)
            identical = a.reports[i].train_mse == b.reports[i].train_mse &&
                        a.reports[i].test_mse == b.reports[i].test_mse &&
                        a.reports[i].acceptance_rate_omega == b.reports[i].acceptance_rate_omega;
        check(identical, "criterion-6-determinism",
              "identical (dataset, config, seed) reruns are bitwise identical");
    }
}

} // namespace

int main(int argc, char** argv) {
    const std::string which = argc > 1 ? argv[1] : "all";
    try {
        if (which == "c1" || which == "all") criterion_c1();
        if (which == "c2a" || which == "all") criterion_c2a();
        if (which == "c2b" || which == "all") criterion_c2b();
        if (which == "c3" || which == "all") criterion_c3();
        if (which == "c4" || which == "all") criterion_c4();
        if (which == "c5" || which == "all") criterion_c5();
        if (which == "c6" || which == "all") criterion_c6();
    } catch (const std::exception& e) {
        std::printf("FAIL %s: unexpected exception: %s\n", which.c_str(), e.what());
        return 1;
    }
    if (g_failures > 0) {
        std::printf("%d check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all checks passed\n");
    return 0;
}
