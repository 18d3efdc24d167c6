// Command-line driver: train | compare | oracle with seeded reproducibility.
// Exit codes: 0 success, 1 run failure, 2 config error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "rfnn/analysis.hpp"
#include "rfnn/baseline.hpp"
#include "rfnn/config.hpp"
#include "rfnn/csv.hpp"
#include "rfnn/oracle.hpp"
#include "rfnn/version.hpp"

namespace fs = std::filesystem;
using namespace rfnn;

namespace {

std::vector<std::string> artifact_header(const ExperimentConfig& cfg) {
    std::vector<std::string> lines;
    lines.push_back(std::string(kVersion));
    for (const auto& l : describe_experiment(cfg)) lines.push_back("config: " + l);
    return lines;
}

void print_block_summary(const ConvergenceReport& report) {
    for (const auto& row : report.rows)
        std::printf("block %2d  WL %5.0f  train_mse %.6e  test_mse %.6e  theory %.6e  "
                    "acc_w %.3f  acc_w' %.3f  %.2fs\n",
                    row.block, row.wl, row.train_mse, row.test_mse, row.theory_ref,
                    row.acceptance_rate_omega, row.acceptance_rate_omega_prime, row.seconds);
}

struct RunArtifacts {
    TrainResult result;
    ConvergenceReport report;
};

RunArtifacts run_training(const ExperimentConfig& cfg, const Dataset& data, const Dataset& test) {
    RunArtifacts run;
    run.result = train(data, test, cfg.train);
    run.report = build_convergence_report(run.result.reports, cfg.train.W);
    return run;
}

void write_run_artifacts(const ExperimentConfig& cfg, const RunArtifacts& run,
                         const Dataset& test, const fs::path& dir) {
    fs::create_directories(dir);
    const std::vector<std::string> header = artifact_header(cfg);
    save_network(run.result.net, (dir / "network.txt").string());
    write_convergence_csv((dir / "report.csv").string(), run.report, header);
    write_trace_csv((dir / "trace.csv").string(), run.result.traces, header, cfg.trace_stride);
    const FrequencyHistograms hists = frequency_histogram(
        run.result.traces, cfg.train.burn_in, run.result.net.norm_stats, cfg.histogram_bins);
    write_histogram_csv((dir / "histogram.csv").string(), hists, run.result.net.norm_stats,
                        header);
    if (test.size() > 0)
        write_predictions_csv((dir / "predictions.csv").string(), run.result.net, test, header);
}

int cmd_train(ExperimentConfig cfg, int jobs) {
    const TargetFunction& target = find_target(cfg.target_name);
    const Dataset data = generate_dataset(target, cfg.n, cfg.data_seed);
    const Dataset test = cfg.n_test > 0
                             ? generate_dataset(target, cfg.n_test, derive_seed(cfg.data_seed, 1))
                             : Dataset{};

    if (jobs <= 1) {
        const RunArtifacts run = run_training(cfg, data, test);
        write_run_artifacts(cfg, run, test, cfg.out_dir);
        print_block_summary(run.report);
        std::printf("artifacts written to %s\n", cfg.out_dir.c_str());
        return 0;
    }

    // Independent seeds of the same config; merged output ordered by run index.
    std::vector<RunArtifacts> runs(static_cast<std::size_t>(jobs));
    std::vector<ExperimentConfig> configs(static_cast<std::size_t>(jobs), cfg);
    std::vector<std::thread> workers;
    for (int i = 0; i < jobs; ++i) {
        configs[static_cast<std::size_t>(i)].train.seed =
            derive_seed(cfg.train.seed, static_cast<std::uint64_t>(i));
        workers.emplace_back([&, i] {
            runs[static_cast<std::size_t>(i)] =
                run_training(configs[static_cast<std::size_t>(i)], data, test);
        });
    }
    for (auto& w : workers) w.join();

    fs::create_directories(cfg.out_dir);
    CsvWriter merged((fs::path(cfg.out_dir) / "summary.csv").string());
    for (const auto& l : artifact_header(cfg)) merged.comment(l);
    merged.header({"run", "seed", "block", "WL", "train_mse", "test_mse", "theory_ref",
                   "acceptance_rate_omega", "acceptance_rate_omega_prime", "seconds"});
    for (int i = 0; i < jobs; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "run%02d", i);
        const fs::path dir = fs::path(cfg.out_dir) / name;
        write_run_artifacts(configs[static_cast<std::size_t>(i)],
                            runs[static_cast<std::size_t>(i)], test, dir);
        for (const auto& row : runs[static_cast<std::size_t>(i)].report.rows)
            merged.raw_row({std::to_string(i),
                            std::to_string(configs[static_cast<std::size_t>(i)].train.seed),
                            std::to_string(row.block), format_double(row.wl),
                            format_double(row.train_mse), format_double(row.test_mse),
                            format_double(row.theory_ref),
                            format_double(row.acceptance_rate_omega),
                            format_double(row.acceptance_rate_omega_prime),
                            format_double(row.seconds)});
        std::printf("run %d (seed %llu) done\n", i,
                    static_cast<unsigned long long>(
                        configs[static_cast<std::size_t>(i)].train.seed));
    }
    std::printf("artifacts written to %s\n", cfg.out_dir.c_str());
    return 0;
}

int cmd_compare(ExperimentConfig cfg) {
    if (cfg.compare_methods.size() < 2)
        throw ConfigError("compare requires at least two entries in compare.methods");
    const TargetFunction& target = find_target(cfg.target_name);
    const Dataset data = generate_dataset(target, cfg.n, cfg.data_seed);
    const Dataset test = cfg.n_test > 0
                             ? generate_dataset(target, cfg.n_test, derive_seed(cfg.data_seed, 1))
                             : Dataset{};
    const std::vector<std::string> header = artifact_header(cfg);
    fs::create_directories(cfg.out_dir);

    std::map<std::string, ConvergenceReport> block_reports;
    double adam_final_test = std::numeric_limits<double>::quiet_NaN();
    for (const auto& method : cfg.compare_methods) {
        if (method == "adam") {
            if (!cfg.adam) throw ConfigError("compare.methods includes adam but no [adam] section");
            const AdamResult adam = adam_train(data, test, cfg.train.W, cfg.adam_L, *cfg.adam);
            write_loss_curve_csv((fs::path(cfg.out_dir) / "adam_loss_curve.csv").string(), adam,
                                 header);
            save_network(adam.net, (fs::path(cfg.out_dir) / "adam_network.txt").string());
            adam_final_test = adam.test_mse.back();
            std::printf("adam: final train_loss %.6e  test_mse %.6e\n", adam.train_loss.back(),
                        adam.test_mse.back());
            continue;
        }
        ExperimentConfig run_cfg = cfg;
        run_cfg.train.method = method == "method2" ? Method::Method2 : Method::Method1;
        const RunArtifacts run = run_training(run_cfg, data, test);
        write_run_artifacts(run_cfg, run, test, fs::path(cfg.out_dir) / method);
        block_reports[method] = run.report;
        std::printf("%s:\n", method.c_str());
        print_block_summary(run.report);
    }

    // Joined per-block comparison; the gradient baseline contributes its
    // final test error on the last row.
    CsvWriter joined((fs::path(cfg.out_dir) / "comparison.csv").string());
    for (const auto& l : header) joined.comment(l);
    std::vector<std::string> columns = {"block", "WL"};
    for (const auto& [method, _] : block_reports) {
        columns.push_back(method + "_train_mse");
        columns.push_back(method + "_test_mse");
    }
    const bool with_adam = !std::isnan(adam_final_test);
    if (with_adam) columns.push_back("adam_test_mse");
    joined.header(columns);
    std::size_t max_rows = 0;
    for (const auto& [_, report] : block_reports)
        max_rows = std::max(max_rows, report.rows.size());
    for (std::size_t i = 0; i < max_rows; ++i) {
        std::vector<std::string> cells = {std::to_string(i + 1),
                                          std::to_string((i + 1) * cfg.train.W)};
        for (const auto& [_, report] : block_reports) {
            if (i < report.rows.size()) {
                cells.push_back(format_double(report.rows[i].train_mse));
                cells.push_back(format_double(report.rows[i].test_mse));
            } else {
                cells.push_back("");
                cells.push_back("");
            }
        }
        if (with_adam)
            cells.push_back(i + 1 == max_rows ? format_double(adam_final_test) : "");
        joined.raw_row(cells);
    }
    std::printf("artifacts written to %s\n", cfg.out_dir.c_str());
    return 0;
}

struct OracleOptions {
    std::string target_name;
    double omega_max = 200.0;
    double d_omega = 0.1;
    int theta_samples = 131073;
    std::uint64_t seed = 1;
    std::string out_dir = "out/oracle";
};

int cmd_oracle(const OracleOptions& opt) {
    const TargetFunction& target = find_target(opt.target_name);
    if (target.input_dim != 1) throw ConfigError("oracle requires a 1-D target");
    const auto [lo, hi] = target.domain[0];

    SpectralGridSpec spec;
    spec.omega_max = opt.omega_max;
    spec.d_omega = opt.d_omega;
    spec.theta_samples = opt.theta_samples;

    fs::create_directories(opt.out_dir);
    std::ofstream report(fs::path(opt.out_dir) / "oracle_report.txt");
    if (!report) throw Error("cannot open oracle_report.txt");
    report << "# " << kVersion << "\n# target " << opt.target_name << "\n";

    int failures = 0;
    auto check = [&](bool ok, const std::string& name, const std::string& detail) {
        report << (ok ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
        std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
        if (!ok) ++failures;
    };

    const SpectralGrid grid =
        numeric_fourier_transform([&](double t) { return target(t); }, lo, hi, spec);
    write_spectrum_csv((fs::path(opt.out_dir) / "spectrum.csv").string(), grid);

    const Eigen::VectorXd density = optimal_density(grid);
    {
        CsvWriter dens((fs::path(opt.out_dir) / "density.csv").string());
        dens.header({"omega", "p_star"});
        for (Eigen::Index k = 0; k < grid.size(); ++k) dens.row({grid.omegas[k], density[k]});
    }

    const double mass = density.sum() * grid.d_omega;
    check(std::abs(mass - 1.0) <= 1e-12, "density_normalized",
          "sum p dw = " + format_double(mass));

    const double l1 = grid.l1_norm();
    const BoundValue at_opt = bound_functional(density, grid);
    check(!at_opt.infinite && std::abs(at_opt.value - l1 * l1) <= 1e-8 * l1 * l1,
          "bound_at_optimum",
          "value " + format_double(at_opt.value) + " vs l1^2 " + format_double(l1 * l1));

    Rng rng(opt.seed);
    bool minimal = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd random_density(grid.size());
        for (Eigen::Index k = 0; k < grid.size(); ++k)
            random_density[k] = rng.uniform() + 1e-9;
        random_density /= random_density.sum() * grid.d_omega;
        const BoundValue value = bound_functional(random_density, grid);
        minimal = minimal && (at_opt.value <= value.value);
        worst_margin = std::min(worst_margin, value.value - at_opt.value);
    }
    check(minimal, "bound_minimality",
          "worst margin over 100 random densities " + format_double(worst_margin));

    // Unbiasedness at interior probes; estimator variance shrinks under p*.
    const double probes[5] = {0.6 * lo, 0.25 * lo, 0.5 * (lo + hi), 0.3 * hi, 0.62 * hi};
    bool unbiased = true;
    std::string detail;
    Rng mc_rng = rng.child(7);
    for (double probe : probes) {
        const McEstimate est = mc_estimator_check(grid, density, 8, 10000, probe, mc_rng);
        const double truth = target(probe);
        const double sigmas = std::abs(est.mean - truth) / est.std_error;
        unbiased = unbiased && sigmas <= 3.0;
        detail += format_double(sigmas) + " ";
    }
    check(unbiased, "mc_unbiased", "|mean - f| in std errors: " + detail);

    Eigen::VectorXd uniform_density =
        Eigen::VectorXd::Constant(grid.size(), 1.0 / (grid.size() * grid.d_omega));
    Rng var_rng = rng.child(8);
    const McEstimate var_opt = mc_estimator_check(grid, density, 8, 4000, 0.5 * (lo + hi), var_rng);
    const McEstimate var_uni =
        mc_estimator_check(grid, uniform_density, 8, 4000, 0.5 * (lo + hi), var_rng);
    check(var_opt.sample_variance <= var_uni.sample_variance, "variance_reduction",
          "var(p*) " + format_double(var_opt.sample_variance) + " vs var(uniform) " +
              format_double(var_uni.sample_variance));

    // Report dominant spectrum peaks on the non-negative axis.
    std::vector<double> mags;
    std::vector<double> samples;
    for (Eigen::Index k = 0; k < grid.size(); ++k)
        if (grid.omegas[k] >= 0.0)
            for (int c = 0; c < static_cast<int>(1e4 * std::abs(grid.coeffs[k]) / l1); ++c)
                samples.push_back(grid.omegas[k]);
    if (!samples.empty()) {
        const std::vector<double> peaks = top_frequency_modes(samples, 512, 3, 5.0);
        std::string peak_text;
        for (double p : peaks) peak_text += format_double(p) + " ";
        report << "INFO spectrum_peaks: " << peak_text << '\n';
        std::printf("INFO spectrum_peaks: %s\n", peak_text.c_str());
    }

    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Block-by-block sampling-based training of random Fourier networks"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed_flag;
    std::optional<std::string> out_flag;
    int jobs = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("config", config_path, "experiment config file")->required();
        cmd->add_option("--override", overrides, "config override key=value (repeatable)");
        cmd->add_option("--seed", seed_flag, "override the training seed");
        cmd->add_option("--jobs", jobs, "independent seeded runs in parallel");
        cmd->add_option("--out", out_flag, "override the output directory");
    };

    CLI::App* train_cmd = app.add_subcommand("train", "block-by-block training run");
    add_common(train_cmd);
    CLI::App* compare_cmd = app.add_subcommand("compare", "run several methods on one dataset");
    add_common(compare_cmd);

    OracleOptions oracle_opt;
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "spectral oracle suite for a 1-D target");
    oracle_cmd->add_option("target", oracle_opt.target_name, "registered target name")->required();
    oracle_cmd->add_option("--omega-max", oracle_opt.omega_max, "frequency grid half-range");
    oracle_cmd->add_option("--d-omega", oracle_opt.d_omega, "frequency grid step");
    oracle_cmd->add_option("--theta-samples", oracle_opt.theta_samples, "trapezoid points");
    oracle_cmd->add_option("--seed", oracle_opt.seed, "oracle sampling seed");
    oracle_cmd->add_option("--out", oracle_opt.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (oracle_cmd->parsed()) return cmd_oracle(oracle_opt);

        ParsedConfig parsed = parse_config_file(config_path);
        for (const auto& o : overrides) parsed.apply_override(o);
        ExperimentConfig cfg = resolve_experiment(parsed);
        if (seed_flag) cfg.train.seed = *seed_flag;
        if (out_flag) cfg.out_dir = *out_flag;
        if (jobs < 1) throw ConfigError("--jobs must be >= 1");

        if (train_cmd->parsed()) return cmd_train(std::move(cfg), jobs);
        if (compare_cmd->parsed()) return cmd_compare(std::move(cfg));
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "error: config: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: run: %s\n", e.what());
        return 1;
    }
}
