#include "rfnn/trainer.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "rfnn/kernels.hpp"

namespace rfnn {

namespace {

constexpr double kDefaultProposalScale = 2.4 * 2.4; // optimal random-walk variance is 2.4^2/d

double mean_sq(const Eigen::VectorXd& v) {
    return v.squaredNorm() / static_cast<double>(v.size());
}

double test_mse_of(const Network& net, const Dataset& test) {
    if (test.size() == 0) return std::numeric_limits<double>::quiet_NaN();
    const Eigen::VectorXd pred = forward(net, test.inputs);
    return kernels::sum_sq_diff(pred.data(), test.targets.data(),
                                static_cast<std::size_t>(pred.size())) /
           static_cast<double>(pred.size());
}

struct BlockContext {
    const Eigen::MatrixXd& theta_norm;
    const Eigen::VectorXd& residual;
    const Eigen::VectorXd& z_prev; // empty for block 1
};

ProposalConfig proposal_config(const TrainConfig& cfg, int input_dim) {
    ProposalConfig p;
    p.delta = cfg.delta.value_or(kDefaultProposalScale / input_dim);
    p.delta_prime = cfg.delta_prime.value_or(kDefaultProposalScale);
    p.gamma = cfg.gamma;
    p.gamma_prime = cfg.gamma_prime;
    p.sign_rule = cfg.sign_rule.value_or(default_sign_rule(input_dim));
    return p;
}

BlockParams params_from_state(const ChainState& state) {
    BlockParams params;
    params.freqs = state.freqs;
    params.re_b = state.amps.re_b;
    params.im_b = state.amps.im_b;
    if (state.has_prime()) {
        params.freqs_prime = state.freqs_prime;
        params.re_b_prime = state.amps.re_b_prime;
        params.im_b_prime = state.amps.im_b_prime;
    }
    return params;
}

BlockTrainResult run_block(const BlockContext& ctx, const TrainConfig& cfg, int block) {
    const auto start = std::chrono::steady_clock::now();
    const int d = static_cast<int>(ctx.theta_norm.cols());
    const ProposalConfig prop = proposal_config(cfg, d);
    const double lambda = cfg.lambda_for_block(block);
    const int sweeps = cfg.sweeps_for_block(block);
    Rng rng = Rng(cfg.seed).child(static_cast<std::uint64_t>(block));

    BlockTrainResult result;
    result.trace.block = block;

    if (block == 1) {
        ChainState state =
            init_block1_state(ctx.theta_norm, ctx.residual, cfg.W, lambda, rng);
        for (int i = 0; i < sweeps; ++i)
            metropolis_sweep_block1(state, ctx.theta_norm, prop, lambda, result.trace);
        result.params = params_from_state(state);
        result.report.max_normal_eq_residual = state.max_normal_eq_residual;
        result.report.acceptance_rate_omega_prime = std::numeric_limits<double>::quiet_NaN();
    } else {
        ChainState state = init_block_ell_state(ctx.theta_norm, ctx.residual, ctx.z_prev,
                                                cfg.W, lambda, rng);
        const bool update_prime = cfg.method == Method::Method1;
        for (int i = 0; i < sweeps; ++i)
            gibbs_sweep_block_ell(state, ctx.theta_norm, prop, lambda, result.trace,
                                  update_prime);
        result.params = params_from_state(state);
        result.report.max_normal_eq_residual = state.max_normal_eq_residual;
        result.report.acceptance_rate_omega_prime =
            update_prime ? result.trace.acceptance_rate_omega_prime()
                         : std::numeric_limits<double>::quiet_NaN();
    }
    result.report.block = block;
    result.report.acceptance_rate_omega = result.trace.acceptance_rate_omega();
    result.report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace

int TrainConfig::sweeps_for_block(int block) const {
    if (sweeps.size() == 1) return sweeps[0];
    return sweeps.at(static_cast<std::size_t>(block - 1));
}

double TrainConfig::lambda_for_block(int block) const {
    if (lambdas.size() == 1) return lambdas[0];
    return lambdas.at(static_cast<std::size_t>(block - 1));
}

void TrainConfig::validate() const {
    if (W < 1) throw ConfigError("W must be >= 1");
    if (L_max < 1) throw ConfigError("L must be >= 1");
    if (sweeps.empty() || (sweeps.size() != 1 && sweeps.size() != static_cast<std::size_t>(L_max)))
        throw ConfigError("M must have one entry or one per block");
    for (int m : sweeps)
        if (m < 1) throw ConfigError("M must be >= 1");
    if (gamma <= 0.0) throw ConfigError("gamma must be > 0");
    if (gamma_prime <= 0.0) throw ConfigError("gamma_prime must be > 0");
    if (delta && *delta <= 0.0) throw ConfigError("delta must be > 0");
    if (delta_prime && *delta_prime <= 0.0) throw ConfigError("delta_prime must be > 0");
    if (lambdas.empty() ||
        (lambdas.size() != 1 && lambdas.size() != static_cast<std::size_t>(L_max)))
        throw ConfigError("lambda must have one entry or one per block");
    for (double l : lambdas)
        if (l < 0.0 || !std::isfinite(l)) throw ConfigError("lambda must be >= 0");
    if (burn_in < 0) throw ConfigError("burn_in must be >= 0");
    for (int block = 1; block <= L_max; ++block)
        if (burn_in >= sweeps_for_block(block))
            throw ConfigError("burn_in must be < M for every block");
    if (stop_tolerance && *stop_tolerance < 0.0)
        throw ConfigError("stop_tolerance must be >= 0");
}

std::pair<Dataset, NormStats> standardize(const Dataset& data) {
    const Eigen::Index n = data.size();
    if (n < 2) throw ConfigError("standardize requires at least 2 samples");
    NormStats stats;
    stats.mean = data.inputs.colwise().mean();
    stats.std.resize(data.dim());
    for (Eigen::Index k = 0; k < data.dim(); ++k) {
        const double var =
            (data.inputs.col(k).array() - stats.mean[k]).square().sum() / static_cast<double>(n);
        stats.std[k] = std::sqrt(var);
        if (!(stats.std[k] > 0.0))
            throw ConfigError("input dimension " + std::to_string(k + 1) +
                              " is constant; cannot standardize");
    }
    Dataset out;
    out.inputs = normalize_inputs(stats, data.inputs);
    out.targets = data.targets;
    return {std::move(out), std::move(stats)};
}

BlockTrainResult train_block1(const Dataset& data, const Dataset& test, const TrainConfig& cfg) {
    cfg.validate();
    auto [normalized, stats] = standardize(data);
    const BlockContext ctx{normalized.inputs, data.targets, Eigen::VectorXd()};
    BlockTrainResult result = run_block(ctx, cfg, 1);

    Network net{static_cast<int>(data.dim()), cfg.W, stats, {result.params}};
    const Eigen::VectorXd z = block_g(normalized.inputs, result.params);
    result.report.train_mse = mean_sq(Eigen::VectorXd(data.targets - z));
    result.report.test_mse = test_mse_of(net, test);
    return result;
}

BlockTrainResult train_block_ell(const Dataset& data, const Dataset& test, Network& net,
                                 const TrainConfig& cfg, int ell) {
    cfg.validate();
    if (ell < 2) throw ConfigError("train_block_ell requires ell >= 2");
    if (net.depth() != ell - 1)
        throw ConfigError("network depth " + std::to_string(net.depth()) +
                          " does not match block index " + std::to_string(ell));
    const Eigen::MatrixXd theta_norm = normalize_inputs(net.norm_stats, data.inputs);
    const Eigen::VectorXd z_prev = forward(net, data.inputs);
    const Eigen::VectorXd residual = data.targets - z_prev;
    const BlockContext ctx{theta_norm, residual, z_prev};
    BlockTrainResult result = run_block(ctx, cfg, ell);

    net.blocks.push_back(result.params);
    const Eigen::VectorXd z =
        z_prev + block_g(theta_norm, result.params) + block_g_prime(z_prev, result.params);
    result.report.train_mse = mean_sq(Eigen::VectorXd(data.targets - z));
    result.report.test_mse = test_mse_of(net, test);
    return result;
}

TrainResult train(const Dataset& data, const Dataset& test, const TrainConfig& cfg) {
    cfg.validate();
    TrainResult result;
    try {
        auto [normalized, stats] = standardize(data);
        result.net.input_dim = static_cast<int>(data.dim());
        result.net.width = cfg.W;
        result.net.norm_stats = stats;

        Eigen::VectorXd z = Eigen::VectorXd::Zero(data.size());
        for (int block = 1; block <= cfg.L_max; ++block) {
            const Eigen::VectorXd residual = data.targets - z;
            const BlockContext ctx{normalized.inputs, residual, z};
            BlockTrainResult block_result = run_block(ctx, cfg, block);

            result.net.blocks.push_back(block_result.params);
            if (block == 1) {
                z = block_g(normalized.inputs, block_result.params);
            } else {
                z += block_g(normalized.inputs, block_result.params) +
                     block_g_prime(z, block_result.params);
            }
            block_result.report.train_mse = mean_sq(Eigen::VectorXd(data.targets - z));
            block_result.report.test_mse = test_mse_of(result.net, test);
            result.reports.push_back(block_result.report);
            result.traces.push_back(std::move(block_result.trace));

            if (cfg.stop_tolerance && block_result.report.train_mse <= *cfg.stop_tolerance)
                break;
        }
    } catch (const Error& e) {
        throw TrainError(std::string("training aborted at block ") +
                             std::to_string(result.net.depth() + 1) + ": " + e.what(),
                         std::move(result));
    }
    return result;
}

} // namespace rfnn
