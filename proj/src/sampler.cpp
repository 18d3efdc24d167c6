#include "rfnn/sampler.hpp"

#include <cmath>

#include "rfnn/csv.hpp"

namespace rfnn {

SignRule default_sign_rule(int input_dim) {
    return input_dim == 1 ? SignRule::RejectNegative1d : SignRule::None;
}

bool sign_rule_allows(SignRule rule, const double* freq, int dim) {
    switch (rule) {
    case SignRule::None:
        return true;
    case SignRule::HalfSpaceFirstComponent:
        return freq[0] >= 0.0;
    case SignRule::RejectNegative1d:
        for (int k = 0; k < dim; ++k)
            if (freq[k] < 0.0) return false;
        return true;
    }
    return true;
}

Eigen::VectorXd propose_gaussian(const Eigen::VectorXd& current, double variance, Rng& rng) {
    if (variance <= 0.0) throw ConfigError("proposal variance must be > 0");
    const double step = std::sqrt(variance);
    Eigen::VectorXd out(current.size());
    for (Eigen::Index i = 0; i < current.size(); ++i) out[i] = current[i] + step * rng.normal();
    return out;
}

Eigen::MatrixXd propose_gaussian(const Eigen::MatrixXd& current, double variance, Rng& rng) {
    if (variance <= 0.0) throw ConfigError("proposal variance must be > 0");
    const double step = std::sqrt(variance);
    Eigen::MatrixXd out(current.rows(), current.cols());
    for (Eigen::Index j = 0; j < current.rows(); ++j)
        for (Eigen::Index k = 0; k < current.cols(); ++k)
            out(j, k) = current(j, k) + step * rng.normal();
    return out;
}

double acceptance_probability(double b_new_magnitude, double b_old_magnitude, double gamma) {
    if (b_old_magnitude <= 0.0) return 1.0;
    if (b_new_magnitude <= 0.0) return 0.0;
    const double ratio = b_new_magnitude / b_old_magnitude;
    if (ratio >= 1.0) return 1.0;
    return std::pow(ratio, gamma);
}

namespace {

Eigen::MatrixXd draw_standard_normal(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index j = 0; j < rows; ++j)
        for (Eigen::Index k = 0; k < cols; ++k) out(j, k) = rng.normal();
    return out;
}

void record_solution(ChainState& state, const AmplitudeSolution& solution) {
    state.amps = solution;
    if (solution.normal_eq_residual > state.max_normal_eq_residual)
        state.max_normal_eq_residual = solution.normal_eq_residual;
}

void append_trace_row(ChainTrace& trace, const ChainState& state,
                      const std::vector<std::uint8_t>& acc_omega,
                      const std::vector<std::uint8_t>& acc_prime) {
    const int w = state.width();
    const int d = static_cast<int>(state.freqs.cols());
    for (int j = 0; j < w; ++j)
        for (int k = 0; k < d; ++k) trace.freqs.push_back(state.freqs(j, k));
    for (int j = 0; j < w; ++j) trace.magnitudes.push_back(state.amps.magnitude(j));
    trace.accepted.insert(trace.accepted.end(), acc_omega.begin(), acc_omega.end());
    if (trace.has_prime) {
        for (int j = 0; j < w; ++j) trace.freqs_prime.push_back(state.freqs_prime[j]);
        for (int j = 0; j < w; ++j)
            trace.magnitudes_prime.push_back(state.amps.magnitude_prime(j));
        trace.accepted_prime.insert(trace.accepted_prime.end(), acc_prime.begin(),
                                    acc_prime.end());
    }
    ++trace.iterations;
}

} // namespace

ChainState init_block1_state(const Eigen::MatrixXd& theta_norm, const Eigen::VectorXd& residual,
                             int width, double lambda, Rng rng) {
    ChainState state{.freqs = {},
                     .freqs_prime = {},
                     .amps = {},
                     .residual = residual,
                     .z_prev = {},
                     .rng = rng};
    state.freqs = draw_standard_normal(width, theta_norm.cols(), state.rng);
    state.current = assemble_design_matrix(theta_norm, state.freqs);
    state.proposal = state.current;
    record_solution(state, state.solver.solve(state.current, residual, lambda, theta_norm.rows()));
    return state;
}

ChainState init_block_ell_state(const Eigen::MatrixXd& theta_norm, const Eigen::VectorXd& residual,
                                const Eigen::VectorXd& z_prev, int width, double lambda, Rng rng) {
    ChainState state{.freqs = {},
                     .freqs_prime = {},
                     .amps = {},
                     .residual = residual,
                     .z_prev = z_prev,
                     .rng = rng};
    state.freqs = draw_standard_normal(width, theta_norm.cols(), state.rng);
    state.freqs_prime = draw_standard_normal(width, 1, state.rng);
    state.current = assemble_design_matrix(theta_norm, z_prev, state.freqs, state.freqs_prime);
    state.proposal = state.current;
    record_solution(state, state.solver.solve(state.current, residual, lambda, theta_norm.rows()));
    return state;
}

void metropolis_sweep_block1(ChainState& state, const Eigen::MatrixXd& theta_norm,
                             const ProposalConfig& cfg, double lambda, ChainTrace& trace) {
    if (state.has_prime()) throw DimensionError("block-1 sweep applied to a primed state");
    const int w = state.width();
    const int d = static_cast<int>(state.freqs.cols());
    const Eigen::Index n = theta_norm.rows();

    if (trace.iterations == 0) {
        trace.width = w;
        trace.dim = d;
        trace.has_prime = false;
        trace.block = 1;
    }

    state.proposed_freqs = propose_gaussian(state.freqs, cfg.delta, state.rng);
    fill_omega_columns(state.proposal, theta_norm, state.proposed_freqs);
    const AmplitudeSolution proposed = state.solver.solve(state.proposal, state.residual,
                                                          lambda, n);
    if (proposed.normal_eq_residual > state.max_normal_eq_residual)
        state.max_normal_eq_residual = proposed.normal_eq_residual;

    std::vector<std::uint8_t> accepted(w, 0);
    bool any = false;
    for (int j = 0; j < w; ++j) {
        double p = acceptance_probability(proposed.magnitude(j), state.amps.magnitude(j),
                                          cfg.gamma);
        const Eigen::RowVectorXd row = state.proposed_freqs.row(j);
        if (!sign_rule_allows(cfg.sign_rule, row.data(), d)) p = 0.0;
        const double u = state.rng.uniform();
        ++trace.proposals_omega;
        if (u < p) {
            accepted[j] = 1;
            ++trace.accepts_omega;
            any = true;
            state.freqs.row(j) = state.proposed_freqs.row(j);
            state.current.values.col(j) = state.proposal.values.col(j);
            state.current.values.col(w + j) = state.proposal.values.col(w + j);
            state.amps.re_b[j] = proposed.re_b[j];
            state.amps.im_b[j] = proposed.im_b[j];
        }
    }

    if (any)
        record_solution(state, state.solver.solve(state.current, state.residual, lambda, n));
    append_trace_row(trace, state, accepted, {});
}

void gibbs_sweep_block_ell(ChainState& state, const Eigen::MatrixXd& theta_norm,
                           const ProposalConfig& cfg, double lambda, ChainTrace& trace,
                           bool update_omega_prime) {
    if (!state.has_prime()) throw DimensionError("gibbs sweep requires a primed state");
    const int w = state.width();
    const int d = static_cast<int>(state.freqs.cols());
    const Eigen::Index n = theta_norm.rows();

    if (trace.iterations == 0) {
        trace.width = w;
        trace.dim = d;
        trace.has_prime = true;
    }

    // omega update: propose, joint solve with the incumbent omega-prime set.
    state.proposed_freqs = propose_gaussian(state.freqs, cfg.delta, state.rng);
    state.proposal.values = state.current.values;
    fill_omega_columns(state.proposal, theta_norm, state.proposed_freqs);
    const AmplitudeSolution prop_a = state.solver.solve(state.proposal, state.residual, lambda, n);
    if (prop_a.normal_eq_residual > state.max_normal_eq_residual)
        state.max_normal_eq_residual = prop_a.normal_eq_residual;

    std::vector<std::uint8_t> accepted(w, 0);
    bool any = false;
    for (int j = 0; j < w; ++j) {
        double p = acceptance_probability(prop_a.magnitude(j), state.amps.magnitude(j), cfg.gamma);
        const Eigen::RowVectorXd row = state.proposed_freqs.row(j);
        if (!sign_rule_allows(cfg.sign_rule, row.data(), d)) p = 0.0;
        const double u = state.rng.uniform();
        ++trace.proposals_omega;
        if (u < p) {
            accepted[j] = 1;
            ++trace.accepts_omega;
            any = true;
            state.freqs.row(j) = state.proposed_freqs.row(j);
            state.current.values.col(j) = state.proposal.values.col(j);
            state.current.values.col(w + j) = state.proposal.values.col(w + j);
            state.amps.re_b[j] = prop_a.re_b[j];
            state.amps.im_b[j] = prop_a.im_b[j];
        }
    }

    // omega-prime update against the post-acceptance omega set.
    std::vector<std::uint8_t> accepted_prime(w, 0);
    if (update_omega_prime) {
        state.proposed_prime = propose_gaussian(state.freqs_prime, cfg.delta_prime, state.rng);
        state.proposal.values = state.current.values;
        fill_omega_prime_columns(state.proposal, state.z_prev, state.proposed_prime);
        const AmplitudeSolution prop_b =
            state.solver.solve(state.proposal, state.residual, lambda, n);
        if (prop_b.normal_eq_residual > state.max_normal_eq_residual)
            state.max_normal_eq_residual = prop_b.normal_eq_residual;

        for (int j = 0; j < w; ++j) {
            double p = acceptance_probability(prop_b.magnitude_prime(j),
                                              state.amps.magnitude_prime(j), cfg.gamma_prime);
            if (!sign_rule_allows(cfg.sign_rule, &state.proposed_prime[j], 1)) p = 0.0;
            const double u = state.rng.uniform();
            ++trace.proposals_omega_prime;
            if (u < p) {
                accepted_prime[j] = 1;
                ++trace.accepts_omega_prime;
                any = true;
                state.freqs_prime[j] = state.proposed_prime[j];
                state.current.values.col(2 * w + j) = state.proposal.values.col(2 * w + j);
                state.current.values.col(3 * w + j) = state.proposal.values.col(3 * w + j);
                state.amps.re_b_prime[j] = prop_b.re_b_prime[j];
                state.amps.im_b_prime[j] = prop_b.im_b_prime[j];
            }
        }
    }

    if (any)
        record_solution(state, state.solver.solve(state.current, state.residual, lambda, n));
    append_trace_row(trace, state, accepted, accepted_prime);
}

void write_trace_csv(const std::string& path, const std::vector<ChainTrace>& traces,
                     const std::vector<std::string>& comments, int stride) {
    if (stride < 1) stride = 1;
    CsvWriter writer(path);
    for (const auto& c : comments) writer.comment(c);
    int max_dim = 1;
    for (const auto& t : traces) max_dim = std::max(max_dim, t.dim);
    std::vector<std::string> columns = {"iteration", "block", "chain_index"};
    for (int k = 0; k < max_dim; ++k) columns.push_back("freq_" + std::to_string(k + 1));
    columns.insert(columns.end(), {"freq_prime", "accepted_flag", "accepted_flag_prime",
                                   "amplitude_magnitude", "amplitude_magnitude_prime"});
    writer.header(columns);

    for (const auto& trace : traces) {
        for (int it = 0; it < trace.iterations; it += stride) {
            for (int j = 0; j < trace.width; ++j) {
                std::vector<std::string> cells;
                cells.push_back(std::to_string(it));
                cells.push_back(std::to_string(trace.block));
                cells.push_back(std::to_string(j));
                for (int k = 0; k < max_dim; ++k)
                    cells.push_back(k < trace.dim ? format_double(trace.freq_at(it, j, k)) : "");
                const std::size_t idx = static_cast<std::size_t>(it) * trace.width + j;
                cells.push_back(trace.has_prime ? format_double(trace.freq_prime_at(it, j)) : "");
                cells.push_back(std::to_string(static_cast<int>(trace.accepted[idx])));
                cells.push_back(trace.has_prime
                                    ? std::to_string(static_cast<int>(trace.accepted_prime[idx]))
                                    : "");
                cells.push_back(format_double(trace.magnitudes[idx]));
                cells.push_back(trace.has_prime ? format_double(trace.magnitudes_prime[idx]) : "");
                writer.raw_row(cells);
            }
        }
    }
}

} // namespace rfnn
