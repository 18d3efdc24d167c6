#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "rfnn/linalg.hpp"
#include "rfnn/rng.hpp"

namespace rfnn {

/// Rule for discarding proposed frequencies by sign. Real-valued targets are
/// representable with non-negative frequencies, so 1-D runs reject negative
/// proposals; for d > 1 the generalization is configurable.
enum class SignRule { RejectNegative1d, HalfSpaceFirstComponent, None };

SignRule default_sign_rule(int input_dim);
bool sign_rule_allows(SignRule rule, const double* freq, int dim);

struct ProposalConfig {
    double delta = 0.0;        // Gaussian proposal variance for omega
    double delta_prime = 0.0;  // Gaussian proposal variance for omega-prime
    double gamma = 10.0;       // acceptance exponent for omega
    double gamma_prime = 10.0; // acceptance exponent for omega-prime
    SignRule sign_rule = SignRule::None;
};

/// Per-iteration snapshots of the current frequency set (recorded after the
/// closing re-solve of each sweep) plus per-chain acceptance flags and
/// amplitude magnitudes. Flat row-major storage: iteration-major, chain-minor.
struct ChainTrace {
    int block = 1;
    int width = 0;
    int dim = 1;
    bool has_prime = false;
    int iterations = 0;

    std::vector<double> freqs;        // iterations * width * dim
    std::vector<double> freqs_prime;  // iterations * width (if has_prime)
    std::vector<double> magnitudes;         // iterations * width
    std::vector<double> magnitudes_prime;   // iterations * width (if has_prime)
    std::vector<std::uint8_t> accepted;        // iterations * width
    std::vector<std::uint8_t> accepted_prime;  // iterations * width (if has_prime)

    long proposals_omega = 0, accepts_omega = 0;
    long proposals_omega_prime = 0, accepts_omega_prime = 0;

    double freq_at(int iter, int chain, int d) const {
        return freqs[(static_cast<std::size_t>(iter) * width + chain) * dim + d];
    }
    double freq_prime_at(int iter, int chain) const {
        return freqs_prime[static_cast<std::size_t>(iter) * width + chain];
    }
    double acceptance_rate_omega() const {
        return proposals_omega ? static_cast<double>(accepts_omega) / proposals_omega : 0.0;
    }
    double acceptance_rate_omega_prime() const {
        return proposals_omega_prime
                   ? static_cast<double>(accepts_omega_prime) / proposals_omega_prime
                   : 0.0;
    }
};

/// CSV schema: iteration,block,chain_index,freq_1..freq_d,freq_prime,
/// accepted_flag,accepted_flag_prime,amplitude_magnitude,
/// amplitude_magnitude_prime (prime cells empty for block 1).
void write_trace_csv(const std::string& path, const std::vector<ChainTrace>& traces,
                     const std::vector<std::string>& comments = {}, int stride = 1);

/// State of one block's W parallel Metropolis chains. The stored amplitudes
/// are always the ridge solution for the stored frequencies and residual.
struct ChainState {
    Eigen::MatrixXd freqs;        // W x d
    Eigen::VectorXd freqs_prime;  // W (blocks > 1)
    AmplitudeSolution amps;
    Eigen::VectorXd residual;     // block target r = Q - z_{l-1} on the data
    Eigen::VectorXd z_prev;       // previous block output (blocks > 1)
    Rng rng;
    double max_normal_eq_residual = 0.0;

    // workspace
    DesignMatrix current;
    DesignMatrix proposal;
    RidgeSolver solver;
    Eigen::MatrixXd proposed_freqs;
    Eigen::VectorXd proposed_prime;

    int width() const { return static_cast<int>(freqs.rows()); }
    bool has_prime() const { return freqs_prime.size() > 0; }
};

/// Draw frequencies i.i.d. N(0, I) and solve for the matching amplitudes.
ChainState init_block1_state(const Eigen::MatrixXd& theta_norm, const Eigen::VectorXd& residual,
                             int width, double lambda, Rng rng);
ChainState init_block_ell_state(const Eigen::MatrixXd& theta_norm, const Eigen::VectorXd& residual,
                                const Eigen::VectorXd& z_prev, int width, double lambda, Rng rng);

/// current + sqrt(variance) * g with g standard normal per component.
Eigen::VectorXd propose_gaussian(const Eigen::VectorXd& current, double variance, Rng& rng);
Eigen::MatrixXd propose_gaussian(const Eigen::MatrixXd& current, double variance, Rng& rng);

/// min{1, (b_new/b_old)^gamma}; a zero-magnitude incumbent always moves.
double acceptance_probability(double b_new_magnitude, double b_old_magnitude, double gamma);

/// One block-1 sweep: joint proposal of all W frequencies, one shared ridge
/// solve, per-chain accept/reject, then a closing re-solve for the accepted
/// set. Appends one row to the trace.
void metropolis_sweep_block1(ChainState& state, const Eigen::MatrixXd& theta_norm,
                             const ProposalConfig& cfg, double lambda, ChainTrace& trace);

/// One Metropolis-within-Gibbs sweep for blocks > 1: omega update, then
/// omega-prime update (skipped when update_omega_prime is false, which is the
/// frozen-omega-prime ablation), then the closing re-solve. Amplitudes for
/// both frequency types are computed jointly in every solve.
void gibbs_sweep_block_ell(ChainState& state, const Eigen::MatrixXd& theta_norm,
                           const ProposalConfig& cfg, double lambda, ChainTrace& trace,
                           bool update_omega_prime = true);

} // namespace rfnn
