#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rfnn/network.hpp"
#include "rfnn/sampler.hpp"
#include "rfnn/targets.hpp"

namespace rfnn {

enum class Method {
    Method1, // both frequency types sampled every sweep
    Method2  // omega-prime drawn once from N(0,1) and frozen
};

struct TrainConfig {
    int W = 6;
    int L_max = 10;
    std::vector<int> sweeps = {5000};       // M; one entry = uniform, else per block
    double gamma = 10.0;
    double gamma_prime = 10.0;
    std::optional<double> delta;            // default 2.4^2 / d
    std::optional<double> delta_prime;      // default 2.4^2
    std::vector<double> lambdas = {1e-4};   // one entry = uniform, else per block
    std::uint64_t seed = 0;
    Method method = Method::Method1;
    int burn_in = 0;
    std::optional<double> stop_tolerance;   // early stop on train MSE
    std::optional<SignRule> sign_rule;      // default: reject negatives iff d == 1

    int sweeps_for_block(int block) const;
    double lambda_for_block(int block) const;
    void validate() const;
};

struct BlockReport {
    int block = 0;
    double train_mse = 0.0;
    double test_mse = 0.0;
    double seconds = 0.0;
    double acceptance_rate_omega = 0.0;
    double acceptance_rate_omega_prime = 0.0;  // NaN for block 1
    double max_normal_eq_residual = 0.0;
};

struct TrainResult {
    Network net;
    std::vector<BlockReport> reports;
    std::vector<ChainTrace> traces;
};

/// Thrown when a block fails mid-run; carries the partial network.
class TrainError : public Error {
public:
    TrainError(const std::string& message, TrainResult partial)
        : Error(message), partial_(std::move(partial)) {}
    const TrainResult& partial() const { return partial_; }

private:
    TrainResult partial_;
};

/// Shift/scale every input dimension to empirical mean 0, population std 1.
/// Errors on constant dimensions or fewer than two samples.
std::pair<Dataset, NormStats> standardize(const Dataset& data);

/// Full block-by-block run: standardize, train block 1, then blocks
/// 2..L_max on the residuals, stopping early if stop_tolerance is met.
/// Deterministic under (data, test, cfg).
TrainResult train(const Dataset& data, const Dataset& test, const TrainConfig& cfg);

/// Single-block entry points (standalone; train() composes the same steps).
struct BlockTrainResult {
    BlockParams params;
    BlockReport report;
    ChainTrace trace;
};

BlockTrainResult train_block1(const Dataset& data, const Dataset& test, const TrainConfig& cfg);

/// Trains block ell (>= 2) against the residual of `net` (depth ell-1) and
/// appends it to the network.
BlockTrainResult train_block_ell(const Dataset& data, const Dataset& test, Network& net,
                                 const TrainConfig& cfg, int ell);

} // namespace rfnn
