#pragma once

#include <cstdint>
#include <vector>

#include "rfnn/network.hpp"
#include "rfnn/targets.hpp"

namespace rfnn {

struct AdamConfig {
    int epochs = 15000;
    double learning_rate = 1e-3;
    int batch_size = 256;
    double lambda = 1e-4;       // Tikhonov weight on all amplitude parameters
    std::uint64_t seed = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    void validate() const;
};

/// Canonical flattening order, per block: freqs row-major (W*d), re_b, im_b,
/// then for blocks > 1: freqs_prime, re_b_prime, im_b_prime.
Eigen::VectorXd flatten_parameters(const Network& net);
void set_parameters(Network& net, const Eigen::VectorXd& flat);
Eigen::Index parameter_count(const Network& net);

/// Batch-mean squared error plus lambda * |amplitudes|^2, with the gradient
/// computed by reverse accumulation through the residual recursion
/// z_l = z_{l-1} + g_l(theta) + g'_l(z_{l-1}).
std::pair<double, Eigen::VectorXd> loss_and_gradient(const Network& net,
                                                     const Eigen::MatrixXd& raw_inputs,
                                                     const Eigen::VectorXd& targets,
                                                     double lambda);

struct AdamResult {
    Network net;
    std::vector<double> train_loss;  // full-batch regularized loss per epoch
    std::vector<double> test_mse;    // per epoch
};

/// Global moment-based gradient training of a width-W depth-L network of the
/// same architecture: shuffled mini-batches per epoch, seed-deterministic,
/// frequencies initialized N(0,1) and amplitudes at zero. Aborts if the
/// full-batch loss exceeds 1e12.
AdamResult adam_train(const Dataset& data, const Dataset& test, int width, int depth,
                      const AdamConfig& cfg);

void write_loss_curve_csv(const std::string& path, const AdamResult& result,
                          const std::vector<std::string>& comments = {});

} // namespace rfnn
