#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rfnn/error.hpp"

namespace rfnn {

/// Per-dimension standardization statistics of the training inputs
/// (population standard deviation; must be positive).
struct NormStats {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;

    Eigen::Index dim() const { return mean.size(); }
};

/// Parameters of one residual block. The primed fields exist exactly for
/// blocks after the first (they act on the previous block's output).
struct BlockParams {
    Eigen::MatrixXd freqs;   // W x d
    Eigen::VectorXd re_b;    // W
    Eigen::VectorXd im_b;    // W
    Eigen::VectorXd freqs_prime;    // W, empty on block 1
    Eigen::VectorXd re_b_prime;     // W, empty on block 1
    Eigen::VectorXd im_b_prime;     // W, empty on block 1

    bool has_prime() const { return freqs_prime.size() > 0; }
    int width() const { return static_cast<int>(freqs.rows()); }
};

/// Residual Fourier network: blocks of sinusoids with sampled frequencies and
/// least-squares amplitudes. Inputs are standardized with norm_stats at
/// evaluation time, so stored frequencies live in normalized coordinates.
struct Network {
    int input_dim = 0;
    int width = 0;
    NormStats norm_stats;
    std::vector<BlockParams> blocks;

    int depth() const { return static_cast<int>(blocks.size()); }
};

/// Standardize raw inputs with the network's stats: (theta - mean) / std.
Eigen::MatrixXd normalize_inputs(const NormStats& stats, const Eigen::MatrixXd& raw);

/// g(theta) = sum_j Re(b_j) cos(w_j.theta) - Im(b_j) sin(w_j.theta).
/// theta_normalized is N x d in standardized coordinates.
Eigen::VectorXd block_g(const Eigen::MatrixXd& theta_normalized, const BlockParams& block);

/// g'(z) = sum_j Re(b'_j) cos(w'_j z) - Im(b'_j) sin(w'_j z).
Eigen::VectorXd block_g_prime(const Eigen::VectorXd& z_prev, const BlockParams& block);

/// Evaluate the network on raw (un-normalized) inputs up to the given block
/// (1-based; 0 means full depth). z_l = z_{l-1} + g_l(theta) + g'_l(z_{l-1}).
Eigen::VectorXd forward(const Network& net, const Eigen::MatrixXd& raw_inputs,
                        int upto_block = 0);

/// Versioned plain-text key-value serialization; 17-significant-digit floats
/// make the round trip lossless for IEEE doubles.
void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);
std::string network_to_string(const Network& net);
Network network_from_string(const std::string& text);

} // namespace rfnn
