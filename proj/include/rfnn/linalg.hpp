#pragma once

#include <Eigen/Dense>

#include "rfnn/error.hpp"

namespace rfnn {

/// Real-valued design matrix for one block's amplitude solve.
///
/// Column layout (W chains):
///   block 1:   [cos(w_j.theta) | -sin(w_j.theta)]                  -> N x 2W
///   block l>1: [cos(w_j.theta) | -sin(w_j.theta) |
///               cos(w'_j z)    | -sin(w'_j z)]                     -> N x 4W
/// so that A * [re_b; im_b; re_b'; im_b'] evaluates the block output.
struct DesignMatrix {
    Eigen::MatrixXd values;
    int width = 0;
    bool has_prime = false;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
};

/// Block-1 design matrix: inputs N x d, freqs W x d.
DesignMatrix assemble_design_matrix(const Eigen::MatrixXd& inputs,
                                    const Eigen::MatrixXd& freqs);

/// Block l>1 design matrix; prev_block_output has length N, freqs_prime W.
DesignMatrix assemble_design_matrix(const Eigen::MatrixXd& inputs,
                                    const Eigen::VectorXd& prev_block_output,
                                    const Eigen::MatrixXd& freqs,
                                    const Eigen::VectorXd& freqs_prime);

/// Recompute the [cos | -sin] columns for the theta frequencies in place.
void fill_omega_columns(DesignMatrix& matrix, const Eigen::MatrixXd& inputs,
                        const Eigen::MatrixXd& freqs);

/// Recompute the [cos | -sin] columns for the z frequencies in place.
void fill_omega_prime_columns(DesignMatrix& matrix, const Eigen::VectorXd& prev_block_output,
                              const Eigen::VectorXd& freqs_prime);

/// Ridge solution split into complex-amplitude components. Primed vectors are
/// empty for block 1.
struct AmplitudeSolution {
    Eigen::VectorXd re_b, im_b;
    Eigen::VectorXd re_b_prime, im_b_prime;
    double objective_value = 0.0;
    /// Relative residual of (A^T A / n + lambda I) b = A^T r / n.
    double normal_eq_residual = 0.0;

    double magnitude(int j) const { return std::hypot(re_b[j], im_b[j]); }
    double magnitude_prime(int j) const { return std::hypot(re_b_prime[j], im_b_prime[j]); }
};

/// Minimizes n^-1 |A b - r|^2 + lambda |b|^2 via a Householder QR
/// factorization of the augmented system [A/sqrt(n); sqrt(lambda) I].
/// lambda = 0 requires an overdetermined full-rank system (column-pivoted QR
/// rank check); rank deficiency is an error advising lambda > 0.
///
/// Reuses internal workspace across calls; one instance per thread.
class RidgeSolver {
public:
    AmplitudeSolution solve(const DesignMatrix& matrix, const Eigen::VectorXd& rhs,
                            double lambda, Eigen::Index n);

private:
    Eigen::MatrixXd augmented_;
    Eigen::VectorXd augmented_rhs_;
};

/// One-shot convenience wrapper around RidgeSolver.
AmplitudeSolution solve_ridge(const DesignMatrix& matrix, const Eigen::VectorXd& rhs,
                              double lambda, Eigen::Index n);

/// Relative residual of the normal equations at b (diagnostic used by tests).
double normal_equation_residual(const DesignMatrix& matrix, const Eigen::VectorXd& rhs,
                                double lambda, Eigen::Index n, const Eigen::VectorXd& b);

} // namespace rfnn
