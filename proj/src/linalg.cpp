#include "rfnn/linalg.hpp"

#include <cmath>
#include <string>

#include "rfnn/kernels.hpp"

namespace rfnn {

namespace {

void check_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) throw SolveError(std::string("non-finite entries in ") + what);
}

// Writes cos into columns [col0, col0+W) and -sin into [col0+W, col0+2W).
void write_trig_columns(DesignMatrix& matrix, const Eigen::MatrixXd& phases, int col0) {
    const Eigen::Index n = phases.rows();
    const int w = static_cast<int>(phases.cols());
    for (int j = 0; j < w; ++j) {
        double* cos_dst = matrix.values.col(col0 + j).data();
        double* sin_dst = matrix.values.col(col0 + w + j).data();
        kernels::sincos(phases.col(j).data(), sin_dst, cos_dst, static_cast<std::size_t>(n));
        matrix.values.col(col0 + w + j) = -matrix.values.col(col0 + w + j);
    }
}

} // namespace

void fill_omega_columns(DesignMatrix& matrix, const Eigen::MatrixXd& inputs,
                        const Eigen::MatrixXd& freqs) {
    if (inputs.cols() != freqs.cols())
        throw DimensionError("input dimension " + std::to_string(inputs.cols()) +
                             " does not match frequency dimension " + std::to_string(freqs.cols()));
    if (freqs.rows() != matrix.width)
        throw DimensionError("frequency count " + std::to_string(freqs.rows()) +
                             " does not match design width " + std::to_string(matrix.width));
    if (inputs.rows() != matrix.rows())
        throw DimensionError("sample count " + std::to_string(inputs.rows()) +
                             " does not match design rows " + std::to_string(matrix.rows()));
    check_finite(inputs, "inputs");
    check_finite(freqs, "freqs");
    const Eigen::MatrixXd phases = inputs * freqs.transpose();
    write_trig_columns(matrix, phases, 0);
}

void fill_omega_prime_columns(DesignMatrix& matrix, const Eigen::VectorXd& prev_block_output,
                              const Eigen::VectorXd& freqs_prime) {
    if (!matrix.has_prime)
        throw DimensionError("design matrix has no omega-prime columns");
    if (freqs_prime.size() != matrix.width)
        throw DimensionError("freqs_prime length " + std::to_string(freqs_prime.size()) +
                             " does not match design width " + std::to_string(matrix.width));
    if (prev_block_output.size() != matrix.rows())
        throw DimensionError("prev_block_output length " + std::to_string(prev_block_output.size()) +
                             " does not match design rows " + std::to_string(matrix.rows()));
    check_finite(prev_block_output, "prev_block_output");
    check_finite(freqs_prime, "freqs_prime");
    const Eigen::MatrixXd phases = prev_block_output * freqs_prime.transpose();
    write_trig_columns(matrix, phases, 2 * matrix.width);
}

DesignMatrix assemble_design_matrix(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& freqs) {
    DesignMatrix matrix;
    matrix.width = static_cast<int>(freqs.rows());
    matrix.has_prime = false;
    matrix.values.resize(inputs.rows(), 2 * matrix.width);
    fill_omega_columns(matrix, inputs, freqs);
    return matrix;
}

DesignMatrix assemble_design_matrix(const Eigen::MatrixXd& inputs,
                                    const Eigen::VectorXd& prev_block_output,
                                    const Eigen::MatrixXd& freqs,
                                    const Eigen::VectorXd& freqs_prime) {
    DesignMatrix matrix;
    matrix.width = static_cast<int>(freqs.rows());
    matrix.has_prime = true;
    matrix.values.resize(inputs.rows(), 4 * matrix.width);
    fill_omega_columns(matrix, inputs, freqs);
    fill_omega_prime_columns(matrix, prev_block_output, freqs_prime);
    return matrix;
}

double normal_equation_residual(const DesignMatrix& matrix, const Eigen::VectorXd& rhs,
                                double lambda, Eigen::Index n, const Eigen::VectorXd& b) {
    const Eigen::MatrixXd& a = matrix.values;
    const double inv_n = 1.0 / static_cast<double>(n);
    const Eigen::VectorXd grad = a.transpose() * rhs * inv_n;
    const Eigen::VectorXd lhs = a.transpose() * (a * b) * inv_n + lambda * b;
    const double denom = grad.norm();
    const double num = (lhs - grad).norm();
    if (denom == 0.0) return num;
    return num / denom;
}

AmplitudeSolution RidgeSolver::solve(const DesignMatrix& matrix, const Eigen::VectorXd& rhs,
                                     double lambda, Eigen::Index n) {
    const Eigen::MatrixXd& a = matrix.values;
    const Eigen::Index rows = a.rows();
    const Eigen::Index cols = a.cols();
    if (rhs.size() != rows)
        throw DimensionError("target length " + std::to_string(rhs.size()) +
                             " does not match design rows " + std::to_string(rows));
    if (lambda < 0.0) throw SolveError("lambda must be >= 0");
    if (n <= 0) throw SolveError("sample count n must be positive");
    check_finite(a, "design matrix");
    check_finite(rhs, "targets");

    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    Eigen::VectorXd b;
    if (lambda == 0.0) {
        if (rows < cols)
            throw SolveError("underdetermined system with lambda = 0 (" + std::to_string(rows) +
                             " rows < " + std::to_string(cols) + " cols); use lambda > 0");
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
        if (qr.rank() < cols)
            throw SolveError("rank-deficient least-squares system with lambda = 0 (rank " +
                             std::to_string(qr.rank()) + " < " + std::to_string(cols) +
                             "); use lambda > 0");
        b = qr.solve(rhs);
    } else {
        augmented_.resize(rows + cols, cols);
        augmented_.topRows(rows) = a * inv_sqrt_n;
        augmented_.bottomRows(cols) =
            std::sqrt(lambda) * Eigen::MatrixXd::Identity(cols, cols);
        augmented_rhs_.resize(rows + cols);
        augmented_rhs_.head(rows) = rhs * inv_sqrt_n;
        augmented_rhs_.tail(cols).setZero();
        b = augmented_.householderQr().solve(augmented_rhs_);
    }

    AmplitudeSolution solution;
    const int w = matrix.width;
    solution.re_b = b.segment(0, w);
    solution.im_b = b.segment(w, w);
    if (matrix.has_prime) {
        solution.re_b_prime = b.segment(2 * w, w);
        solution.im_b_prime = b.segment(3 * w, w);
    }
    solution.objective_value =
        (a * b - rhs).squaredNorm() / static_cast<double>(n) + lambda * b.squaredNorm();
    solution.normal_eq_residual = normal_equation_residual(matrix, rhs, lambda, n, b);
    return solution;
}

AmplitudeSolution solve_ridge(const DesignMatrix& matrix, const Eigen::VectorXd& rhs,
                              double lambda, Eigen::Index n) {
    RidgeSolver solver;
    return solver.solve(matrix, rhs, lambda, n);
}

} // namespace rfnn
