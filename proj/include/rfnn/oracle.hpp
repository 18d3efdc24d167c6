#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>

#include "rfnn/error.hpp"
#include "rfnn/rng.hpp"

namespace rfnn {

/// Uniform 1-D frequency grid carrying numeric Fourier coefficients
/// f_hat(w) = (2 pi)^{-1/2} integral f(t) e^{-i w t} dt.
struct SpectralGrid {
    Eigen::VectorXd omegas;               // uniform grid, ascending
    Eigen::VectorXcd coeffs;              // f_hat on the grid
    double d_omega = 0.0;

    Eigen::Index size() const { return omegas.size(); }
    /// Grid l1 norm: sum |f_hat| * d_omega.
    double l1_norm() const;
};

struct SpectralGridSpec {
    double omega_max = 20.0;     // grid spans [-omega_max, omega_max]
    double d_omega = 0.1;
    int theta_samples = 4097;    // trapezoid points on the function's domain
    double refine_tol = 1e-6;    // max relative change allowed under halving
};

/// Trapezoid-rule transform on the grid. Computes the coarse and the
/// 2x-refined approximation; errors if the relative change at significant
/// frequencies (|f_hat| >= half the peak) exceeds refine_tol. Returns the
/// refined result.
SpectralGrid numeric_fourier_transform(const std::function<double(double)>& f, double lo,
                                       double hi, const SpectralGridSpec& spec);

/// p*(w_k) = |f_hat(w_k)| / (sum |f_hat| d_omega); sums to 1 in grid measure.
/// Errors on an all-zero spectrum.
Eigen::VectorXd optimal_density(const SpectralGrid& grid);

struct BoundValue {
    double value = 0.0;
    bool infinite = false;  // density vanished where the spectrum does not
};

/// Discretized variance-bound functional sum |f_hat|^2 / p * d_omega.
/// At p = p* this equals the squared grid l1 norm of the spectrum.
BoundValue bound_functional(const Eigen::VectorXd& density, const SpectralGrid& grid);

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    double sample_variance = 0.0;
};

/// Draws `width` frequencies i.i.d. from the grid density, forms the real
/// part of the importance-sampled inverse transform at theta_probe, repeats
/// `reps` times; mean is an unbiased estimate of the discrete inverse
/// transform (approximately f(theta_probe)).
McEstimate mc_estimator_check(const SpectralGrid& grid, const Eigen::VectorXd& density,
                              int width, int reps, double theta_probe, Rng& rng);

/// Discrete inverse transform Re[(2 pi)^{-1/2} sum f_hat e^{i w t} d_omega].
double grid_inverse_transform(const SpectralGrid& grid, double theta);

void write_spectrum_csv(const std::string& path, const SpectralGrid& grid,
                        const std::vector<std::string>& comments = {});

} // namespace rfnn
