#include "rfnn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "rfnn/csv.hpp"
#include "rfnn/kernels.hpp"

namespace rfnn {

double SpectralGrid::l1_norm() const { return coeffs.cwiseAbs().sum() * d_omega; }

namespace {

// Trapezoid transform of the sampled function at every grid frequency.
void transform_pass(const Eigen::VectorXd& theta, const Eigen::VectorXd& weighted_f,
                    const Eigen::VectorXd& omegas, Eigen::VectorXcd& out) {
    const Eigen::Index n_theta = theta.size();
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    Eigen::VectorXd phases(n_theta), sin_v(n_theta), cos_v(n_theta);
    for (Eigen::Index k = 0; k < omegas.size(); ++k) {
        phases = omegas[k] * theta;
        kernels::sincos(phases.data(), sin_v.data(), cos_v.data(),
                        static_cast<std::size_t>(n_theta));
        const double re = weighted_f.dot(cos_v);
        const double im = -weighted_f.dot(sin_v);
        out[k] = std::complex<double>(re * norm, im * norm);
    }
}

Eigen::VectorXcd transform_with_samples(const std::function<double(double)>& f, double lo,
                                        double hi, const Eigen::VectorXd& omegas,
                                        Eigen::Index n_theta) {
    Eigen::VectorXd theta(n_theta), weighted(n_theta);
    const double h = (hi - lo) / static_cast<double>(n_theta - 1);
    for (Eigen::Index i = 0; i < n_theta; ++i) {
        theta[i] = lo + h * static_cast<double>(i);
        weighted[i] = f(theta[i]) * h;
    }
    weighted[0] *= 0.5;
    weighted[n_theta - 1] *= 0.5;
    Eigen::VectorXcd out(omegas.size());
    transform_pass(theta, weighted, omegas, out);
    return out;
}

} // namespace

SpectralGrid numeric_fourier_transform(const std::function<double(double)>& f, double lo,
                                       double hi, const SpectralGridSpec& spec) {
    if (!(hi > lo)) throw ConfigError("transform domain must satisfy hi > lo");
    if (!(spec.omega_max > 0.0) || !(spec.d_omega > 0.0))
        throw ConfigError("grid spec requires omega_max > 0 and d_omega > 0");
    if (spec.theta_samples < 3) throw ConfigError("theta_samples must be >= 3");

    const auto half = static_cast<Eigen::Index>(std::llround(spec.omega_max / spec.d_omega));
    SpectralGrid grid;
    grid.d_omega = spec.d_omega;
    grid.omegas.resize(2 * half + 1);
    for (Eigen::Index k = 0; k < grid.omegas.size(); ++k)
        grid.omegas[k] = static_cast<double>(k - half) * spec.d_omega;

    const Eigen::Index coarse_n = spec.theta_samples;
    const Eigen::Index fine_n = 2 * coarse_n - 1;
    const Eigen::VectorXcd coarse = transform_with_samples(f, lo, hi, grid.omegas, coarse_n);
    grid.coeffs = transform_with_samples(f, lo, hi, grid.omegas, fine_n);

    const double peak = grid.coeffs.cwiseAbs().maxCoeff();
    if (peak > 0.0) {
        const double significant = 0.5 * peak;
        for (Eigen::Index k = 0; k < grid.omegas.size(); ++k) {
            const double magnitude = std::abs(grid.coeffs[k]);
            if (magnitude < significant) continue;
            const double change = std::abs(grid.coeffs[k] - coarse[k]) / magnitude;
            if (change > spec.refine_tol)
                throw SolveError("theta grid too coarse: refinement changes omega=" +
                                 format_double(grid.omegas[k]) + " by relative " +
                                 format_double(change) + " > " + format_double(spec.refine_tol));
        }
    }
    return grid;
}

Eigen::VectorXd optimal_density(const SpectralGrid& grid) {
    const double l1 = grid.l1_norm();
    if (!(l1 > 0.0)) throw SolveError("empty spectrum: |f_hat| vanishes on the grid");
    return grid.coeffs.cwiseAbs() / l1;
}

BoundValue bound_functional(const Eigen::VectorXd& density, const SpectralGrid& grid) {
    if (density.size() != grid.size())
        throw DimensionError("density length " + std::to_string(density.size()) +
                             " does not match grid size " + std::to_string(grid.size()));
    const double peak = grid.coeffs.cwiseAbs().maxCoeff();
    BoundValue out;
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
        const double mag = std::abs(grid.coeffs[k]);
        if (density[k] <= 0.0) {
            if (mag > 1e-14 * peak) {
                out.infinite = true;
                out.value = std::numeric_limits<double>::infinity();
                return out;
            }
            continue;
        }
        out.value += mag * mag / density[k];
    }
    out.value *= grid.d_omega;
    return out;
}

double grid_inverse_transform(const SpectralGrid& grid, double theta) {
    const double norm = grid.d_omega / std::sqrt(2.0 * std::numbers::pi);
    double sum = 0.0;
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
        const double w = grid.omegas[k];
        sum += grid.coeffs[k].real() * std::cos(w * theta) -
               grid.coeffs[k].imag() * std::sin(w * theta);
    }
    return sum * norm;
}

McEstimate mc_estimator_check(const SpectralGrid& grid, const Eigen::VectorXd& density,
                              int width, int reps, double theta_probe, Rng& rng) {
    if (width < 1 || reps < 2) throw ConfigError("mc_estimator_check requires width >= 1, reps >= 2");
    if (density.size() != grid.size())
        throw DimensionError("density length does not match grid size");

    // Sampling CDF over bins with probability p_k * d_omega.
    std::vector<double> cdf(static_cast<std::size_t>(grid.size()));
    double acc = 0.0;
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
        acc += density[k] * grid.d_omega;
        cdf[static_cast<std::size_t>(k)] = acc;
    }
    if (!(acc > 0.0)) throw SolveError("density must have positive mass");

    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    double mean = 0.0, m2 = 0.0;
    for (int rep = 0; rep < reps; ++rep) {
        double estimate = 0.0;
        for (int j = 0; j < width; ++j) {
            const double u = rng.uniform() * acc;
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            const auto k = static_cast<Eigen::Index>(
                std::min<std::ptrdiff_t>(it - cdf.begin(), grid.size() - 1));
            const double w = grid.omegas[k];
            const std::complex<double> term =
                grid.coeffs[k] * std::complex<double>(std::cos(w * theta_probe),
                                                      std::sin(w * theta_probe));
            estimate += term.real() * norm / density[k];
        }
        estimate /= static_cast<double>(width);
        // Welford running moments.
        const double delta = estimate - mean;
        mean += delta / static_cast<double>(rep + 1);
        m2 += delta * (estimate - mean);
    }
    McEstimate out;
    out.mean = mean;
    out.sample_variance = m2 / static_cast<double>(reps - 1);
    out.std_error = std::sqrt(out.sample_variance / static_cast<double>(reps));
    return out;
}

void write_spectrum_csv(const std::string& path, const SpectralGrid& grid,
                        const std::vector<std::string>& comments) {
    CsvWriter writer(path);
    for (const auto& c : comments) writer.comment(c);
    writer.header({"omega", "re_coeff", "im_coeff", "magnitude"});
    for (Eigen::Index k = 0; k < grid.size(); ++k)
        writer.row({grid.omegas[k], grid.coeffs[k].real(), grid.coeffs[k].imag(),
                    std::abs(grid.coeffs[k])});
}

} // namespace rfnn
