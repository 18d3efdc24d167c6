#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rfnn/error.hpp"
#include "rfnn/rng.hpp"

namespace rfnn {

/// Scalar-valued benchmark target on a box domain.
struct TargetFunction {
    std::string name;
    int input_dim = 1;
    std::vector<std::pair<double, double>> domain;    // per-dimension [lo, hi]
    std::function<double(const double*)> evaluator;

    double operator()(const double* theta) const { return evaluator(theta); }
    double operator()(double theta) const { return evaluator(&theta); }
};

/// cos(4 t) + 0.3 cos(70 t) + 0.05 cos(150 t) on [-1, 1].
double multiscale(double theta);

/// Four equal steps {0, 1/3, 2/3, 1} on [-1, 1]; left-closed intervals.
double stairstep(double theta);

/// Sine integral Si(x) = int_0^x sin(t)/t dt, |error| <= 1e-10.
/// Power series for |x| <= 4, adaptive Gauss-Kronrod beyond.
double sine_integral(double x);

/// exp(-|t - c|^2 / 2) * Si((t1 - 0.5)/0.1) on [0,1]^3 with c = (.5,.5,.5).
double sine_discontinuity_3d(const double* theta);

/// Lookup by name ("multiscale", "stairstep", "sine3d"). Throws ConfigError
/// for unknown targets.
const TargetFunction& find_target(const std::string& name);

/// Adds a target to the registry (replaces an existing name).
void register_target(TargetFunction target);

std::vector<std::string> registered_targets();

/// Sampled training/evaluation data.
struct Dataset {
    Eigen::MatrixXd inputs;   // N x d
    Eigen::VectorXd targets;  // N

    Eigen::Index size() const { return inputs.rows(); }
    Eigen::Index dim() const { return inputs.cols(); }
};

/// n i.i.d. uniform draws over the target's domain, evaluated; deterministic
/// under the seed.
Dataset generate_dataset(const TargetFunction& target, Eigen::Index n, std::uint64_t seed);

/// CSV schema: header theta_1..theta_d,q with 17-significant-digit floats.
void write_dataset_csv(const std::string& path, const Dataset& dataset,
                       const std::vector<std::string>& comments = {});
Dataset read_dataset_csv(const std::string& path);

} // namespace rfnn
