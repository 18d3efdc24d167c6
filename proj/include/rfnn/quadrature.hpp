#pragma once

#include <functional>

namespace rfnn {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
};

/// Adaptive Gauss-Kronrod (G7,K15) on [a, b]. Bisects until the local error
/// estimate meets abs_tol distributed proportionally to interval length.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-12, int max_depth = 48);

} // namespace rfnn
