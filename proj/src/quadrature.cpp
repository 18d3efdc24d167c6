#include "rfnn/quadrature.hpp"

#include <cmath>

namespace rfnn {

namespace {

// Kronrod-15 abscissae/weights and the embedded Gauss-7 weights (QUADPACK).
constexpr double kXgk[8] = {
    9.91455371120812639206854697526329e-01, 9.49107912342758524526189684047851e-01,
    8.64864423359769072789712788640926e-01, 7.41531185599394439863864773280788e-01,
    5.86087235467691130294144838258730e-01, 4.05845151377397166906606412076961e-01,
    2.07784955007898467600689403773245e-01, 0.0,
};
constexpr double kWgk[8] = {
    2.29353220105292249637320080589695e-02, 6.30920926299785532907006631892042e-02,
    1.04790010322250183839876322541518e-01, 1.40653259715525918745189590510238e-01,
    1.69004726639267902826583426598550e-01, 1.90350578064785409913256402421014e-01,
    2.04432940075298892414161999234649e-01, 2.09482141084727828012999174891714e-01,
};
constexpr double kWg[4] = {
    1.29484966168869693270611432679082e-01, 2.79705391489276667901467771423780e-01,
    3.81830050505118944950369775488975e-01, 4.17959183673469387755102040816327e-01,
};

struct Panel {
    double kronrod;
    double err;
};

Panel gk15(const std::function<double(double)>& f, double a, double b, long& evals) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double gauss = 0.0;
    double kronrod = 0.0;
    const double fc = f(center);
    ++evals;
    kronrod += kWgk[7] * fc;

    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        evals += 2;
        kronrod += kWgk[i] * (f1 + f2);
        if (i % 2 == 1) gauss += kWg[i / 2] * (f1 + f2);
    }
    gauss += kWg[3] * fc;

    return {kronrod * half, std::abs(kronrod - gauss) * std::abs(half)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol,
             int depth, double& err_out, long& evals) {
    const Panel p = gk15(f, a, b, evals);
    if (p.err <= tol || depth <= 0) {
        err_out += p.err;
        return p.kronrod;
    }
    const double mid = 0.5 * (a + b);
    return adapt(f, a, mid, 0.5 * tol, depth - 1, err_out, evals) +
           adapt(f, mid, b, 0.5 * tol, depth - 1, err_out, evals);
}

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_depth) {
    QuadResult result;
    if (a == b) return result;
    result.value = adapt(f, a, b, abs_tol, max_depth, result.error_estimate, result.evaluations);
    return result;
}

} // namespace rfnn
