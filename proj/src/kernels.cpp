#include "rfnn/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace rfnn::kernels {

namespace scalar {

void sincos(const double* x, double* sin_out, double* cos_out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        sin_out[i] = std::sin(x[i]);
        cos_out[i] = std::cos(x[i]);
    }
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
void sincos(const double* x, double* sin_out, double* cos_out, std::size_t n);
double sum_sq_diff(const double* a, const double* b, std::size_t n);
}
#endif

#if defined(__aarch64__)
namespace neon {
void sincos(const double* x, double* sin_out, double* cos_out, std::size_t n);
double sum_sq_diff(const double* a, const double* b, std::size_t n);
}
#endif

namespace {

struct Dispatch {
    Backend backend;
    void (*sincos)(const double*, double*, double*, std::size_t);
    double (*sum_sq_diff)(const double*, const double*, std::size_t);
};

bool host_supports(Backend backend) {
    switch (backend) {
    case Backend::Scalar:
        return true;
    case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
        return false;
#endif
    case Backend::Neon:
#if defined(__aarch64__)
        return true;
#else
        return false;
#endif
    }
    return false;
}

Dispatch make_dispatch(Backend backend) {
    switch (backend) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::Avx2:
        return {Backend::Avx2, avx2::sincos, avx2::sum_sq_diff};
#endif
#if defined(__aarch64__)
    case Backend::Neon:
        return {Backend::Neon, neon::sincos, neon::sum_sq_diff};
#endif
    default:
        return {Backend::Scalar, scalar::sincos, scalar::sum_sq_diff};
    }
}

Backend default_backend() {
    if (const char* env = std::getenv("RFNN_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::Scalar;
        if (std::strcmp(env, "avx2") == 0 && host_supports(Backend::Avx2)) return Backend::Avx2;
        if (std::strcmp(env, "neon") == 0 && host_supports(Backend::Neon)) return Backend::Neon;
    }
    if (host_supports(Backend::Avx2)) return Backend::Avx2;
    if (host_supports(Backend::Neon)) return Backend::Neon;
    return Backend::Scalar;
}

Dispatch& dispatch() {
    static Dispatch d = make_dispatch(default_backend());
    return d;
}

} // namespace

Backend active_backend() { return dispatch().backend; }

const char* backend_name(Backend backend) {
    switch (backend) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
    }
    return "unknown";
}

bool backend_supported(Backend backend) { return host_supports(backend); }

bool force_backend(Backend backend) {
    if (!host_supports(backend)) return false;
    dispatch() = make_dispatch(backend);
    return true;
}

void sincos(const double* x, double* sin_out, double* cos_out, std::size_t n) {
    dispatch().sincos(x, sin_out, cos_out, n);
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
    return dispatch().sum_sq_diff(a, b, n);
}

} // namespace rfnn::kernels
