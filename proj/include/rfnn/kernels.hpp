#pragma once

#include <cstddef>

namespace rfnn::kernels {

enum class Backend { Scalar, Avx2, Neon };

/// Backend in use. Resolved once: RFNN_KERNELS env var (scalar|avx2|neon) if
/// set and supported, otherwise the widest ISA the CPU reports.
Backend active_backend();

const char* backend_name(Backend backend);

/// Force a backend (tests compare variants). Returns false and leaves the
/// selection unchanged if the host cannot run it.
bool force_backend(Backend backend);

bool backend_supported(Backend backend);

/// sin_out[i] = sin(x[i]), cos_out[i] = cos(x[i]).
/// SIMD variants use Cody-Waite reduction with a Cephes-style polynomial;
/// arguments with |x| > 1e6 take the scalar libm path. Absolute error vs libm
/// is below 1e-13 over the supported range (equivalence-tested).
void sincos(const double* x, double* sin_out, double* cos_out, std::size_t n);

/// sum over i of (a[i] - b[i])^2. Fixed accumulation order per backend.
double sum_sq_diff(const double* a, const double* b, std::size_t n);

// Reference implementations (always available; used by dispatch and tests).
namespace scalar {
void sincos(const double* x, double* sin_out, double* cos_out, std::size_t n);
double sum_sq_diff(const double* a, const double* b, std::size_t n);
}

} // namespace rfnn::kernels
