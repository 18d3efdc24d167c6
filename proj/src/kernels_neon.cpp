// NEON variants for aarch64, a direct transliteration of the AVX2 kernels
// (same reduction, same polynomials, two lanes per vector).

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

namespace rfnn::kernels::neon {

namespace {

constexpr double kTwoOverPi = 6.36619772367581382433e-01;
constexpr double kPio2Hi = 1.57079632673412561417e+00;
constexpr double kPio2Mid = 6.07710050650619224932e-11;
constexpr double kPio2Lo = 2.02226624879595063154e-21;
constexpr double kMaxArg = 1.0e6;

constexpr double kSin[6] = {
    1.58962301576546568060e-10, -2.50507477628578072866e-8,
    2.75573136213857245213e-6,  -1.98412698295895385996e-4,
    8.33333333332211858878e-3,  -1.66666666666666307295e-1,
};
constexpr double kCos[6] = {
    -1.13585365213876817300e-11, 2.08757008419747316778e-9,
    -2.75573141792967388112e-7,  2.48015872888517179954e-5,
    -1.38888888888730564116e-3,  4.16666666666665929218e-2,
};

inline void sincos2(const double* x, double* sin_out, double* cos_out) {
    const float64x2_t xv = vld1q_f64(x);
    const float64x2_t kd = vrndnq_f64(vmulq_f64(xv, vdupq_n_f64(kTwoOverPi)));

    float64x2_t r = vfmsq_f64(xv, kd, vdupq_n_f64(kPio2Hi));
    r = vfmsq_f64(r, kd, vdupq_n_f64(kPio2Mid));
    r = vfmsq_f64(r, kd, vdupq_n_f64(kPio2Lo));

    const int64x2_t q = vcvtq_s64_f64(kd);
    const uint64x2_t q1 = vandq_u64(vreinterpretq_u64_s64(q), vdupq_n_u64(1));
    const uint64x2_t q2 = vandq_u64(vreinterpretq_u64_s64(q), vdupq_n_u64(2));
    const uint64x2_t qc2 = vandq_u64(
        vreinterpretq_u64_s64(vaddq_s64(q, vdupq_n_s64(1))), vdupq_n_u64(2));

    const float64x2_t z = vmulq_f64(r, r);

    float64x2_t ps = vdupq_n_f64(kSin[0]);
    ps = vfmaq_f64(vdupq_n_f64(kSin[1]), ps, z);
    ps = vfmaq_f64(vdupq_n_f64(kSin[2]), ps, z);
    ps = vfmaq_f64(vdupq_n_f64(kSin[3]), ps, z);
    ps = vfmaq_f64(vdupq_n_f64(kSin[4]), ps, z);
    ps = vfmaq_f64(vdupq_n_f64(kSin[5]), ps, z);
    const float64x2_t sin_r = vfmaq_f64(r, vmulq_f64(r, z), ps);

    float64x2_t pc = vdupq_n_f64(kCos[0]);
    pc = vfmaq_f64(vdupq_n_f64(kCos[1]), pc, z);
    pc = vfmaq_f64(vdupq_n_f64(kCos[2]), pc, z);
    pc = vfmaq_f64(vdupq_n_f64(kCos[3]), pc, z);
    pc = vfmaq_f64(vdupq_n_f64(kCos[4]), pc, z);
    pc = vfmaq_f64(vdupq_n_f64(kCos[5]), pc, z);
    const float64x2_t cos_r =
        vfmaq_f64(vfmsq_f64(vdupq_n_f64(1.0), z, vdupq_n_f64(0.5)), vmulq_f64(z, z), pc);

    const uint64x2_t swap = vceqq_u64(q1, vdupq_n_u64(1));
    float64x2_t s = vbslq_f64(swap, cos_r, sin_r);
    float64x2_t c = vbslq_f64(swap, sin_r, cos_r);
    s = vreinterpretq_f64_u64(veorq_u64(vreinterpretq_u64_f64(s), vshlq_n_u64(q2, 62)));
    c = vreinterpretq_f64_u64(veorq_u64(vreinterpretq_u64_f64(c), vshlq_n_u64(qc2, 62)));

    vst1q_f64(sin_out, s);
    vst1q_f64(cos_out, c);
}

inline void sincos_scalar_tail(const double* x, double* s, double* c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = std::sin(x[i]);
        c[i] = std::cos(x[i]);
    }
}

} // namespace

void sincos(const double* x, double* sin_out, double* cos_out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        if (std::abs(x[i]) > kMaxArg || std::abs(x[i + 1]) > kMaxArg) {
            sincos_scalar_tail(x + i, sin_out + i, cos_out + i, 2);
            continue;
        }
        sincos2(x + i, sin_out + i, cos_out + i);
    }
    sincos_scalar_tail(x + i, sin_out + i, cos_out + i, n - i);
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float64x2_t d0 = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        const float64x2_t d1 = vsubq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
        acc0 = vfmaq_f64(acc0, d0, d0);
        acc1 = vfmaq_f64(acc1, d1, d1);
    }
    for (; i + 2 <= n; i += 2) {
        const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc0 = vfmaq_f64(acc0, d, d);
    }
    const float64x2_t acc = vaddq_f64(acc0, acc1);
    double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

} // namespace rfnn::kernels::neon

#endif // aarch64
