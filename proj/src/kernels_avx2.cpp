// AVX2+FMA variants. This translation unit is the only one built with
// -mavx2 -mfma; callers reach it through the runtime dispatch table.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace rfnn::kernels::avx2 {

namespace {

// 2/pi and a three-part split of pi/2 (fdlibm constants); k*hi is exact for
// |k| < 2^20, which keeps the reduction accurate up to the 1e6 cutoff.
constexpr double kTwoOverPi = 6.36619772367581382433e-01;
constexpr double kPio2Hi = 1.57079632673412561417e+00;
constexpr double kPio2Mid = 6.07710050650619224932e-11;
constexpr double kPio2Lo = 2.02226624879595063154e-21;
constexpr double kMaxArg = 1.0e6;

// Cephes minimax polynomials on |r| <= pi/4.
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

inline void sincos4(const double* x, double* sin_out, double* cos_out) {
    const __m256d xv = _mm256_loadu_pd(x);
    const __m256d kd = _mm256_round_pd(_mm256_mul_pd(xv, _mm256_set1_pd(kTwoOverPi)),
                                       _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);

    __m256d r = _mm256_fnmadd_pd(kd, _mm256_set1_pd(kPio2Hi), xv);
    r = _mm256_fnmadd_pd(kd, _mm256_set1_pd(kPio2Mid), r);
    r = _mm256_fnmadd_pd(kd, _mm256_set1_pd(kPio2Lo), r);

    // Quadrant: low bits of kd via the 1.5*2^52 shifter (|kd| < 2^51).
    const __m256i q =
        _mm256_castpd_si256(_mm256_add_pd(kd, _mm256_set1_pd(6755399441055744.0)));
    const __m256i q1 = _mm256_and_si256(q, _mm256_set1_epi64x(1));
    const __m256i q2 = _mm256_and_si256(q, _mm256_set1_epi64x(2));
    const __m256i qc2 =
        _mm256_and_si256(_mm256_add_epi64(q, _mm256_set1_epi64x(1)), _mm256_set1_epi64x(2));

    const __m256d z = _mm256_mul_pd(r, r);

    __m256d ps = _mm256_set1_pd(kSin[0]);
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kSin[1]));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kSin[2]));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kSin[3]));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kSin[4]));
    ps = _mm256_fmadd_pd(ps, z, _mm256_set1_pd(kSin[5]));
    // sin(r) = r + r*z*P(z)
    const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, z), ps, r);

    __m256d pc = _mm256_set1_pd(kCos[0]);
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kCos[1]));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kCos[2]));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kCos[3]));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kCos[4]));
    pc = _mm256_fmadd_pd(pc, z, _mm256_set1_pd(kCos[5]));
    // cos(r) = 1 - z/2 + z^2*Q(z)
    const __m256d cos_r = _mm256_fmadd_pd(
        _mm256_mul_pd(z, z), pc,
        _mm256_fnmadd_pd(z, _mm256_set1_pd(0.5), _mm256_set1_pd(1.0)));

    // Quadrant selection: swap when k odd, negate per k mod 4.
    const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(q1, _mm256_set1_epi64x(1)));
    __m256d s = _mm256_blendv_pd(sin_r, cos_r, swap);
    __m256d c = _mm256_blendv_pd(cos_r, sin_r, swap);
    s = _mm256_xor_pd(s, _mm256_castsi256_pd(_mm256_slli_epi64(q2, 62)));
    c = _mm256_xor_pd(c, _mm256_castsi256_pd(_mm256_slli_epi64(qc2, 62)));

    _mm256_storeu_pd(sin_out, s);
    _mm256_storeu_pd(cos_out, c);
}

inline void sincos_scalar_tail(const double* x, double* s, double* c, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        s[i] = std::sin(x[i]);
        c[i] = std::cos(x[i]);
    }
}

} // namespace

void sincos(const double* x, double* sin_out, double* cos_out, std::size_t n) {
    const __m256d max_arg = _mm256_set1_pd(kMaxArg);
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d xv = _mm256_loadu_pd(x + i);
        const __m256d ax = _mm256_and_pd(xv, abs_mask);
        if (_mm256_movemask_pd(_mm256_cmp_pd(ax, max_arg, _CMP_GT_OQ)) != 0) {
            sincos_scalar_tail(x + i, sin_out + i, cos_out + i, 4);
            continue;
        }
        sincos4(x + i, sin_out + i, cos_out + i);
    }
    sincos_scalar_tail(x + i, sin_out + i, cos_out + i, n - i);
}

double sum_sq_diff(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc0 = _mm256_fmadd_pd(d, d, acc0);
    }
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = ((lanes[0] + lanes[1]) + (lanes[2] + lanes[3]));
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

} // namespace rfnn::kernels::avx2

#endif // x86_64
