// SPDX-License-Identifier: Apache-2.0
#include "passlab/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace passlab::kernels {
namespace {

// Vector sin/cos for |x| up to ~1e6 rad. Cody-Waite reduction by pi/2 with a
// 33-bit leading constant (exact n*c1 products for the n that occur here),
// then the usual minimax polynomials on [-pi/4, pi/4]. Good to ~1e-13 absolute
// over the phase ranges this code produces; the equivalence test pins that.

constexpr double kTwoOverPi = 6.36619772367581382433e-01;
constexpr double kPio2_1 = 1.57079632673412561417e+00;
constexpr double kPio2_1t = 6.07710050650619224932e-11;

constexpr double kS1 = -1.66666666666666324348e-01;
constexpr double kS2 = 8.33333333332248946124e-03;
constexpr double kS3 = -1.98412698298579493134e-04;
constexpr double kS4 = 2.75573137070700676789e-06;
constexpr double kS5 = -2.50507602534068634195e-08;
constexpr double kS6 = 1.58969099521155010221e-10;

constexpr double kC1 = 4.16666666666666019037e-02;
constexpr double kC2 = -1.38888888888741095749e-03;
constexpr double kC3 = 2.48015872894767294178e-05;
constexpr double kC4 = -2.75573143513906633035e-07;
constexpr double kC5 = 2.08757232129817482790e-09;
constexpr double kC6 = -1.13596475577881948265e-11;

inline void sincos4(__m256d x, __m256d* sin_out, __m256d* cos_out) {
    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kTwoOverPi)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kPio2_1), x);
    r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kPio2_1t), r);

    const __m256d r2 = _mm256_mul_pd(r, r);

    __m256d ps = _mm256_set1_pd(kS6);
    ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(kS5));
    ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(kS4));
    ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(kS3));
    ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(kS2));
    ps = _mm256_fmadd_pd(ps, r2, _mm256_set1_pd(kS1));
    const __m256d s = _mm256_fmadd_pd(_mm256_mul_pd(ps, r2), r, r);

    __m256d pc = _mm256_set1_pd(kC6);
    pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(kC5));
    pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(kC4));
    pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(kC3));
    pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(kC2));
    pc = _mm256_fmadd_pd(pc, r2, _mm256_set1_pd(kC1));
    __m256d c = _mm256_fmadd_pd(pc, _mm256_mul_pd(r2, r2),
                                _mm256_fnmadd_pd(r2, _mm256_set1_pd(0.5), _mm256_set1_pd(1.0)));

    // quadrant q = n mod 4 in {0,1,2,3}
    const __m256d q = _mm256_fnmadd_pd(
        _mm256_set1_pd(4.0),
        _mm256_floor_pd(_mm256_mul_pd(n, _mm256_set1_pd(0.25))), n);

    const __m256d q1 = _mm256_cmp_pd(q, _mm256_set1_pd(1.0), _CMP_EQ_OQ);
    const __m256d q2 = _mm256_cmp_pd(q, _mm256_set1_pd(2.0), _CMP_EQ_OQ);
    const __m256d q3 = _mm256_cmp_pd(q, _mm256_set1_pd(3.0), _CMP_EQ_OQ);

    const __m256d swap = _mm256_or_pd(q1, q3);
    const __m256d sign_bit = _mm256_set1_pd(-0.0);
    const __m256d sin_neg = _mm256_and_pd(_mm256_or_pd(q2, q3), sign_bit);
    const __m256d cos_neg = _mm256_and_pd(_mm256_or_pd(q1, q2), sign_bit);

    const __m256d s_sel = _mm256_blendv_pd(s, c, swap);
    const __m256d c_sel = _mm256_blendv_pd(c, s, swap);
    *sin_out = _mm256_xor_pd(s_sel, sin_neg);
    *cos_out = _mm256_xor_pd(c_sel, cos_neg);
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d sum2 = _mm_add_pd(lo, hi);
    const __m128d swapped = _mm_unpackhi_pd(sum2, sum2);
    return _mm_cvtsd_f64(_mm_add_sd(sum2, swapped));
}

void waveguide_channel_sum_avx2(const double* pa_x, const double* mask, std::size_t n,
                                double ux, double cross2, double kappa, double beta,
                                double amp, double* re_out, double* im_out) {
    const __m256d vux = _mm256_set1_pd(ux);
    const __m256d vcross2 = _mm256_set1_pd(cross2);
    const __m256d vkappa = _mm256_set1_pd(kappa);
    const __m256d vbeta = _mm256_set1_pd(beta);
    const __m256d vamp = _mm256_set1_pd(amp);

    __m256d re_acc = _mm256_setzero_pd();
    __m256d im_acc = _mm256_setzero_pd();

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(pa_x + i);
        const __m256d m = _mm256_loadu_pd(mask + i);
        const __m256d dx = _mm256_sub_pd(x, vux);
        const __m256d d = _mm256_sqrt_pd(_mm256_fmadd_pd(dx, dx, vcross2));
        const __m256d theta = _mm256_fmadd_pd(vkappa, d, _mm256_mul_pd(vbeta, x));
        __m256d s, c;
        sincos4(theta, &s, &c);
        const __m256d a = _mm256_div_pd(_mm256_mul_pd(m, vamp), d);
        re_acc = _mm256_fmadd_pd(a, c, re_acc);
        im_acc = _mm256_fnmadd_pd(a, s, im_acc);
    }

    double re = hsum(re_acc);
    double im = hsum(im_acc);
    for (; i < n; ++i) {
        const double dx = pa_x[i] - ux;
        const double d = std::sqrt(dx * dx + cross2);
        const double theta = kappa * d + beta * pa_x[i];
        const double a = mask[i] * amp / d;
        re += a * std::cos(theta);
        im -= a * std::sin(theta);
    }
    *re_out = re;
    *im_out = im;
}

double min_distance_sq_avx2(const double* pa_x, std::size_t n, double ux, double cross2) {
    const __m256d vux = _mm256_set1_pd(ux);
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(pa_x + i), vux);
        best = _mm256_min_pd(best, _mm256_mul_pd(dx, dx));
    }
    const __m128d lo = _mm256_castpd256_pd128(best);
    const __m128d hi = _mm256_extractf128_pd(best, 1);
    const __m128d m2 = _mm_min_pd(lo, hi);
    double b = _mm_cvtsd_f64(_mm_min_sd(m2, _mm_unpackhi_pd(m2, m2)));
    for (; i < n; ++i) {
        const double dx = pa_x[i] - ux;
        const double d2 = dx * dx;
        if (d2 < b) b = d2;
    }
    return b + cross2;
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

}  // namespace

const Ops* avx2_ops_impl() {
    static const Ops ops{"avx2", waveguide_channel_sum_avx2, min_distance_sq_avx2, dot_avx2,
                         axpy_avx2};
    return &ops;
}

}  // namespace passlab::kernels

#endif
