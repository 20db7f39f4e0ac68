#include <immintrin.h>

#include <cmath>

#include "gdicke/kernels.hpp"
#include "i0e_series.hpp"

namespace gdicke::kernels::avx2 {

namespace {

// exp(x) for x in roughly [-745, 709]; results below the normal range flush to 0.
// Cody-Waite reduction by ln 2 followed by a degree-12 Taylor polynomial on
// |r| <= ln2/2, which keeps the relative error near 1e-16.
inline __m256d exp_pd(__m256d x) {
    const __m256d lo = _mm256_set1_pd(-708.0);
    const __m256d hi = _mm256_set1_pd(709.0);
    const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
    x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);
    static constexpr double c[] = {1.0 / 479001600, 1.0 / 39916800, 1.0 / 3628800, 1.0 / 362880,
                                   1.0 / 40320,     1.0 / 5040,     1.0 / 720,     1.0 / 120,
                                   1.0 / 24,        1.0 / 6,        0.5,           1.0,
                                   1.0};
    __m256d p = _mm256_set1_pd(c[0]);
    for (int i = 1; i < 13; ++i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(c[i]));
    // Scale by 2^n through the exponent field.
    const __m128i ni = _mm256_cvtpd_epi32(n);
    __m256i e = _mm256_cvtepi32_epi64(ni);
    e = _mm256_slli_epi64(_mm256_add_epi64(e, _mm256_set1_epi64x(1023)), 52);
    const __m256d scaled = _mm256_mul_pd(p, _mm256_castsi256_pd(e));
    return _mm256_andnot_pd(underflow, scaled);
}

}  // namespace

void evanescent_sommerfeld(const EvanescentParams& p, const double* k, std::size_t n,
                           std::complex<double>* out) {
    const __m256d q2a = _mm256_set1_pd(p.q2_above);
    const __m256d q2b = _mm256_set1_pd(p.q2_below);
    const __m256d e1 = _mm256_set1_pd(p.eps_above);
    const __m256d e2 = _mm256_set1_pd(p.eps_below);
    const __m256d sr = _mm256_set1_pd(p.sheet_re);
    const __m256d si = _mm256_set1_pd(p.sheet_im);
    const __m256d m2z = _mm256_set1_pd(-2.0 * p.height);
    const __m256d pref = _mm256_set1_pd(1.0 / (4.0 * 3.14159265358979323846 * p.eps_above));
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    alignas(32) double re[4], im[4];
    for (; i + 4 <= n; i += 4) {
        const __m256d kk = _mm256_loadu_pd(k + i);
        const __m256d k2 = _mm256_mul_pd(kk, kk);
        const __m256d a = _mm256_sqrt_pd(_mm256_sub_pd(k2, q2a));
        const __m256d b = _mm256_sqrt_pd(_mm256_sub_pd(k2, q2b));
        const __m256d ab = _mm256_mul_pd(a, b);
        const __m256d nr = _mm256_mul_pd(_mm256_sub_pd(_mm256_setzero_pd(), sr), ab);
        const __m256d ni = _mm256_fnmadd_pd(si, ab, _mm256_fmsub_pd(e2, a, _mm256_mul_pd(e1, b)));
        const __m256d di = _mm256_fnmadd_pd(si, ab, _mm256_fmadd_pd(e1, b, _mm256_mul_pd(e2, a)));
        const __m256d inv = _mm256_div_pd(one, _mm256_fmadd_pd(nr, nr, _mm256_mul_pd(di, di)));
        const __m256d rr = _mm256_mul_pd(_mm256_fmadd_pd(nr, nr, _mm256_mul_pd(ni, di)), inv);
        const __m256d ri = _mm256_mul_pd(_mm256_fmsub_pd(ni, nr, _mm256_mul_pd(nr, di)), inv);
        const __m256d ex = exp_pd(_mm256_mul_pd(m2z, a));
        const __m256d mag = _mm256_div_pd(_mm256_mul_pd(_mm256_mul_pd(pref, k2), _mm256_mul_pd(kk, ex)), a);
        _mm256_store_pd(re, _mm256_mul_pd(mag, rr));
        _mm256_store_pd(im, _mm256_mul_pd(mag, ri));
        for (int j = 0; j < 4; ++j) out[i + j] = {re[j], im[j]};
    }
    if (i < n) scalar::evanescent_sommerfeld(p, k + i, n - i, out + i);
}

void gauss_bessel_row(double l2, double k, const double* kp, std::size_t n, double* out) {
    const __m256d two_l2k = _mm256_set1_pd(2.0 * l2 * k);
    const __m256d ml2 = _mm256_set1_pd(-l2);
    const __m256d vk = _mm256_set1_pd(k);
    const __m256d sw = _mm256_set1_pd(detail::i0e_switch);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two_pi = _mm256_set1_pd(2.0 * 3.14159265358979323846);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d q = _mm256_loadu_pd(kp + i);
        const __m256d x = _mm256_mul_pd(two_l2k, q);
        const __m256d small = _mm256_cmp_pd(x, sw, _CMP_LT_OQ);
        const __m256d d = _mm256_sub_pd(vk, q);
        const __m256d g = exp_pd(_mm256_mul_pd(ml2, _mm256_mul_pd(d, d)));
        if (_mm256_movemask_pd(small) != 0) {
            // Mixed or small arguments: fall back to the scalar series per lane.
            scalar::gauss_bessel_row(l2, k, kp + i, 4, out + i);
            continue;
        }
        const __m256d inv8x = _mm256_div_pd(one, _mm256_mul_pd(_mm256_set1_pd(8.0), x));
        __m256d term = one, sum = one;
        for (int t = 1; t < detail::asym_terms; ++t) {
            const double odd = 2.0 * t - 1.0;
            term = _mm256_mul_pd(term, _mm256_mul_pd(_mm256_set1_pd(odd * odd / t), inv8x));
            sum = _mm256_add_pd(sum, term);
        }
        const __m256d i0e = _mm256_div_pd(sum, _mm256_sqrt_pd(_mm256_mul_pd(two_pi, x)));
        _mm256_storeu_pd(out + i, _mm256_mul_pd(i0e, g));
    }
    if (i < n) scalar::gauss_bessel_row(l2, k, kp + i, n - i, out + i);
}

}  // namespace gdicke::kernels::avx2
