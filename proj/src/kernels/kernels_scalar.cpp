#include <cmath>

#include "gdicke/kernels.hpp"
#include "i0e_series.hpp"

namespace gdicke::kernels::scalar {

void evanescent_sommerfeld(const EvanescentParams& p, const double* k, std::size_t n,
                           std::complex<double>* out) {
    const double pref = 1.0 / (4.0 * 3.14159265358979323846 * p.eps_above);
    for (std::size_t i = 0; i < n; ++i) {
        const double kk = k[i];
        const double k2 = kk * kk;
        const double a = std::sqrt(k2 - p.q2_above);
        const double b = std::sqrt(k2 - p.q2_below);
        // With k_jz = i kappa_j the Fresnel numerator and denominator are
        // -S a b + i(eps2 a - eps1 b) and -S a b + i(eps1 b + eps2 a).
        const double ab = a * b;
        const double nr = -p.sheet_re * ab;
        const double ni = p.eps_below * a - p.eps_above * b - p.sheet_im * ab;
        const double dr = nr;
        const double di = p.eps_above * b + p.eps_below * a - p.sheet_im * ab;
        const double inv = 1.0 / (dr * dr + di * di);
        const double rr = (nr * dr + ni * di) * inv;
        const double ri = (ni * dr - nr * di) * inv;
        const double mag = pref * k2 * kk * std::exp(-2.0 * a * p.height) / a;
        out[i] = {mag * rr, mag * ri};
    }
}

void gauss_bessel_row(double l2, double k, const double* kp, std::size_t n, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double d = k - kp[i];
        out[i] = detail::i0e_scalar(2.0 * l2 * k * kp[i]) * std::exp(-l2 * d * d);
    }
}

}  // namespace gdicke::kernels::scalar
