#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

// Batched inner-loop kernels with a portable scalar reference implementation
// and an AVX2 implementation. The variant is chosen once at startup from the
// CPU features; the GDICKE_SIMD environment variable ("scalar" or "avx2")
// overrides the choice.
namespace gdicke::kernels {

enum class Isa { scalar, avx2 };

bool avx2_available();
Isa active_isa();
// Forces a variant (used by equivalence tests). Returns the previous one.
// Requesting avx2 on a machine without it keeps the scalar variant.
Isa set_isa(Isa isa);
std::string_view isa_name(Isa isa);

// Parameters of the evanescent Sommerfeld integrand at one frequency.
// For k above both light lines, kappa_j = sqrt(k^2 - q2_j) with q2_j = eps_j k0^2
// and the integrand is k^3 r_p exp(-2 kappa_1 z) / (4 pi eps_1 kappa_1).
struct EvanescentParams {
    double q2_above;   // eps_1 k0^2, nm^-2
    double q2_below;   // eps_2 k0^2, nm^-2
    double eps_above;
    double eps_below;
    double sheet_re;   // sigma / (omega eps0), nm
    double sheet_im;
    double height;     // z, nm
};

void evanescent_sommerfeld(const EvanescentParams& p, const double* k, std::size_t n,
                           std::complex<double>* out);

// out[i] = I0e(2 l2 k kp[i]) exp(-l2 (k - kp[i])^2)
void gauss_bessel_row(double l2, double k, const double* kp, std::size_t n, double* out);

namespace scalar {
void evanescent_sommerfeld(const EvanescentParams& p, const double* k, std::size_t n,
                           std::complex<double>* out);
void gauss_bessel_row(double l2, double k, const double* kp, std::size_t n, double* out);
}  // namespace scalar

namespace avx2 {
void evanescent_sommerfeld(const EvanescentParams& p, const double* k, std::size_t n,
                           std::complex<double>* out);
void gauss_bessel_row(double l2, double k, const double* kp, std::size_t n, double* out);
}  // namespace avx2

}  // namespace gdicke::kernels
