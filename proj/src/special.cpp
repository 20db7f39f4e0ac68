#include "gdicke/special.hpp"

#include <cmath>

#include "kernels/i0e_series.hpp"

namespace gdicke {

double bessel_i0e(double x) { return detail::i0e_scalar(x); }

// glibc's j0 agrees with boost::math::cyl_bessel_j(0, x) to about 1e-16 and is
// roughly nine times faster, which matters for the separation tables.
double bessel_j0(double x) { return ::j0(x); }

double gauss_bessel_pair(double l2, double k, double kp) {
    const double d = k - kp;
    return detail::i0e_scalar(2 * l2 * k * kp) * std::exp(-l2 * d * d);
}

}  // namespace gdicke
