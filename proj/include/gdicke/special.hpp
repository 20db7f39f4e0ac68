#pragma once

namespace gdicke {

// Exponentially scaled modified Bessel function I0(x) exp(-x), x >= 0.
double bessel_i0e(double x);

// Bessel function of the first kind J0(x).
double bessel_j0(double x);

// Pair kernel of two Bessel functions averaged over the Gaussian separation
// density: I0(2 l2 k kp) exp(-l2 (k^2 + kp^2)) with l2 = L^2, evaluated in the
// overflow-free form I0e(2 l2 k kp) exp(-l2 (k - kp)^2).
double gauss_bessel_pair(double l2, double k, double kp);

}  // namespace gdicke
