#pragma once

#include <cmath>

namespace gdicke::detail {

// Below this argument the power series is summed; above it the asymptotic
// expansion converges to full double precision within asym_terms terms.
inline constexpr double i0e_switch = 30.0;
inline constexpr int asym_terms = 18;

inline double i0e_asymptotic(double x) {
    // I0(x) e^-x ~ (2 pi x)^-1/2 sum_k ((2k-1)!!)^2 / (k! (8x)^k)
    const double inv8x = 1.0 / (8.0 * x);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < asym_terms; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= odd * odd * inv8x / k;
        sum += term;
    }
    return sum / std::sqrt(2.0 * 3.14159265358979323846 * x);
}

inline double i0e_series(double x) {
    const double y = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= y / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum * std::exp(-x);
}

inline double i0e_scalar(double x) {
    x = std::abs(x);
    return x < i0e_switch ? i0e_series(x) : i0e_asymptotic(x);
}

}  // namespace gdicke::detail
