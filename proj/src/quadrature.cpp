#include "gdicke/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace gdicke {

namespace {

GaussKronrod21 build_gk21() {
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    using gauss = boost::math::quadrature::gauss<double, 10>;
    // Boost stores the nonnegative Kronrod abscissae (0 first); the 10-point
    // Gauss nodes are the odd-indexed ones.
    const auto& xk = kronrod::abscissa();
    const auto& wk = kronrod::weights();
    const auto& wg = gauss::weights();
    GaussKronrod21 r{};
    const std::size_t half = 10;
    for (std::size_t j = 0; j <= half; ++j) {
        const double gw = (j % 2 == 1) ? wg[j / 2] : 0.0;
        r.nodes[half + j] = xk[j];
        r.nodes[half - j] = -xk[j];
        r.kronrod_weights[half + j] = r.kronrod_weights[half - j] = wk[j];
        r.gauss_weights[half + j] = r.gauss_weights[half - j] = gw;
    }
    return r;
}

}  // namespace

const GaussKronrod21& gk21() {
    static const GaussKronrod21 rule = build_gk21();
    return rule;
}

}  // namespace gdicke
