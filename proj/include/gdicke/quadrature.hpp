#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <vector>

namespace gdicke {

// 21-point Gauss-Kronrod rule with its embedded 10-point Gauss rule, on [-1, 1].
// Nodes are listed in increasing order.
struct GaussKronrod21 {
    static constexpr std::size_t size = 21;
    std::array<double, size> nodes;
    std::array<double, size> kronrod_weights;
    std::array<double, size> gauss_weights;  // zero on Kronrod-only nodes
};
const GaussKronrod21& gk21();

// Magnitude used for error control: Euclidean norm over all components.
inline double quad_norm(double v) { return std::abs(v); }
inline double quad_norm(std::complex<double> v) { return std::abs(v); }
template <std::size_t M>
double quad_norm(const std::array<std::complex<double>, M>& v) {
    double s = 0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(s);
}
template <std::size_t M>
double quad_norm(const std::array<double, M>& v) {
    double s = 0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

template <class V>
V quad_axpy(const V& acc, double a, const V& x) {
    if constexpr (requires { acc.size(); }) {
        V out = acc;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * x[i];
        return out;
    } else {
        return acc + a * x;
    }
}

struct QuadOptions {
    double abs_tol = 1e-300;
    double rel_tol = 1e-9;
    std::size_t max_intervals = 4000;
    // Record the final interval partition in QuadResult::panels.
    bool keep_panels = false;
};

template <class V>
struct QuadResult {
    V value{};
    double error = 0;
    std::size_t evaluations = 0;
    std::size_t intervals = 0;
    bool converged = false;
    std::vector<std::array<double, 2>> panels;
};

// One 21-point panel on [a, b]. `f(x, out)` evaluates the integrand at every
// abscissa of `x` into `out`; batches let the integrand vectorise.
template <class V, class F>
void gk21_panel(F& f, double a, double b, V& value, double& error, double& abs_value,
                std::vector<double>& xs, std::vector<V>& fx) {
    const auto& r = gk21();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    xs.resize(r.size);
    fx.resize(r.size);
    for (std::size_t i = 0; i < r.size; ++i) xs[i] = c + h * r.nodes[i];
    f(std::span<const double>(xs), std::span<V>(fx));
    V k{}, g{};
    double abs_k = 0;
    for (std::size_t i = 0; i < r.size; ++i) {
        k = quad_axpy(k, r.kronrod_weights[i], fx[i]);
        if (r.gauss_weights[i] != 0) g = quad_axpy(g, r.gauss_weights[i], fx[i]);
        abs_k += r.kronrod_weights[i] * quad_norm(fx[i]);
    }
    const V mean = quad_axpy(V{}, 0.5, k);
    double asc = 0;
    for (std::size_t i = 0; i < r.size; ++i)
        asc += r.kronrod_weights[i] * quad_norm(quad_axpy(fx[i], -1.0, mean));
    value = quad_axpy(V{}, h, k);
    const double diff = std::abs(h) * quad_norm(quad_axpy(k, -1.0, g));
    asc *= std::abs(h);
    abs_k *= std::abs(h);
    // QUADPACK-style error estimate.
    double err = diff;
    if (asc != 0 && err != 0) err = asc * std::min(1.0, std::pow(200 * err / asc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    if (abs_k > std::numeric_limits<double>::min() / (50 * eps)) err = std::max(err, 50 * eps * abs_k);
    error = err;
    abs_value = abs_k;
}

// Globally adaptive Gauss-Kronrod integration over consecutive intervals
// [b0,b1], [b1,b2], ... of `breaks` (which must be nondecreasing).
template <class V, class F>
QuadResult<V> integrate_adaptive(F&& f, std::span<const double> breaks, const QuadOptions& opt = {}) {
    struct Piece {
        double a, b;
        V value;
        double error;
        double abs_value;
        bool operator<(const Piece& o) const { return error < o.error; }
    };
    QuadResult<V> res;
    std::priority_queue<Piece> heap;
    std::vector<double> xs;
    std::vector<V> fx;
    V total{};
    double total_err = 0;
    double total_abs = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        Piece p{breaks[i], breaks[i + 1], V{}, 0, 0};
        gk21_panel(f, p.a, p.b, p.value, p.error, p.abs_value, xs, fx);
        res.evaluations += GaussKronrod21::size;
        total = quad_axpy(total, 1.0, p.value);
        total_err += p.error;
        total_abs += p.abs_value;
        heap.push(p);
    }
    // Cancellation between positive and negative parts limits the attainable
    // accuracy to a small multiple of eps times the integral of |f|.
    const double eps = std::numeric_limits<double>::epsilon();
    auto target = [&] {
        return std::max({opt.abs_tol, opt.rel_tol * quad_norm(total), 200 * eps * total_abs});
    };
    while (!heap.empty() && total_err > target() && heap.size() < opt.max_intervals) {
        Piece p = heap.top();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) break;  // interval exhausted at machine precision
        heap.pop();
        Piece l{p.a, mid, V{}, 0, 0}, r{mid, p.b, V{}, 0, 0};
        gk21_panel(f, l.a, l.b, l.value, l.error, l.abs_value, xs, fx);
        gk21_panel(f, r.a, r.b, r.value, r.error, r.abs_value, xs, fx);
        res.evaluations += 2 * GaussKronrod21::size;
        total = quad_axpy(total, -1.0, p.value);
        total = quad_axpy(total, 1.0, l.value);
        total = quad_axpy(total, 1.0, r.value);
        total_err += l.error + r.error - p.error;
        total_abs += l.abs_value + r.abs_value - p.abs_value;
        heap.push(l);
        heap.push(r);
    }
    // Re-sum to shed the drift accumulated by the incremental updates.
    V sum{};
    double err = 0;
    res.intervals = heap.size();
    while (!heap.empty()) {
        sum = quad_axpy(sum, 1.0, heap.top().value);
        err += heap.top().error;
        if (opt.keep_panels) res.panels.push_back({heap.top().a, heap.top().b});
        heap.pop();
    }
    res.value = sum;
    res.error = err;
    res.converged = err <= std::max({opt.abs_tol, opt.rel_tol * quad_norm(sum), 200 * eps * total_abs});
    return res;
}

// Scalar convenience wrapper around integrate_adaptive.
template <class V, class G>
QuadResult<V> integrate_pointwise(G&& g, std::span<const double> breaks, const QuadOptions& opt = {}) {
    auto batch = [&](std::span<const double> x, std::span<V> out) {
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = g(x[i]);
    };
    return integrate_adaptive<V>(batch, breaks, opt);
}

}  // namespace gdicke
