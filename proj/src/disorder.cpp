#include "gdicke/disorder.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "gdicke/kernels.hpp"

namespace gdicke {

double PairDistribution::density(double r) const {
    if (r < 0) return 0;
    const double l2 = cloud_width * cloud_width;
    return r / (2 * l2) * std::exp(-r * r / (4 * l2));
}

double PairDistribution::cdf(double r) const {
    if (r <= 0) return 0;
    return -std::expm1(-r * r / (4 * cloud_width * cloud_width));
}

namespace {

std::atomic<std::uint64_t> g_stats_computations{0};

cplx checked(const QuadResult<cplx>& r, const char* what) {
    if (!r.converged) {
        const double rel = std::abs(r.value) > 0 ? r.error / std::abs(r.value) : r.error;
        throw ConvergenceError(std::string(what) + " quadrature did not converge", rel);
    }
    return r.value;
}

}  // namespace

cplx mean_h1(double omega, const SystemParams& p, const DisorderOptions& opt) {
    const double pref = coupling_prefactor(p);
    if (pref == 0) return 0;
    cplx v = pref * checked(sommerfeld_integral(omega, p.height, LayerStack::from(p), Weight::unit(), opt.em),
                            "self-coupling");
    if (omega == 0) v.imag(0);
    return v;
}

cplx mean_h2(double omega, const SystemParams& p, const DisorderOptions& opt) {
    const double pref = coupling_prefactor(p);
    if (pref == 0) return 0;
    cplx v = pref * checked(sommerfeld_integral(omega, p.height, LayerStack::from(p),
                                                Weight::gaussian(p.cloud_width), opt.em),
                            "pair-mean");
    if (omega == 0) v.imag(0);
    return v;
}

PairCorrelators pair_correlators(double omega, double omega_p, const SystemParams& p,
                                 const DisorderOptions& opt) {
    const double pref = coupling_prefactor(p);
    if (pref == 0) return {0, 0};
    const LayerStack stack = LayerStack::from(p);
    const SommerfeldIntegrand outer(omega, p.height, stack);
    const SommerfeldIntegrand inner(omega_p, p.height, stack);
    const double floor = opt.em.decay_floor;
    const double l2 = p.cloud_width * p.cloud_width;
    const double half_window = std::sqrt(-std::log(floor)) / p.cloud_width;

    const double kmax_out = outer.k_cutoff(floor);
    const double kmax_in = inner.k_cutoff(floor);
    std::vector<double> outer_breaks;
    for (double k : outer.breakpoints(floor, opt.em.sp_splits)) outer_breaks.push_back(outer.u_of_k(k));
    const std::vector<double> inner_k = inner.breakpoints(floor, opt.em.sp_splits);

    QuadOptions in_opt;
    in_opt.rel_tol = opt.inner_rel_tol;
    in_opt.max_intervals = opt.em.max_intervals;
    QuadOptions out_opt;
    out_opt.rel_tol = opt.outer_rel_tol;
    out_opt.max_intervals = opt.em.max_intervals;

    std::vector<double> kp, kern, ub;
    auto inner_integral = [&](double k) -> cplx {
        const double a = std::max(0.0, k - half_window);
        const double b = std::min(kmax_in, k + half_window);
        if (!(b > a)) return 0;
        ub.clear();
        ub.push_back(inner.u_of_k(a));
        ub.push_back(inner.u_of_k(b));
        if (k > a && k < b) ub.push_back(inner.u_of_k(k));
        for (double q : inner_k)
            if (q > a && q < b) ub.push_back(inner.u_of_k(q));
        std::sort(ub.begin(), ub.end());
        ub.erase(std::unique(ub.begin(), ub.end()), ub.end());
        auto f = [&](std::span<const double> u, std::span<cplx> out) {
            kp.resize(u.size());
            kern.resize(u.size());
            inner.eval(u, kp, out);
            kernels::gauss_bessel_row(l2, k, kp.data(), u.size(), kern.data());
            for (std::size_t j = 0; j < u.size(); ++j) out[j] *= kern[j];
        };
        return checked(integrate_adaptive<cplx>(f, ub, in_opt), "pair-kernel inner");
    };

    using V = std::array<cplx, 2>;
    std::vector<double> ko;
    std::vector<cplx> fo;
    auto g = [&](std::span<const double> u, std::span<V> out) {
        ko.resize(u.size());
        fo.resize(u.size());
        outer.eval(u, ko, fo);
        for (std::size_t j = 0; j < u.size(); ++j) {
            const cplx h = inner_integral(ko[j]);
            out[j] = {fo[j] * h, fo[j] * std::conj(h)};
        }
    };
    std::vector<double> ob;
    for (double u : outer_breaks)
        if (outer.k_of_u(u) <= kmax_out) ob.push_back(u);
    const auto r = integrate_adaptive<V>(g, ob, out_opt);
    if (!r.converged) {
        const double n = quad_norm(r.value);
        throw ConvergenceError("pair-kernel outer quadrature did not converge", n > 0 ? r.error / n : r.error);
    }
    const double p2 = pref * pref;
    return {p2 * r.value[0], p2 * r.value[1]};
}

Matrix2 covariance_from_correlators(cplx c, cplx d) {
    Matrix2 m{};
    m[0][0] = 0.5 * (c.real() + d.real());
    m[0][1] = 0.5 * (c.imag() - d.imag());
    m[1][0] = 0.5 * (c.imag() + d.imag());
    m[1][1] = 0.5 * (d.real() - c.real());
    return m;
}

Matrix2 covariance_M(double omega, double omega_p, const SystemParams& p, const DisorderOptions& opt) {
    const PairCorrelators pc = pair_correlators(omega, omega_p, p, opt);
    const cplx m = mean_h2(omega, p, opt);
    const cplx mp = mean_h2(omega_p, p, opt);
    return covariance_from_correlators(pc.c - m * mp, pc.d - m * std::conj(mp));
}

Matrix2 PairMoments::block() const {
    // At (w, -w): C = E|dh|^2 and D = E[dh^2].
    return covariance_from_correlators(cplx(abs2, 0), square);
}

PairMoments pair_moments(double omega, const SystemParams& p, const DisorderOptions& opt) {
    const PairCorrelators pc = pair_correlators(omega, -omega, p, opt);
    const cplx m = mean_h2(omega, p, opt);
    PairMoments out{pc.c.real() - std::norm(m), pc.d - m * m};
    if (omega == 0) out.square.imag(0);
    return out;
}

std::uint64_t stats_computations() { return g_stats_computations.load(); }

CouplingStats compute_stats(const SystemParams& p, GridPtr grid, const DisorderOptions& opt) {
    p.validate();
    g_stats_computations.fetch_add(1);
    const std::size_t n = grid->size();
    std::vector<cplx> h1(n), h2(n), sq(n);
    std::vector<double> a2(n);
    for (std::size_t i = grid->zero_index(); i < n; ++i) {
        const double w = (*grid)[i];
        h1[i] = mean_h1(w, p, opt);
        h2[i] = mean_h2(w, p, opt);
        const PairMoments pm = pair_moments(w, p, opt);
        a2[i] = pm.abs2;
        sq[i] = pm.square;
        const std::size_t j = grid->mirror(i);
        a2[j] = a2[i];
        sq[j] = std::conj(sq[i]);
    }
    mirror_conjugate(*grid, h1);
    mirror_conjugate(*grid, h2);
    return CouplingStats{grid, ComplexSpectrum(grid, std::move(h1)), ComplexSpectrum(grid, std::move(h2)),
                         std::move(a2), std::move(sq)};
}

ScaledStats scale_stats(const CouplingStats& s, double n_emitters) {
    ScaledStats out;
    out.grid = s.grid;
    std::vector<cplx> hd(s.h1.values), ho(s.h2.values);
    for (auto& v : hd) v *= n_emitters;
    for (auto& v : ho) v *= n_emitters;
    out.hd = ComplexSpectrum(s.grid, std::move(hd));
    out.ho = ComplexSpectrum(s.grid, std::move(ho));
    out.abs2 = s.abs2;
    out.square = s.square;
    for (auto& v : out.abs2) v *= n_emitters;
    for (auto& v : out.square) v *= n_emitters;
    return out;
}

Matrix2c v_matrix(int which, double omega) {
    const cplx i(0, 1);
    if (which == 1) return {{{0, 1}, {1, 0}}};
    const double s = omega > 0 ? 1.0 : (omega < 0 ? -1.0 : 0.0);
    return {{{0.0, -i}, {i, 2.0 * s * i}}};
}

ContourTensor contour_tensor(const Matrix2& mo, double omega, double omega_p) {
    const Matrix2c v[2] = {v_matrix(1, omega), v_matrix(2, omega)};
    const Matrix2c w[2] = {v_matrix(1, omega_p), v_matrix(2, omega_p)};
    ContourTensor t{};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int ap = 0; ap < 2; ++ap)
                for (int bp = 0; bp < 2; ++bp) {
                    cplx acc = 0;
                    for (int s = 0; s < 2; ++s)
                        for (int u = 0; u < 2; ++u) acc += v[s][a][ap] * mo[s][u] * w[u][b][bp];
                    t[contour_index(a, b, ap, bp)] = acc;
                }
    return t;
}

ContourMatrix contour_entries(const ContourTensor& t) {
    return {t[contour_index(1, 0, 0, 1)], t[contour_index(0, 0, 1, 1)], t[contour_index(0, 1, 1, 1)],
            t[contour_index(1, 0, 1, 1)]};
}

ContourMatrix assemble_contour_matrix(const ScaledStats& s, std::size_t i) {
    const double w = (*s.grid)[i];
    return contour_entries(contour_tensor(s.mo(i), w, -w));
}

void BroadeningCorrection::apply(ContourTensor& t) const {
    if (!active) return;
    for (auto& v : t) v += scale * v;
    t[contour_index(0, 1, 1, 0)] += diagonal;
    t[contour_index(1, 0, 0, 1)] += diagonal;
    t[contour_index(0, 0, 1, 1)] += diagonal;
    t[contour_index(1, 1, 0, 0)] += diagonal;
}

void BroadeningCorrection::apply(ContourMatrix& m) const {
    if (!active) return;
    m.qc_cq += scale * m.qc_cq + diagonal;
    m.cc_qq += scale * m.cc_qq + diagonal;
    m.cq_qq += scale * m.cq_qq;
    m.qc_qq += scale * m.qc_qq;
}

BroadeningCorrection broadening_correction(const SystemParams& p, double omega, double omega_p) {
    BroadeningCorrection b;
    if (p.broadening > 0) {
        const double wz2 = p.transition_freq * p.transition_freq;
        b.active = true;
        b.scale = -1.0 / p.n_emitters;
        b.diagonal = p.broadening * p.broadening * omega * omega * omega_p * omega_p / (8 * wz2 * wz2);
    }
    return b;
}

std::vector<double> sample_separations(double cloud_width, std::size_t n, std::uint64_t seed) {
    const CounterRng rng(seed, 1);
    std::vector<double> out(n);
    const double two_pi = 2 * units::pi;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t c = 4 * static_cast<std::uint64_t>(i);
        const double ra = std::sqrt(-2 * std::log(rng.uniform(c)));
        const double ta = two_pi * rng.uniform(c + 1);
        const double rb = std::sqrt(-2 * std::log(rng.uniform(c + 2)));
        const double tb = two_pi * rng.uniform(c + 3);
        const double dx = cloud_width * (ra * std::cos(ta) - rb * std::cos(tb));
        const double dy = cloud_width * (ra * std::sin(ta) - rb * std::sin(tb));
        out[i] = std::hypot(dx, dy);
    }
    return out;
}

OracleResult monte_carlo_oracle(double omega, double omega_p, const SystemParams& p,
                                std::size_t n_samples, std::uint64_t seed, const DisorderOptions& opt) {
    if (n_samples < 2) throw DomainError("oracle needs at least two samples");
    const std::vector<double> r = sample_separations(p.cloud_width, n_samples, seed);
    const double r_max = 8 * p.cloud_width;
    const CouplingTable t1(omega, p, r_max, opt.em);
    std::vector<cplx> h(n_samples), g(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) h[i] = t1(r[i]);
    if (omega_p == omega) {
        g = h;
    } else {
        const CouplingTable t2(omega_p, p, r_max, opt.em);
        for (std::size_t i = 0; i < n_samples; ++i) g[i] = t2(r[i]);
    }
    const double n = static_cast<double>(n_samples);
    cplx mh = 0, mg = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        mh += h[i];
        mg += g[i];
    }
    mh /= n;
    mg /= n;
    OracleResult out;
    out.omega = omega;
    out.omega_p = omega_p;
    out.samples = n_samples;
    out.mean = mh;
    double vr = 0, vi = 0;
    double sum[2][2] = {}, sum2[2][2] = {};
    for (std::size_t i = 0; i < n_samples; ++i) {
        const double x[2] = {h[i].real() - mh.real(), h[i].imag() - mh.imag()};
        const double y[2] = {g[i].real() - mg.real(), g[i].imag() - mg.imag()};
        vr += x[0] * x[0];
        vi += x[1] * x[1];
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const double q = x[a] * y[b];
                sum[a][b] += q;
                sum2[a][b] += q * q;
            }
    }
    out.mean_stderr = cplx(std::sqrt(vr / (n - 1) / n), std::sqrt(vi / (n - 1) / n));
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const double m = sum[a][b] / n;
            out.cov[a][b] = sum[a][b] / (n - 1);
            out.cov_stderr[a][b] = std::sqrt(std::max(0.0, sum2[a][b] / n - m * m) / n);
        }
    return out;
}

}  // namespace gdicke
