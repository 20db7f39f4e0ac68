#include "gdicke/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "gdicke/quadrature.hpp"

namespace gdicke {

std::string_view phase_name(Phase p) {
    switch (p) {
        case Phase::normal: return "normal";
        case Phase::spin_glass: return "spin_glass";
        case Phase::superradiant: return "superradiant";
    }
    return "unknown";
}

Phase phase_from_name(std::string_view name) {
    if (name == "normal") return Phase::normal;
    if (name == "spin_glass") return Phase::spin_glass;
    if (name == "superradiant") return Phase::superradiant;
    throw DomainError("unknown phase name: " + std::string(name));
}

namespace {

// The discriminant A^2 - 4 t M moves along a straight segment as t grows, so
// between two parameter values the continued root is w1 = w0 sqrt(d1 / d0)
// with the principal square root, unless d1 / d0 lies on the negative real
// axis. That happens only when the segment runs through zero.
struct Tracker {
    cplx a, m;
    double worst = 0;  // smallest |d| / scale met at a step end, inverted into a closeness ratio

    cplx disc(double t) const { return a * a - 4.0 * t * m; }

    cplx advance(cplx w, double t0, double t1) {
        const cplx d0 = disc(t0), d1 = disc(t1);
        const double scale = std::max(std::abs(a * a), std::abs(4.0 * m));
        const double tiny = 64 * std::numeric_limits<double>::epsilon() * scale;
        if (std::abs(d1) <= tiny) return 0;  // double root at the step end
        if (std::abs(d0) <= tiny) return std::sqrt(d1);
        const cplx r = d1 / d0;
        if (r.real() < 0 && std::abs(r.imag()) <= 64 * std::numeric_limits<double>::epsilon() * std::abs(r))
            throw BranchCollisionError("square-root branch collision in the Q_cq continuation");
        worst = std::max(worst, std::abs(std::arg(r)) / units::pi);
        return w * std::sqrt(r);
    }
};

}  // namespace

cplx solve_qcq(double lambda_c, double omega, const DressedInverse& d, int steps, ContinuationReport* report) {
    (void)lambda_c;
    (void)omega;
    if (steps < 8) throw DomainError("continuation needs at least 8 steps");
    const cplx a = d.a, m = d.mqc_cq;
    if (a == 0.0 && m == 0.0) throw SingularPointError("Q_cq is singular: A and M both vanish");
    Tracker tr{a, m};
    cplx w = a;
    double t_prev = 0;
    for (int j = 1; j <= steps; ++j) {
        const double t = std::ldexp(1.0, j - steps);
        w = tr.advance(w, t_prev, t);
        t_prev = t;
    }
    cplx x;
    if (std::abs(a + w) >= std::abs(a - w)) {
        if (a + w == 0.0) throw SingularPointError("Q_cq is singular");
        x = 2.0 / (a + w);
    } else {
        x = (a - w) / (2.0 * m);
    }
    // One Newton polish, kept only if it helps: near a double root the derivative vanishes.
    auto resid = [&](cplx v) { return std::abs(m * v * v - a * v + 1.0); };
    const cplx deriv = 2.0 * m * x - a;
    if (std::abs(deriv) > 0) {
        const cplx polished = x - (m * x * x - a * x + 1.0) / deriv;
        if (resid(polished) < resid(x)) x = polished;
    }
    if (report) {
        report->steps = steps;
        report->max_turn = tr.worst;
        const double sc = std::max({std::abs(m * x * x), std::abs(a * x), 1.0});
        report->residual = std::abs(m * x * x - a * x + 1.0) / sc;
    }
    return 0.5 * x;
}

template <class T>
SaddleContext::Hermite<T> SaddleContext::build(const std::vector<T>& y) const {
    const auto& x = nodes_;
    const std::size_t n = x.size();
    Hermite<T> h;
    h.y = y;
    h.d.assign(n, T{});
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 0) {
            h.d[i] = (y[1] - y[0]) / (x[1] - x[0]);
        } else if (i + 1 == n) {
            h.d[i] = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
        } else {
            const double h0 = x[i] - x[i - 1], h1 = x[i + 1] - x[i];
            h.d[i] = (h0 * h0 * (y[i + 1] - y[i]) + h1 * h1 * (y[i] - y[i - 1])) / (h0 * h1 * (h0 + h1));
        }
    }
    return h;
}

template <class T>
T SaddleContext::interp(const Hermite<T>& h, double omega) const {
    const auto& x = nodes_;
    if (omega <= x.front()) return h.y.front();
    if (omega >= x.back()) return h.y.back();
    const std::size_t i = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), omega) - x.begin()) - 1;
    const double dx = x[i + 1] - x[i];
    const double t = (omega - x[i]) / dx;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * h.y[i] + (h10 * dx) * h.d[i] + h01 * h.y[i + 1] + (h11 * dx) * h.d[i + 1];
}

SaddleContext::SaddleContext(const CouplingStats& stats, const SystemParams& p, SaddleOptions opt)
    : stats_(stats), params_(p), opt_(opt), grid_(stats.grid) {
    params_.validate();
    if (!grid_) throw DomainError("coupling statistics carry no grid");
    nodes_.assign(grid_->points().begin(), grid_->points().end());
    std::vector<cplx> g(nodes_.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = stats.h1.values[i] - stats.h2.values[i];
    g_ = build(g);
    sq_ = build(stats.square);
    a2_ = build(stats.abs2);
}

ContourTensor SaddleContext::tensor(double omega) const {
    const double n = params_.n_emitters;
    Matrix2 mo = PairMoments{interp(a2_, omega), interp(sq_, omega)}.block();
    for (auto& row : mo)
        for (auto& v : row) v *= n;
    ContourTensor t = contour_tensor(mo, omega, -omega);
    broadening_correction(params_, omega, -omega).apply(t);
    return t;
}

SaddleContext::Local SaddleContext::at(double omega) const {
    Local l;
    l.g = interp(g_, omega);
    if (omega == 0) l.g.imag(0);
    const double sgn = omega > 0 ? 1.0 : (omega < 0 ? -1.0 : 0.0);
    l.gamma = sgn * l.g.imag();
    l.mt = contour_entries(tensor(omega));
    return l;
}

SaddleContext::Local SaddleContext::at_node(std::size_t i) const { return at(nodes_[i]); }

cplx SaddleContext::a_value(double lambda_c, double omega, const Local& l) const {
    return lambda_c - omega * omega / params_.transition_freq + l.g;
}

DressedInverse SaddleContext::dressed(double lambda_c, double omega, const Local& l) const {
    return {a_value(lambda_c, omega, l), l.mt.qc_cq};
}

double SaddleContext::m_zero() const { return at(0.0).mt.qc_cq.real(); }
double SaddleContext::lambda_qc() const { return params_.n_emitters * stats_.h2.at_zero().real(); }
double SaddleContext::g_zero() const { return (stats_.h1.at_zero() - stats_.h2.at_zero()).real(); }

cplx q_cc_reg(double omega, cplx q, const SaddleContext::Local& l) {
    const double q2 = std::norm(q);
    const cplx num = 4.0 * q2 * (std::conj(q) * l.mt.cq_qq + q * l.mt.qc_qq - cplx(0, l.gamma));
    const cplx den = 1.0 - 4.0 * q2 * l.mt.cc_qq;
    // At criticality both vanish as omega -> 0, the numerator faster, and for
    // omega within rounding of zero the computed denominator is pure noise.
    if (std::abs(num) == 0) return 0;
    if (std::abs(den) <= 1e-12 && std::abs(omega) <= 1e-8) return 0;
    const cplx v = num / den;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw SingularPointError("Q_cc^reg denominator vanishes at omega = " + std::to_string(omega));
    return v;
}

namespace {

struct Evaluation {
    cplx q;
    SaddleContext::Local local;
};

Evaluation evaluate(double lambda_c, double omega, const SaddleContext& ctx) {
    Evaluation e{0, ctx.at(omega)};
    e.q = solve_qcq(lambda_c, omega, ctx.dressed(lambda_c, omega, e.local), ctx.options().continuation_steps);
    return e;
}

// A simple real-axis pole of the integrand at `centre`, integrated as a
// principal value over [centre - half_width, centre + half_width].
struct PoleWindow {
    double centre, half_width;
};

struct Breaks {
    std::vector<double> points;
    std::vector<PoleWindow> poles;
};

double den_value(double lambda_c, double omega, const SaddleContext& ctx) {
    const Evaluation e = evaluate(lambda_c, omega, ctx);
    return (1.0 - 4.0 * std::norm(e.q) * e.local.mt.cc_qq).real();
}

// Breakpoints on [0, W]: grid nodes, a geometric cluster at 0, points around
// each zero of Re(1/x) where the dressed response resonates, and a symmetric
// window around every sign change of the Q_cc^reg denominator.
Breaks frequency_breaks(double lambda_c, const SaddleContext& ctx) {
    const auto& g = ctx.grid();
    Breaks out;
    auto& br = out.points;
    const std::size_t z = g.zero_index();
    for (std::size_t i = z; i < g.size(); ++i) br.push_back(g[i]);
    const double w1 = g[z + 1];
    for (int j = 1; j <= 30; ++j) br.push_back(std::ldexp(w1, -j));
    auto inv_re = [&](double w) { return (0.5 / evaluate(lambda_c, w, ctx).q).real(); };
    std::vector<double> r, den;
    for (std::size_t i = z + 1; i < g.size(); ++i) {
        const Evaluation e = evaluate(lambda_c, g[i], ctx);
        r.push_back((0.5 / e.q).real());
        den.push_back((1.0 - 4.0 * std::norm(e.q) * e.local.mt.cc_qq).real());
    }
    for (std::size_t k = 0; k + 1 < r.size(); ++k) {
        if ((r[k] > 0) == (r[k + 1] > 0)) continue;
        double lo = g[z + 1 + k], hi = g[z + 2 + k];
        double flo = r[k];
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = inv_re(mid);
            if ((fm > 0) == (flo > 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        const double wr = 0.5 * (lo + hi);
        const double slope = (r[k + 1] - r[k]) / (g[z + 2 + k] - g[z + 1 + k]);
        const double im = std::abs((0.5 / evaluate(lambda_c, wr, ctx).q).imag());
        double width = slope != 0 ? im / std::abs(slope) : 0;
        if (!(width > 0)) width = 1e-9 * wr;
        for (double f : {-100.0, -30.0, -10.0, -3.0, -1.0, 0.0, 1.0, 3.0, 10.0, 30.0, 100.0}) {
            const double w = wr + f * width;
            if (w > g[z + 1 + k] && w < g[z + 2 + k]) br.push_back(w);
        }
    }
    for (std::size_t k = 0; k + 1 < den.size(); ++k) {
        if ((den[k] > 0) == (den[k + 1] > 0)) continue;
        const double a = g[z + 1 + k], b = g[z + 2 + k];
        double lo = a, hi = b, flo = den[k];
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = den_value(lambda_c, mid, ctx);
            if ((fm > 0) == (flo > 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        const double p = 0.5 * (lo + hi);
        const double h = std::min(p - a, b - p);
        if (!(h > 0))
            throw SingularPointError("Q_cc^reg denominator vanishes at the grid node omega = " + std::to_string(p));
        out.poles.push_back({p, h});
    }
    // Inside a window the integrand is symmetrised about the pole, so every
    // breakpoint there needs its mirror image as well.
    const std::size_t base = br.size();
    for (const auto& w : out.poles) {
        br.push_back(w.centre - w.half_width);
        br.push_back(w.centre);
        br.push_back(w.centre + w.half_width);
        for (std::size_t i = 0; i < base; ++i)
            if (std::abs(br[i] - w.centre) < w.half_width) br.push_back(2 * w.centre - br[i]);
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    return out;
}

// f with each pole window replaced by the even part about its centre, which
// integrates to the Cauchy principal value.
template <class F>
auto principal_value(F f, const std::vector<PoleWindow>& poles) {
    return [f = std::move(f), &poles](double w) {
        for (const auto& p : poles)
            if (std::abs(w - p.centre) < p.half_width) return 0.5 * (f(w) + f(2 * p.centre - w));
        return f(w);
    };
}

}  // namespace

NormalizationValue normalization_integral(double lambda_c, const SaddleContext& ctx) {
    const Breaks br = frequency_breaks(lambda_c, ctx);
    auto f = principal_value(
        [&](double w) {
            const Evaluation e = evaluate(lambda_c, w, ctx);
            return q_cc_reg(w, e.q, e.local);
        },
        br.poles);
    QuadOptions qo;
    qo.rel_tol = ctx.options().integral_rel_tol;
    qo.max_intervals = ctx.options().max_intervals;
    const auto res = integrate_pointwise<cplx>(f, br.points, qo);
    if (!res.converged) {
        const double rel = std::abs(res.value) > 0 ? res.error / std::abs(res.value) : res.error;
        throw ConvergenceError("normalization integral did not converge", rel);
    }
    // (i / 4 pi) over [-W, W] of an even integrand.
    const cplx s = cplx(0, 1) * res.value / (2 * units::pi);
    return {s.real(), s.imag(), res.evaluations, res.error / (2 * units::pi)};
}

double normalization_residual(double lambda_c, const SaddleContext& ctx) {
    const auto v = normalization_integral(lambda_c, ctx);
    if (std::abs(v.imag) > 1e-6 * std::max(1.0, std::abs(v.value)))
        throw ConvergenceError("normalization integral has a non-negligible imaginary part", std::abs(v.imag));
    return v.value - 2.0;
}

bool sr_criterion(const SaddleContext& ctx) {
    const double lam = ctx.lambda_qc();
    return lam > 0 && lam * lam > ctx.m_zero();
}

double lambda_sg(const SaddleContext& ctx) { return -ctx.g_zero() - 2.0 * std::sqrt(ctx.m_zero()); }

std::optional<double> lambda_sr(const SaddleContext& ctx) {
    const double lam = ctx.lambda_qc();
    if (!(lam > 0)) return std::nullopt;
    return -ctx.g_zero() - lam - ctx.m_zero() / lam;
}

SaddleSolution solve_at(double lambda_c, const SaddleContext& ctx) {
    const auto& g = ctx.grid();
    const GridPtr gp = ctx.grid_ptr();
    std::vector<cplx> qcq(g.size()), qcc(g.size());
    double backsub = 0;
    for (std::size_t i = g.zero_index(); i < g.size(); ++i) {
        const double w = g[i];
        const Evaluation e = evaluate(lambda_c, w, ctx);
        qcq[i] = e.q;
        qcc[i] = q_cc_reg(w, e.q, e.local);
        const cplx a = ctx.a_value(lambda_c, w, e.local);
        const cplx lhs = 0.5 / e.q;
        const cplx rhs = a - 2.0 * e.q * e.local.mt.qc_cq;
        backsub = std::max(backsub, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(a), 1e-300}));
    }
    for (std::size_t i = 0; i < g.zero_index(); ++i) {
        qcq[i] = std::conj(qcq[g.mirror(i)]);
        qcc[i] = qcc[g.mirror(i)];
    }
    SaddleSolution s;
    s.lambda_c = lambda_c;
    s.q_cq = ComplexSpectrum(gp, std::move(qcq));
    s.q_cc_reg = ComplexSpectrum(gp, std::move(qcc));
    s.residuals.qcq_backsub = backsub;
    const cplx q0 = s.q_cq.at_zero();
    const cplx det = -1.0 / (4.0 * q0 * std::conj(q0));
    s.residuals.det_l0_re = det.real();
    s.residuals.det_l0_im = det.imag();
    return s;
}

namespace {

struct RootResult {
    double lambda;
    int iterations;
    bool monotone;
};

// Locates s(lambda) = 2 given s(lambda_star) - 2 = r_star > 0.
RootResult normal_root(double lambda_star, double r_star, const SaddleContext& ctx) {
    const bool above = ctx.options().normal_search == NormalSearch::above_band;
    const double dir = above ? 1.0 : -1.0;
    const double start = above ? lambda_star + 4.0 * std::sqrt(ctx.m_zero()) : lambda_star;
    const double scale = std::max({std::sqrt(ctx.m_zero()), std::abs(ctx.g_zero()),
                                   1e-4 * ctx.params().transition_freq});
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto residual_or_nan = [&](double l) {
        try {
            return normalization_residual(l, ctx);
        } catch (const SingularPointError&) {
            return nan;
        } catch (const BranchCollisionError&) {
            return nan;
        }
    };
    std::string trace;
    double prev_l = start;
    double prev_r = above ? nan : r_star;
    bool monotone = true;
    int evals = 0;
    for (int j = 0; j < 120; ++j) {
        double l = start + dir * scale * std::ldexp(1e-6, j);
        double r = residual_or_nan(l);
        ++evals;
        trace += " (" + std::to_string(l) + ", " + std::to_string(r) + ")";
        if (std::isnan(r)) {
            prev_l = l;
            prev_r = nan;
            continue;
        }
        if (!std::isnan(prev_r) && r > prev_r) monotone = false;
        if (r >= 0) {
            prev_l = l;
            prev_r = r;
            continue;
        }
        if (std::isnan(prev_r)) {
            // The near end of the bracket is undefined: bisect toward it for a valid positive value.
            double bad = prev_l;
            for (int k = 0; k < 200 && std::isnan(prev_r); ++k) {
                const double mid = 0.5 * (bad + l);
                const double rm = residual_or_nan(mid);
                ++evals;
                if (std::isnan(rm)) {
                    bad = mid;
                } else if (rm < 0) {
                    l = mid;
                    r = rm;
                } else {
                    prev_l = mid;
                    prev_r = rm;
                }
                if (std::abs(l - bad) < ctx.options().root_tol) break;
            }
            if (std::isnan(prev_r))
                throw ConvergenceError("no valid bracket for the normal-phase root; scan:" + trace,
                                       std::abs(l - bad));
        }
        const double lo = std::min(prev_l, l), hi = std::max(prev_l, l);
        const double flo = lo == l ? r : prev_r, fhi = hi == l ? r : prev_r;
        std::uintmax_t iters = 200;
        const double tol = ctx.options().root_tol;
        auto stop = [tol](double x, double y) { return std::abs(y - x) <= tol; };
        auto fr = [&](double x) { return normalization_residual(x, ctx); };
        const auto br = boost::math::tools::toms748_solve(fr, lo, hi, flo, fhi, stop, iters);
        return {0.5 * (br.first + br.second), evals + static_cast<int>(iters), monotone};
    }
    throw ConvergenceError("normal-phase root not bracketed; scan:" + trace, 0);
}

}  // namespace

PhasePoint classify_phase(const SaddleContext& ctx) {
    PhasePoint pt;
    pt.params = ctx.params();
    pt.sr_criterion = sr_criterion(ctx);
    pt.candidates.lambda_sg = lambda_sg(ctx);
    pt.candidates.lambda_sr = lambda_sr(ctx);
    const double lstar = pt.sr_criterion ? *pt.candidates.lambda_sr : pt.candidates.lambda_sg;
    const auto nv = normalization_integral(lstar, ctx);
    const double s_star = nv.value;
    if (s_star <= 2.0) {
        SaddleSolution sol = solve_at(lstar, ctx);
        sol.q_ea = 2.0 * (2.0 - s_star);
        if (pt.sr_criterion) {
            const double lam = ctx.lambda_qc();
            sol.psi_c = std::sqrt(sol.q_ea * (1.0 - ctx.m_zero() / (lam * lam)));
            sol.phase = Phase::superradiant;
        } else {
            sol.phase = Phase::spin_glass;
        }
        sol.residuals.s_value = s_star;
        sol.residuals.normalization_imag = nv.imag;
        sol.residuals.normalization = s_star + 0.5 * sol.q_ea - 2.0;
        sol.residuals.constraint_full = constraint_full_check(sol, ctx);
        pt.solution = std::move(sol);
        return pt;
    }
    const RootResult rr = normal_root(lstar, s_star - 2.0, ctx);
    pt.candidates.lambda_normal = rr.lambda;
    SaddleSolution sol = solve_at(rr.lambda, ctx);
    sol.phase = Phase::normal;
    const auto nv2 = normalization_integral(rr.lambda, ctx);
    sol.residuals.s_value = nv2.value;
    sol.residuals.normalization_imag = nv2.imag;
    sol.residuals.normalization = nv2.value - 2.0;
    sol.residuals.root_iterations = rr.iterations;
    sol.residuals.monotone = rr.monotone;
    sol.residuals.constraint_full = constraint_full_check(sol, ctx);
    pt.solution = std::move(sol);
    return pt;
}

PhasePoint classify_phase(const CouplingStats& stats, const SystemParams& p, SaddleOptions opt) {
    const SaddleContext ctx(stats, p, opt);
    return classify_phase(ctx);
}

ComplexSpectrum spectral_response(const SaddleSolution& s) {
    std::vector<cplx> v(s.q_cq.values.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = -2.0 * s.q_cq.values[i].imag();
    return ComplexSpectrum(s.q_cq.grid, std::move(v));
}

double constraint_full_check(const SaddleSolution& s, const SaddleContext& ctx) {
    const double lc = s.lambda_c;
    const std::size_t idx_c = 0, idx_q = 1;
    // trace of L^-1 at omega, with L_ab = L0_ab - 2 sum Q_{a'b'}(-w) Mtilde_{a'b',ab}(w,-w).
    auto trace_inv = [&](double w) {
        const double aw = std::abs(w);
        const SaddleContext::Local pos = ctx.at(aw);
        const cplx q_pos = solve_qcq(lc, aw, ctx.dressed(lc, aw, pos), ctx.options().continuation_steps);
        const cplx qcc = q_cc_reg(aw, q_pos, pos);
        // Q(-w) in contour components; Q_cq(-w) = conj Q_cq(w), Q_qc(w) = conj Q_cq(w).
        const cplx qcq_w = w >= 0 ? q_pos : std::conj(q_pos);
        cplx qm[2][2];
        qm[idx_c][idx_c] = qcc;
        qm[idx_c][idx_q] = std::conj(qcq_w);
        qm[idx_q][idx_c] = qcq_w;
        qm[idx_q][idx_q] = 0;
        const ContourTensor t = ctx.tensor(w);
        SaddleContext::Local lw = w >= 0 ? pos : ctx.at(w);
        const cplx a = ctx.a_value(lc, w, lw);
        cplx l0[2][2] = {{0, a}, {std::conj(a), cplx(0, 2.0 * pos.gamma)}};
        cplx l[2][2];
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                cplx acc = l0[i][j];
                for (int ap = 0; ap < 2; ++ap)
                    for (int bp = 0; bp < 2; ++bp) acc -= 2.0 * qm[ap][bp] * t[contour_index(ap, bp, i, j)];
                l[i][j] = acc;
            }
        const cplx det = l[0][0] * l[1][1] - l[0][1] * l[1][0];
        return (l[0][0] + l[1][1]) / det;
    };
    const Breaks pos = frequency_breaks(lc, ctx);
    std::vector<double> br;
    for (auto it = pos.points.rbegin(); it != pos.points.rend(); ++it)
        if (*it > 0) br.push_back(-*it);
    br.insert(br.end(), pos.points.begin(), pos.points.end());
    std::vector<PoleWindow> poles = pos.poles;
    for (const auto& p : pos.poles) poles.push_back({-p.centre, p.half_width});
    QuadOptions qo;
    qo.rel_tol = ctx.options().integral_rel_tol;
    qo.max_intervals = 2 * ctx.options().max_intervals;
    const auto res = integrate_pointwise<cplx>(principal_value(trace_inv, poles), br, qo);
    const cplx integral = cplx(0, 1) * res.value / (8 * units::pi);
    const cplx q0 = s.q_cq.at_zero();
    const cplx det0 = -1.0 / (4.0 * q0 * std::conj(q0));
    const double lam = ctx.lambda_qc();
    const cplx mccqq0 = ctx.at(0.0).mt.cc_qq;
    const cplx zero_term = (s.psi_c * s.psi_c * lam * lam + s.q_ea * mccqq0) / (2.0 * det0);
    return (integral - zero_term).real() - 2.0;
}

}  // namespace gdicke
