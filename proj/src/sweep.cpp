#include "gdicke/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace gdicke {

Axis::Scale scale_from_name(std::string_view name) {
    if (name == "linear") return Axis::Scale::linear;
    if (name == "log") return Axis::Scale::log;
    throw DomainError("axis scale must be 'linear' or 'log', got '" + std::string(name) + "'");
}

std::string_view scale_name(Axis::Scale s) { return s == Axis::Scale::log ? "log" : "linear"; }

void Axis::validate() const {
    if (!is_param_name(param)) throw DomainError("axis parameter '" + param + "' is not a system parameter");
    if (points < 1) throw DomainError("axis '" + param + "' needs at least one point");
    if (points > 1 && !(max > min)) throw DomainError("axis '" + param + "' needs max > min");
    if (scale == Scale::log && !(min > 0)) throw DomainError("log axis '" + param + "' needs a positive range");
}

double Axis::value(std::size_t i) const {
    if (points == 1 || i == 0) return min;
    if (i + 1 == points) return max;
    const double t = static_cast<double>(i) / static_cast<double>(points - 1);
    if (scale == Scale::log) return std::exp(std::log(min) + t * (std::log(max) - std::log(min)));
    return min + t * (max - min);
}

double Axis::midpoint(double a, double b) const {
    return scale == Scale::log ? std::sqrt(a * b) : 0.5 * (a + b);
}

void SweepSpec::validate() const {
    axis1.validate();
    axis2.validate();
    if (axis1.param == axis2.param) throw DomainError("sweep axes must name different parameters");
    grid.validate();
    params_at(axis1.value(0), axis2.value(0)).validate();
}

SystemParams SweepSpec::params_at(double x1, double x2) const {
    SystemParams p = fixed;
    set_param(p, axis1.param, x1);
    set_param(p, axis2.param, x2);
    return p;
}

SweepSpec sweep_from_config(const Config& c) {
    SweepSpec s;
    s.fixed = c.params();
    s.grid = c.grid();
    auto axis = [&](const std::string& pre) {
        Axis a;
        auto name = c.get_string(pre + ".param");
        if (!name) throw DomainError("missing " + pre + ".param");
        a.param = *name;
        auto mn = c.get_double(pre + ".min");
        auto mx = c.get_double(pre + ".max");
        auto n = c.get_int(pre + ".points");
        if (!mn || !mx || !n) throw DomainError(pre + " needs min, max and points");
        if (*n < 1) throw DomainError(pre + ".points must be positive");
        a.min = *mn;
        a.max = *mx;
        a.points = static_cast<std::size_t>(*n);
        if (auto sc = c.get_string(pre + ".scale")) a.scale = scale_from_name(*sc);
        return a;
    };
    s.axis1 = axis("axis1");
    s.axis2 = axis("axis2");
    if (auto ns = c.get_string("saddle.normal_search")) {
        if (*ns == "below_edge")
            s.saddle.normal_search = NormalSearch::below_edge;
        else if (*ns == "above_band")
            s.saddle.normal_search = NormalSearch::above_band;
        else
            throw DomainError("saddle.normal_search must be 'below_edge' or 'above_band'");
    }
    s.validate();
    return s;
}

CellResult CellResult::from(double x1, double x2, const PhasePoint& pt) {
    CellResult c;
    c.x1 = x1;
    c.x2 = x2;
    c.ok = true;
    c.phase = pt.solution.phase;
    c.lambda_c = pt.solution.lambda_c;
    c.q_ea = pt.solution.q_ea;
    c.psi_c = pt.solution.psi_c;
    c.lambda_sg = pt.candidates.lambda_sg;
    c.lambda_sr = pt.candidates.lambda_sr;
    c.sr_criterion = pt.sr_criterion;
    c.residuals = pt.solution.residuals;
    return c;
}

std::size_t PhaseDiagram::failed_cells() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const CellResult& c) { return !c.ok; }));
}

bool PhaseDiagram::failed() const { return !cells.empty() && 5 * failed_cells() > cells.size(); }

PhasePoint classify_point(const SystemParams& p, const GridSettings& grid, const SaddleOptions& saddle,
                          const DisorderOptions& disorder, StatsCache& cache) {
    p.validate();
    const CouplingStats stats = cache.get_or_compute(p, grid.make(p), disorder);
    return classify_phase(stats, p, saddle);
}

namespace {

// Runs f(i) for i in [0, n) on `threads` workers.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) f(i);
        });
}

CellResult classify_cell(const SweepSpec& spec, double x1, double x2, StatsCache& cache) {
    try {
        return CellResult::from(x1, x2, classify_point(spec.params_at(x1, x2), spec.grid, spec.saddle,
                                                      spec.disorder, cache));
    } catch (const std::exception& e) {
        CellResult c;
        c.x1 = x1;
        c.x2 = x2;
        c.ok = false;
        c.error = e.what();
        return c;
    }
}

}  // namespace

PhaseDiagram run_sweep(const SweepSpec& spec, const SweepRuntime& rt) {
    spec.validate();
    StatsCache local;
    StatsCache& cache = rt.cache ? *rt.cache : local;
    PhaseDiagram d;
    d.spec = spec;
    d.cells.resize(spec.cells());
    const std::size_t n2 = spec.axis2.points;
    parallel_for(d.cells.size(), rt.threads, [&](std::size_t k) {
        d.cells[k] = classify_cell(spec, spec.axis1.value(k / n2), spec.axis2.value(k % n2), cache);
    });
    return d;
}

namespace {

bool pair_matches(const CellResult& lo, const CellResult& hi, Phase a, Phase b) {
    if (!lo.ok || !hi.ok) return false;
    return (lo.phase == a && hi.phase == b) || (lo.phase == b && hi.phase == a);
}

struct Bracket {
    std::size_t column;
    std::size_t j;  // cells j and j + 1 along axis2
};

std::vector<Bracket> brackets(const PhaseDiagram& d, Phase a, Phase b) {
    std::vector<Bracket> out;
    for (std::size_t i = 0; i < d.spec.axis1.points; ++i)
        for (std::size_t j = 0; j + 1 < d.spec.axis2.points; ++j)
            if (pair_matches(d.at(i, j), d.at(i, j + 1), a, b)) out.push_back({i, j});
    return out;
}

std::string pair_text(Phase a, Phase b) {
    return std::string(phase_name(a)) + "/" + std::string(phase_name(b));
}

// Bisects on axis2 given a predicate that is true on the `lo` side.
template <class Pred>
double bisect_axis(const Axis& ax, double lo, double hi, double rel_tol, Pred on_lo_side) {
    for (int it = 0; it < 200; ++it) {
        const double mid = ax.midpoint(lo, hi);
        if (std::abs(hi - lo) <= rel_tol * std::abs(mid)) return mid;
        if (on_lo_side(mid))
            lo = mid;
        else
            hi = mid;
    }
    return ax.midpoint(lo, hi);
}

}  // namespace

Boundary refine_boundary(const PhaseDiagram& d, Phase a, Phase b, const SweepRuntime& rt, double rel_tol) {
    Boundary out;
    out.a = a;
    out.b = b;
    const auto br = brackets(d, a, b);
    if (br.empty()) {
        out.notice = "no adjacent " + pair_text(a, b) + " cells";
        return out;
    }
    StatsCache local;
    StatsCache& cache = rt.cache ? *rt.cache : local;
    const auto& spec = d.spec;
    std::vector<std::array<double, 2>> pts(br.size());
    std::vector<std::string> errors(br.size());
    parallel_for(br.size(), rt.threads, [&](std::size_t k) {
        const auto [i, j] = br[k];
        const CellResult& lo = d.at(i, j);
        const double x1 = lo.x1;
        try {
            const double x = bisect_axis(spec.axis2, lo.x2, d.at(i, j + 1).x2, rel_tol, [&](double x2) {
                const PhasePoint pt =
                    classify_point(spec.params_at(x1, x2), spec.grid, spec.saddle, spec.disorder, cache);
                return pt.solution.phase == lo.phase;
            });
            pts[k] = {x1, x};
        } catch (const std::exception& e) {
            errors[k] = e.what();
        }
    });
    for (std::size_t k = 0; k < br.size(); ++k) {
        if (errors[k].empty())
            out.points.push_back(pts[k]);
        else
            out.notice += (out.notice.empty() ? "" : "; ") + errors[k];
    }
    return out;
}

Boundary analytic_sg_sr_boundary(const PhaseDiagram& d, const SweepRuntime& rt, double rel_tol) {
    Boundary out;
    out.a = Phase::spin_glass;
    out.b = Phase::superradiant;
    const auto br = brackets(d, out.a, out.b);
    if (br.empty()) {
        out.notice = "no adjacent " + pair_text(out.a, out.b) + " cells";
        return out;
    }
    const auto& spec = d.spec;
    const DisorderOptions opt = spec.disorder;
    auto criterion = [&](const SystemParams& p) {
        const double n = p.n_emitters;
        const double lam = n * mean_h2(0.0, p, opt).real();
        const double m = n * pair_moments(0.0, p, opt).block()[0][0] * (1.0 + broadening_correction(p, 0.0, 0.0).scale);
        return lam > 0 && lam * lam > m;
    };
    std::vector<std::array<double, 2>> pts(br.size());
    parallel_for(br.size(), rt.threads, [&](std::size_t k) {
        const auto [i, j] = br[k];
        const CellResult& lo = d.at(i, j);
        const bool lo_sr = criterion(spec.params_at(lo.x1, lo.x2));
        const double x = bisect_axis(spec.axis2, lo.x2, d.at(i, j + 1).x2, rel_tol,
                                     [&](double x2) { return criterion(spec.params_at(lo.x1, x2)) == lo_sr; });
        pts[k] = {lo.x1, x};
    });
    out.points = std::move(pts);
    return out;
}

}  // namespace gdicke
