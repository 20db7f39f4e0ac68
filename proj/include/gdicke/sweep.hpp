#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "gdicke/cache.hpp"
#include "gdicke/config.hpp"
#include "gdicke/saddle.hpp"

namespace gdicke {

struct Axis {
    enum class Scale { linear, log };
    std::string param;
    double min = 0, max = 0;
    std::size_t points = 2;
    Scale scale = Scale::linear;

    void validate() const;
    double value(std::size_t i) const;
    // Midpoint of two axis values in the axis' own metric.
    double midpoint(double a, double b) const;
};

Axis::Scale scale_from_name(std::string_view name);
std::string_view scale_name(Axis::Scale s);

struct SweepSpec {
    Axis axis1, axis2;
    SystemParams fixed;
    GridSettings grid;
    SaddleOptions saddle;
    DisorderOptions disorder;

    void validate() const;
    SystemParams params_at(double x1, double x2) const;
    std::size_t cells() const { return axis1.points * axis2.points; }
};

// Reads axis1.* / axis2.* keys plus system, grid and saddle settings.
SweepSpec sweep_from_config(const Config& c);

struct CellResult {
    double x1 = 0, x2 = 0;
    bool ok = false;
    std::string error;
    Phase phase = Phase::normal;
    double lambda_c = 0, q_ea = 0, psi_c = 0;
    double lambda_sg = 0;
    std::optional<double> lambda_sr;
    bool sr_criterion = false;
    SaddleResiduals residuals;

    static CellResult from(double x1, double x2, const PhasePoint& pt);
};

struct Boundary {
    Phase a = Phase::normal, b = Phase::normal;
    // Points (axis1 value, axis2 value) ordered along axis1.
    std::vector<std::array<double, 2>> points;
    std::string notice;
};

struct PhaseDiagram {
    SweepSpec spec;
    // Row-major: cell (i, j) at i * axis2.points + j, with i along axis1.
    std::vector<CellResult> cells;
    std::vector<Boundary> boundaries;

    const CellResult& at(std::size_t i, std::size_t j) const { return cells[i * spec.axis2.points + j]; }
    std::size_t failed_cells() const;
    // More than 20% of the cells failed.
    bool failed() const;
};

struct SweepRuntime {
    unsigned threads = 1;
    StatsCache* cache = nullptr;  // a private in-memory cache is used when null
};

// Classifies a single parameter point, fetching coupling tables through `cache`.
PhasePoint classify_point(const SystemParams& p, const GridSettings& grid, const SaddleOptions& saddle,
                          const DisorderOptions& disorder, StatsCache& cache);

PhaseDiagram run_sweep(const SweepSpec& spec, const SweepRuntime& rt = {});

// Bisects along axis2 at every axis1 value where cells labelled `a` and `b`
// are adjacent, until the bracket is below `rel_tol` of its midpoint.
Boundary refine_boundary(const PhaseDiagram& diagram, Phase a, Phase b, const SweepRuntime& rt = {},
                         double rel_tol = 1e-3);

// The SG-SR curve from the zero-frequency criterion alone:
// (N Re h2(0))^2 = N M11(0,0) (times 1 - 1/N under broadening), bisected along
// axis2 between the same cell brackets that refine_boundary uses.
Boundary analytic_sg_sr_boundary(const PhaseDiagram& diagram, const SweepRuntime& rt = {}, double rel_tol = 1e-3);

}  // namespace gdicke
