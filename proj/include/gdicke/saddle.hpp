#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gdicke/disorder.hpp"
#include "gdicke/model.hpp"

namespace gdicke {

enum class Phase { normal, spin_glass, superradiant };
std::string_view phase_name(Phase p);
Phase phase_from_name(std::string_view name);

// Raised when Q_cc^reg meets a vanishing denominator away from omega = 0.
class SingularPointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when the square-root branch of the Q_cq continuation cannot be tracked.
class BranchCollisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Where the normal-phase root is sought. `below_edge` scans down from the
// ordered-phase candidate, where the spectral gap at omega = 0 widens and the
// root joins continuously onto the candidate at a phase boundary.
// `above_band` scans up from the far edge of the disorder band instead.
enum class NormalSearch { below_edge, above_band };

struct SaddleOptions {
    int continuation_steps = 16;
    double integral_rel_tol = 1e-10;
    double root_tol = 1e-10;  // eV
    std::size_t max_intervals = 200000;
    NormalSearch normal_search = NormalSearch::below_edge;
};

// Inputs of the Q_cq equation at one frequency: A(w) and Mtilde_{qc,cq}(w,-w).
struct DressedInverse {
    cplx a;
    cplx mqc_cq;
};

struct ContinuationReport {
    int steps = 0;
    double max_turn = 0;        // largest |arg(d_j / d_{j-1})| / pi over the steps
    double residual = 0;        // relative residual of M x^2 - A x + 1 = 0
};

// Returns Q_cq = x/2 with x the root of M x^2 - A x + 1 = 0 reached from
// x = 1/A by scaling M from 0 to its full value.
cplx solve_qcq(double lambda_c, double omega, const DressedInverse& d, int steps = 16,
               ContinuationReport* report = nullptr);

// Interpolated spectra and the assembled contour components used by the
// saddle-point equations, for one parameter point.
class SaddleContext {
public:
    SaddleContext(const CouplingStats& stats, const SystemParams& p, SaddleOptions opt = {});

    struct Local {
        cplx g;          // h1 - h2, eV
        double gamma;    // sgn(w) (Im h1 - Im h2), eV
        ContourMatrix mt;  // with the broadening correction when active, eV^2
    };
    Local at(double omega) const;
    Local at_node(std::size_t grid_index) const;
    // Full tensor (with broadening) at (w, -w) from the interpolated moments.
    ContourTensor tensor(double omega) const;

    DressedInverse dressed(double lambda_c, double omega, const Local& l) const;
    cplx a_value(double lambda_c, double omega, const Local& l) const;

    const SystemParams& params() const { return params_; }
    const SaddleOptions& options() const { return opt_; }
    const FrequencyGrid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }
    const CouplingStats& stats() const { return stats_; }

    // N M11(0,0) after the broadening rescaling, eV^2.
    double m_zero() const;
    // N Re h2(0), eV.
    double lambda_qc() const;
    double g_zero() const;  // Re (h1 - h2)(0)

private:
    template <class T>
    struct Hermite {
        std::vector<T> y, d;
    };
    template <class T>
    T interp(const Hermite<T>& h, double omega) const;
    template <class T>
    Hermite<T> build(const std::vector<T>& y) const;

    CouplingStats stats_;
    SystemParams params_;
    SaddleOptions opt_;
    GridPtr grid_;
    std::vector<double> nodes_;
    Hermite<cplx> g_, sq_;
    Hermite<double> a2_;
};

cplx q_cc_reg(double omega, cplx q_cq, const SaddleContext::Local& l);

struct NormalizationValue {
    double value;     // (i/4pi) integral of Q_cc^reg
    double imag;      // imaginary residue
    std::size_t evaluations;
    double error;
};

// s = Re (i/2pi) int_0^W Q_cc^reg dw. Where the real denominator
// 1 - 4|Q_cq|^2 Mtilde_ccqq changes sign the integrand has a simple pole on
// the real axis; that stretch is taken as a Cauchy principal value.
NormalizationValue normalization_integral(double lambda_c, const SaddleContext& ctx);
double normalization_residual(double lambda_c, const SaddleContext& ctx);

double lambda_sg(const SaddleContext& ctx);
std::optional<double> lambda_sr(const SaddleContext& ctx);
bool sr_criterion(const SaddleContext& ctx);

struct SaddleResiduals {
    double normalization = 0;     // s + q/2 - 2
    double normalization_imag = 0;
    double qcq_backsub = 0;       // worst over the grid
    double constraint_full = 0;
    double det_l0_re = 0, det_l0_im = 0;
    double s_value = 0;
    int root_iterations = 0;
    bool monotone = true;
};

struct SaddleSolution {
    double lambda_c = 0;
    ComplexSpectrum q_cq;
    ComplexSpectrum q_cc_reg;
    double q_ea = 0;
    double psi_c = 0;
    Phase phase = Phase::normal;
    SaddleResiduals residuals;
};

struct LambdaCandidates {
    std::optional<double> lambda_normal;
    double lambda_sg = 0;
    std::optional<double> lambda_sr;
};

struct PhasePoint {
    SystemParams params;
    SaddleSolution solution;
    LambdaCandidates candidates;
    bool sr_criterion = false;
};

// Tabulates Q_cq and Q_cc^reg on the grid for a fixed lambda_c.
SaddleSolution solve_at(double lambda_c, const SaddleContext& ctx);

PhasePoint classify_phase(const SaddleContext& ctx);
PhasePoint classify_phase(const CouplingStats& stats, const SystemParams& p, SaddleOptions opt = {});

// A_SR(w) = -2 Im Q_cq(w), stored as a real-valued spectrum.
ComplexSpectrum spectral_response(const SaddleSolution& s);

// Full constraint (i/8pi) int tr[L^-1_reg] dw - (psi^2 Lambda^2 + q Mtilde_ccqq(0,0)) / (2 det L(0)) - 2,
// with L assembled from the complete contour tensor and inverted numerically.
double constraint_full_check(const SaddleSolution& s, const SaddleContext& ctx);

}  // namespace gdicke
