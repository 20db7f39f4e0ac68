#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gdicke/kernels.hpp"
#include "gdicke/model.hpp"
#include "gdicke/quadrature.hpp"

namespace gdicke {

// Sheet conductivity of graphene in units of e^2/hbar.
struct Conductivity {
    cplx value;
    // The same number in multiples of e^2/(4 hbar), the universal interband value.
    cplx quarter_units() const { return 4.0 * value; }
};

inline constexpr double default_log_floor = 1e-12;

// Local RPA conductivity: intraband Drude term plus the zero-temperature
// interband step and logarithm. Negative omega returns the conjugate.
Conductivity conductivity(double fermi_energy, double relax_rate, double omega,
                          double log_floor = default_log_floor);

struct SheetModel {
    double fermi_energy;
    double relax_rate;
};

// Graphene sheet between two half-spaces; ε₁ on the emitter side.
struct LayerStack {
    double eps_above = 1;
    double eps_below = 1;
    std::optional<SheetModel> sheet;

    static LayerStack from(const SystemParams& p);
    Conductivity sigma(double omega) const;
    // sigma/(omega eps0) in nm. Zero without a sheet.
    cplx sheet_factor(double omega) const;
};

// Normal wavevector sqrt(q2 - k^2) on the branch Im >= 0 (Re >= 0 on ties).
cplx normal_wavevector(double q2, double k);

cplx fresnel_rp(double omega, double k_par, const LayerStack& stack);

// Surface-plasmon wavevector in nm^-1. Throws ConvergenceError if Newton stalls and
// NoBoundMode if the only root found is not a bound, forward-propagating plasmon.
class NoBoundMode : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
cplx sp_dispersion(double omega, const LayerStack& stack);
// Dispersion function and its relative residual at k.
double sp_relative_residual(double omega, cplx k, const LayerStack& stack);

// Radial weights applied to the Sommerfeld integrand.
struct Weight {
    enum class Kind { unit, bessel, gaussian } kind = Kind::unit;
    double scale = 0;  // separation (bessel) or cloud width L (gaussian), nm
    static Weight unit() { return {}; }
    static Weight bessel(double delta_r) { return {Kind::bessel, delta_r}; }
    static Weight gaussian(double width) { return {Kind::gaussian, width}; }
    double operator()(double k) const;
};

struct SommerfeldOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-300;
    // Number of equal pieces the surface-plasmon window is split into.
    int sp_splits = 4;
    // exp(-2 Im k1z z) level that sets the upper k cutoff.
    double decay_floor = 1e-16;
    std::size_t max_intervals = 20000;
};

// The k-space integrand of the scattering Green function at one frequency,
// F(k) = i k^3 r_p exp(2 i k1z z) / (4 pi eps1 k1z).
//
// Quadrature runs in a monotone path variable u instead of k. Below the light
// line k1 we set k = k1 sin u, on [k1, 2 k1] we set k = k1 cosh(u - u1), and
// beyond that k = 2 k1 + (u - u2). Both substitutions cancel the inverse
// square-root singularity of 1/k1z at k = k1. At omega = 0 the map is u = k.
class SommerfeldIntegrand {
public:
    SommerfeldIntegrand(double omega, double z, const LayerStack& stack);

    double omega() const { return omega_signed_; }
    double height() const { return z_; }
    double light_line() const { return k1_; }
    double light_line_below() const { return k2_; }
    const std::optional<cplx>& sp_root() const { return k_sp_; }

    // Upper k limit beyond which the integrand is below the decay floor.
    double k_cutoff(double decay_floor) const;
    // Natural breakpoints in k (0, light lines, plasmon window, cutoff).
    std::vector<double> breakpoints(double decay_floor, int sp_splits) const;

    double u_of_k(double k) const;
    double k_of_u(double u) const;
    // dk/du at u; used to bound panel widths in k.
    double dk_du(double u) const;
    // For path nodes u, writes k(u) and F(k(u)) dk/du.
    void eval(std::span<const double> u, std::span<double> k, std::span<cplx> f) const;
    // F(k) for a single k (no substitution); singular at the light line.
    cplx value(double k) const;

private:
    cplx reduced(double k, cplx k1z) const;  // F k1z
    cplx finish(cplx v) const { return conj_ ? std::conj(v) : v; }

    double omega_signed_;
    bool conj_;
    bool static_;
    double z_;
    double k0_ = 0, k1_ = 0, k2_ = 0;
    double eps1_, eps2_;
    double static_rp_ = 1;
    cplx s_{0, 0};
    double u1_ = 0, u2_ = 0;
    double k_evanescent_ = 0;
    std::optional<cplx> k_sp_;
    kernels::EvanescentParams ev_{};
};

// Integral of F(k) W(k) over k >= 0 (omega^2 G / c^2 in nm^-3, for the Bessel weight).
QuadResult<cplx> sommerfeld_integral(double omega, double z, const LayerStack& stack,
                                     const Weight& w, const SommerfeldOptions& opt = {});

cplx gzz_scattering(double delta_r, double z, double omega, const LayerStack& stack,
                    const SommerfeldOptions& opt = {});

// (3 pi / 2) gamma0 (c / omega_z)^3 in eV nm^3.
double coupling_prefactor(const SystemParams& p);

struct CouplingValue {
    cplx value;  // eV
    double separation;
    double height;
    double frequency;
};

CouplingValue coupling_h(double delta_r, double z, double omega, const SystemParams& p,
                         const SommerfeldOptions& opt = {});

// Tabulates h(delta_r) at fixed omega on [0, r_max] for fast repeated lookup.
class CouplingTable {
public:
    CouplingTable(double omega, const SystemParams& p, double r_max,
                  const SommerfeldOptions& opt = {});
    cplx operator()(double r) const;
    double r_max() const { return r_max_; }
    std::size_t size() const { return r_.size(); }

private:
    double r_max_;
    std::vector<double> r_;
    std::vector<cplx> h_, d2_;
    SystemParams params_;
    double omega_;
    SommerfeldOptions opt_;
};

struct KramersKronigOptions {
    enum class Tail {
        // Im must have fallen below tail_fraction of its peak at the cutoff.
        none,
        // Im continues past the cutoff W as Im(W) (W / w)^p. The exponent p is
        // measured on [0.8 W, W] and must match the one on [0.6 W, 0.8 W]
        // within tail_tolerance.
        power_law,
    };
    Tail tail = Tail::none;
    double tail_fraction = 0.01;
    double tail_tolerance = 0.25;
    // Points above this fraction of the cutoff are not compared.
    double max_check_fraction = 0.9;
};

// Principal-value reconstruction of Re from Im for a causal response on a
// symmetric grid. Returns max |Re_kk - Re| / max |Re| over points whose |Im|
// is below half its maximum and that lie below max_check_fraction of the cutoff.
double kramers_kronig_check(const ComplexSpectrum& spectrum, const KramersKronigOptions& opt = {});

}  // namespace gdicke
