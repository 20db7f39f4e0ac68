#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gdicke/graphene.hpp"
#include "gdicke/model.hpp"

namespace gdicke {

// Rows and columns ordered (Re, Im); element [a][b] = E[delta X_a(omega) delta X_b(omega')].
using Matrix2 = std::array<std::array<double, 2>, 2>;

// Separation density of two points drawn independently from an isotropic
// 2-D Gaussian of standard deviation L.
struct PairDistribution {
    double cloud_width;
    double density(double r) const;
    double cdf(double r) const;
};

struct DisorderOptions {
    SommerfeldOptions em{};
    double outer_rel_tol = 1e-8;
    double inner_rel_tol = 1e-9;
};

cplx mean_h1(double omega, const SystemParams& p, const DisorderOptions& opt = {});
cplx mean_h2(double omega, const SystemParams& p, const DisorderOptions& opt = {});

// Raw pair correlators C = E[h(w) h(w')] and D = E[h(w) conj h(w')], eV^2.
struct PairCorrelators {
    cplx c;
    cplx d;
};
PairCorrelators pair_correlators(double omega, double omega_p, const SystemParams& p,
                                 const DisorderOptions& opt = {});

// Covariance blocks from centred correlators.
Matrix2 covariance_from_correlators(cplx c_centred, cplx d_centred);

Matrix2 covariance_M(double omega, double omega_p, const SystemParams& p,
                     const DisorderOptions& opt = {});

// Centred second moments at the pair (omega, -omega): E|dh|^2 and E[dh^2].
struct PairMoments {
    double abs2;
    cplx square;
    Matrix2 block() const;  // M(omega, -omega)
};
PairMoments pair_moments(double omega, const SystemParams& p, const DisorderOptions& opt = {});

struct CouplingStats {
    GridPtr grid;
    ComplexSpectrum h1;
    ComplexSpectrum h2;
    // Per grid point i, the moments at (omega_i, -omega_i).
    std::vector<double> abs2;
    std::vector<cplx> square;

    Matrix2 cov(std::size_t i) const { return PairMoments{abs2[i], square[i]}.block(); }
    double m11_zero() const { return cov(grid->zero_index())[0][0]; }
};

// Counts the Sommerfeld/covariance quadratures run by compute_stats (process-wide).
std::uint64_t stats_computations();

CouplingStats compute_stats(const SystemParams& p, GridPtr grid, const DisorderOptions& opt = {});

struct ScaledStats {
    GridPtr grid;
    ComplexSpectrum hd;  // N h1
    ComplexSpectrum ho;  // N h2
    std::vector<double> abs2;  // N E|dh|^2
    std::vector<cplx> square;  // N E[dh^2]
    Matrix2 mo(std::size_t i) const { return PairMoments{abs2[i], square[i]}.block(); }
};
ScaledStats scale_stats(const CouplingStats& s, double n_emitters);

// Keldysh indices c = 0, q = 1.
using Matrix2c = std::array<std::array<cplx, 2>, 2>;
Matrix2c v_matrix(int which, double omega);  // which = 1 or 2

// Full tensor Mtilde_{ab,a'b'}(w,w') = sum_{s,t} V^s_{aa'}(w) Mo_{st} V^t_{bb'}(w'),
// flattened with index ((a*2 + b)*2 + a')*2 + b'.
using ContourTensor = std::array<cplx, 16>;
constexpr std::size_t contour_index(int a, int b, int ap, int bp) {
    return static_cast<std::size_t>(((a * 2 + b) * 2 + ap) * 2 + bp);
}
ContourTensor contour_tensor(const Matrix2& mo, double omega, double omega_p);

// The four components consumed by the saddle-point equations at (omega, -omega).
struct ContourMatrix {
    cplx qc_cq;
    cplx cc_qq;
    cplx cq_qq;
    cplx qc_qq;
};
ContourMatrix contour_entries(const ContourTensor& t);
ContourMatrix assemble_contour_matrix(const ScaledStats& s, std::size_t grid_index);

// Additive correction from inhomogeneous broadening:
// scale * Mtilde plus `diagonal` on the (cq,qc), (qc,cq), (cc,qq), (qq,cc) components.
struct BroadeningCorrection {
    double scale = 0;     // -1/N when active
    double diagonal = 0;  // Delta^2 w^2 w'^2 / (8 omega_z^4), eV^2
    bool active = false;
    void apply(ContourTensor& t) const;
    void apply(ContourMatrix& m) const;
};
BroadeningCorrection broadening_correction(const SystemParams& p, double omega, double omega_p);

// Counter-based generator: value j of stream s is a pure function of (seed, s, j).
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : key_(mix(seed ^ mix(stream + 0x9e37))) {}
    std::uint64_t bits(std::uint64_t counter) const { return mix(key_ + counter * 0x9e3779b97f4a7c15ULL); }
    // Uniform on (0, 1).
    double uniform(std::uint64_t counter) const {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t key_;
};

// Separations |r_a - r_b| for n independent pairs from the Gaussian cloud.
std::vector<double> sample_separations(double cloud_width, std::size_t n, std::uint64_t seed);

struct OracleResult {
    double omega = 0, omega_p = 0;
    std::size_t samples = 0;
    cplx mean;          // of h(omega)
    cplx mean_stderr;   // (stderr of Re, stderr of Im)
    Matrix2 cov{};      // between (Re, Im) h(omega) and (Re, Im) h(omega')
    Matrix2 cov_stderr{};
};

OracleResult monte_carlo_oracle(double omega, double omega_p, const SystemParams& p,
                                std::size_t n_samples, std::uint64_t seed,
                                const DisorderOptions& opt = {});

}  // namespace gdicke
