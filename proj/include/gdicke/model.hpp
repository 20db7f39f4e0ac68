#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdicke {

using cplx = std::complex<double>;

// Physical constants in the eV / nm / s system used throughout the library.
namespace units {
inline constexpr double hbar_c = 197.3269804;          // eV nm
inline constexpr double hbar_ev_s = 6.582119569e-16;   // eV s
inline constexpr double fine_structure = 7.2973525693e-3;
inline constexpr double pi = 3.14159265358979323846;
}  // namespace units

// Raised for inputs outside an operation's domain.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Raised when an iterative or adaptive numerical method fails to reach its target.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

struct SystemParams {
    double n_emitters = 100;       // N
    double cloud_width = 1000;     // L, nm
    double height = 20;            // z, nm
    double fermi_energy = 0.1;     // E_f, eV
    double transition_freq = 0.5;  // omega_z, eV
    double gamma0 = 1e-5;          // eV
    double broadening = 0;         // Delta, eV
    double relax_time = 1e-13;     // tau, s
    double eps_above = 1;
    double eps_below = 1;

    // Throws DomainError when an invariant is violated.
    void validate() const;
    double relax_rate() const;
};

// hbar/tau in eV. An infinite relaxation time gives the lossless limit 0.
double convert_relax_rate(double relax_time_s);

// Lengths expressed in units of c/omega_z.
double to_normalized_length(double length_nm, double omega_z);
double from_normalized_length(double length, double omega_z);

// Symmetric frequency grid omega_j = cutoff * sinh(beta u_j) / sinh(beta),
// u_j uniform on [-1, 1]. Spacing near zero is roughly beta/sinh(beta) times
// the spacing of a uniform grid, and grows towards the cutoff.
class FrequencyGrid {
public:
    static constexpr double default_stretch = 6.0;

    FrequencyGrid(double cutoff, std::size_t n_points, double stretch = default_stretch);

    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    std::span<const double> points() const noexcept { return points_; }
    double cutoff() const noexcept { return cutoff_; }
    double stretch() const noexcept { return stretch_; }
    std::size_t zero_index() const noexcept { return points_.size() / 2; }
    // Index of -omega_i.
    std::size_t mirror(std::size_t i) const noexcept { return points_.size() - 1 - i; }
    // Nonnegative half of the grid, starting at 0.
    std::span<const double> nonnegative() const noexcept {
        return std::span<const double>(points_).subspan(zero_index());
    }
    bool operator==(const FrequencyGrid& o) const {
        return cutoff_ == o.cutoff_ && stretch_ == o.stretch_ && points_ == o.points_;
    }

private:
    double cutoff_;
    double stretch_;
    std::vector<double> points_;
};

using GridPtr = std::shared_ptr<const FrequencyGrid>;

GridPtr make_grid(double cutoff, std::size_t n_points,
                  double stretch = FrequencyGrid::default_stretch);

struct ComplexSpectrum {
    GridPtr grid;
    std::vector<cplx> values;

    ComplexSpectrum() = default;
    ComplexSpectrum(GridPtr g, std::vector<cplx> v);

    std::size_t size() const noexcept { return values.size(); }
    const cplx& operator[](std::size_t i) const { return values[i]; }
    cplx at_zero() const { return values[grid->zero_index()]; }
    bool all_finite() const;
    // max_i |S(-omega_i) - conj S(omega_i)|
    double conjugation_defect() const;
};

// Fills the negative half of `values` from the nonnegative half by conjugation.
void mirror_conjugate(const FrequencyGrid& grid, std::vector<cplx>& values);

}  // namespace gdicke
