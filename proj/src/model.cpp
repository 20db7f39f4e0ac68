#include "gdicke/model.hpp"

#include <cmath>
#include <limits>

namespace gdicke {

void SystemParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0) || !std::isfinite(v))
            throw DomainError(std::string(name) + " must be positive and finite");
    };
    if (!(n_emitters >= 2) || !std::isfinite(n_emitters))
        throw DomainError("n_emitters must be at least 2");
    positive(cloud_width, "cloud_width");
    positive(height, "height");
    positive(fermi_energy, "fermi_energy");
    positive(transition_freq, "transition_freq");
    if (!(gamma0 >= 0) || !std::isfinite(gamma0)) throw DomainError("gamma0 must be nonnegative");
    if (!(broadening >= 0) || !std::isfinite(broadening))
        throw DomainError("broadening must be nonnegative");
    if (broadening > transition_freq / 3)
        throw DomainError("broadening must not exceed transition_freq/3");
    if (!(relax_time > 0)) throw DomainError("relax_time must be positive");
    if (!(eps_above >= 1) || !(eps_below >= 1) || !std::isfinite(eps_above) ||
        !std::isfinite(eps_below))
        throw DomainError("permittivities must be >= 1");
}

double SystemParams::relax_rate() const { return convert_relax_rate(relax_time); }

double convert_relax_rate(double relax_time_s) {
    if (!(relax_time_s > 0)) throw DomainError("relax_time must be positive");
    if (std::isinf(relax_time_s)) return 0.0;
    return units::hbar_ev_s / relax_time_s;
}

double to_normalized_length(double length_nm, double omega_z) {
    return length_nm * omega_z / units::hbar_c;
}

double from_normalized_length(double length, double omega_z) {
    return length * units::hbar_c / omega_z;
}

FrequencyGrid::FrequencyGrid(double cutoff, std::size_t n_points, double stretch)
    : cutoff_(cutoff), stretch_(stretch) {
    if (!(cutoff > 0) || !std::isfinite(cutoff)) throw DomainError("grid cutoff must be positive");
    if (n_points < 17 || n_points % 2 == 0)
        throw DomainError("grid size must be odd and at least 17");
    if (!(stretch > 0)) throw DomainError("grid stretch must be positive");
    const std::size_t half = n_points / 2;
    points_.assign(n_points, 0.0);
    const double norm = std::sinh(stretch);
    for (std::size_t j = 1; j <= half; ++j) {
        const double u = static_cast<double>(j) / static_cast<double>(half);
        const double w = j == half ? cutoff : cutoff * std::sinh(stretch * u) / norm;
        points_[half + j] = w;
        points_[half - j] = -w;
    }
}

GridPtr make_grid(double cutoff, std::size_t n_points, double stretch) {
    return std::make_shared<const FrequencyGrid>(cutoff, n_points, stretch);
}

ComplexSpectrum::ComplexSpectrum(GridPtr g, std::vector<cplx> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (!grid || grid->size() != values.size())
        throw DomainError("spectrum size does not match its grid");
}

bool ComplexSpectrum::all_finite() const {
    for (const auto& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

double ComplexSpectrum::conjugation_defect() const {
    double worst = 0;
    for (std::size_t i = 0; i < values.size(); ++i)
        worst = std::max(worst, std::abs(values[grid->mirror(i)] - std::conj(values[i])));
    return worst;
}

void mirror_conjugate(const FrequencyGrid& grid, std::vector<cplx>& values) {
    const std::size_t z = grid.zero_index();
    for (std::size_t i = z + 1; i < grid.size(); ++i) values[grid.mirror(i)] = std::conj(values[i]);
}

}  // namespace gdicke
