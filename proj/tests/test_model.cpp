#include <doctest.h>

#include <cmath>

#include "gdicke/model.hpp"

using namespace gdicke;

TEST_CASE("frequency grid is odd, symmetric and contains zero") {
    const FrequencyGrid g(5.0, 129);
    CHECK(g.size() == 129);
    CHECK(g[g.zero_index()] == 0.0);
    CHECK(g[0] == -5.0);
    CHECK(g[g.size() - 1] == 5.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[g.mirror(i)] == -g[i]);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
    CHECK(g.nonnegative().size() == 65);
}

TEST_CASE("stretch concentrates nodes near zero") {
    const FrequencyGrid flat(1.0, 101, 1e-9), tight(1.0, 101, 8.0);
    CHECK(tight[tight.zero_index() + 1] < flat[flat.zero_index() + 1]);
}

TEST_CASE("grid rejects bad arguments") {
    CHECK_THROWS_AS(FrequencyGrid(1.0, 100), DomainError);
    CHECK_THROWS_AS(FrequencyGrid(-1.0, 101), DomainError);
    CHECK_THROWS_AS(FrequencyGrid(1.0, 1), DomainError);
}

TEST_CASE("parameter validation") {
    SystemParams p;
    CHECK_NOTHROW(p.validate());
    auto bad = [](auto edit) {
        SystemParams q;
        edit(q);
        return q;
    };
    CHECK_THROWS_AS(bad([](SystemParams& q) { q.n_emitters = 0; }).validate(), DomainError);
    CHECK_THROWS_AS(bad([](SystemParams& q) { q.cloud_width = -1; }).validate(), DomainError);
    CHECK_THROWS_AS(bad([](SystemParams& q) { q.height = 0; }).validate(), DomainError);
    CHECK_THROWS_AS(bad([](SystemParams& q) { q.transition_freq = 0; }).validate(), DomainError);
    CHECK_THROWS_AS(bad([](SystemParams& q) { q.gamma0 = -1e-5; }).validate(), DomainError);
    CHECK_THROWS_AS(bad([](SystemParams& q) { q.broadening = -0.1; }).validate(), DomainError);
    CHECK_THROWS_AS(bad([](SystemParams& q) { q.eps_above = 0; }).validate(), DomainError);
    CHECK_THROWS_AS(bad([](SystemParams& q) { q.fermi_energy = std::nan(""); }).validate(), DomainError);
}

TEST_CASE("unit conversions") {
    // hbar / 1e-13 s in eV
    CHECK(convert_relax_rate(1e-13) == doctest::Approx(6.582119569e-3).epsilon(1e-12));
    CHECK(convert_relax_rate(INFINITY) == 0.0);
    // c / omega_z at 0.5 eV is 394.65 nm
    CHECK(to_normalized_length(394.6539608, 0.5) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(from_normalized_length(to_normalized_length(123.0, 0.7), 0.7) == doctest::Approx(123.0).epsilon(1e-14));
}

TEST_CASE("mirror_conjugate fills the negative half") {
    auto g = make_grid(1.0, 17);
    std::vector<cplx> v(17);
    for (std::size_t i = g->zero_index(); i < 17; ++i) v[i] = cplx((*g)[i], (*g)[i] * (*g)[i]);
    mirror_conjugate(*g, v);
    const ComplexSpectrum s(g, v);
    CHECK(s.conjugation_defect() == 0.0);
    CHECK(s[0] == std::conj(s[16]));
}
