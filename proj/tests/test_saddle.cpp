#include <doctest.h>

#include <cmath>

#include "gdicke/config.hpp"
#include "gdicke/saddle.hpp"
#include "oracles/oracle_values.hpp"

using namespace gdicke;

namespace {

cplx root_x(cplx a, cplx m) {
    ContinuationReport rep;
    const cplx q = solve_qcq(0.0, 0.1, DressedInverse{a, m}, 16, &rep);
    CHECK(rep.residual < 1e-13);
    return 2.0 * q;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

// A coarse grid keeps the coupling tables cheap for unit tests.
const GridSettings coarse{10, 257, 4};

}  // namespace

TEST_CASE("Q_cq root follows the branch connected to the free solution") {
    CHECK(rel(root_x(oracle::root_free_a, oracle::root_free_m), oracle::root_free_x) < 1e-13);
    CHECK(rel(root_x(oracle::root_gapped_a, oracle::root_gapped_m), oracle::root_gapped_x) < 1e-12);
    CHECK(rel(root_x(oracle::root_band_a, oracle::root_band_m), oracle::root_band_x) < 1e-12);
    CHECK(rel(root_x(oracle::root_positive_a, oracle::root_positive_m), oracle::root_positive_x) < 1e-12);
}

TEST_CASE("Q_cq at the double root") {
    // A = -2 sqrt(M): both roots coincide at x = -1/sqrt(M).
    const double m = 0.04;
    const cplx x = root_x(cplx(-2 * std::sqrt(m), 0), cplx(m, 0));
    CHECK(std::abs(x - cplx(-1 / std::sqrt(m), 0)) < 1e-6);
}

TEST_CASE("Q_cc^reg vanishes with its numerator") {
    SaddleContext::Local l{cplx(0, 0), 0.0, ContourMatrix{}};
    CHECK(q_cc_reg(0.3, cplx(0.1, -0.2), l) == cplx(0, 0));
}

TEST_CASE("phase candidates satisfy the closed-form identity") {
    SystemParams p;
    p.n_emitters = 400;
    p.cloud_width = 150;
    const CouplingStats stats = compute_stats(p, coarse.make(p));
    const SaddleContext ctx(stats, p);
    const double lam = ctx.lambda_qc(), m = ctx.m_zero();
    const auto sr = lambda_sr(ctx);
    REQUIRE(sr.has_value());
    const double h2 = stats.h2.at_zero().real(), m11 = stats.m11_zero();
    const double expected = -std::pow(std::sqrt(p.n_emitters) * h2 - std::sqrt(m11), 2) / h2;
    CHECK((*sr - lambda_sg(ctx)) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(sr_criterion(ctx) == (lam * lam > m));
    CHECK(*sr <= lambda_sg(ctx));
}

TEST_CASE("ordered-phase solution closes its own equations") {
    SystemParams p;
    p.cloud_width = 1000;
    const CouplingStats stats = compute_stats(p, coarse.make(p));
    const PhasePoint pt = classify_phase(stats, p);
    CHECK(pt.solution.phase == Phase::spin_glass);
    CHECK(pt.solution.residuals.qcq_backsub < 1e-12);
    CHECK(std::abs(pt.solution.residuals.constraint_full) < 1e-6);
    CHECK(pt.solution.q_ea > 0);
    CHECK(pt.solution.psi_c == 0);
    CHECK(pt.solution.lambda_c == pt.candidates.lambda_sg);
    // A_SR is a nonnegative spectral weight at positive frequency.
    const ComplexSpectrum a = spectral_response(pt.solution);
    for (std::size_t i = a.grid->zero_index() + 1; i < a.size(); ++i) CHECK(a[i].real() >= -1e-12);
}

TEST_CASE("phase names round-trip") {
    for (Phase ph : {Phase::normal, Phase::spin_glass, Phase::superradiant})
        CHECK(phase_from_name(phase_name(ph)) == ph);
    CHECK_THROWS_AS(phase_from_name("ferro"), DomainError);
}
