#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mfg/analysis.hpp"

using namespace mfg;

namespace {

ModelSpec reference_model(std::size_t n) {
    ModelSpec m;
    m.hamiltonian.r = 2.0;
    m.hamiltonian.c.assign(n, 1.0);
    m.hamiltonian.V.assign(n, 0.0);
    m.coupling.family = CouplingFamily::Power;
    m.coupling.q = 2.0;
    m.coupling.a.assign(n, 1.0);
    m.m0.assign(n, 1.0);
    m.phi_T.assign(n, 0.0);
    return m;
}

SolutionBundle stationary_bundle(const Grid& g) {
    SolutionBundle b;
    b.phi = ScalarField(g, Placement::TimeNode);
    for (int k = 0; k <= g.nt; ++k)
        for (std::size_t j = 0; j < g.sites(); ++j) b.phi.at(k, j) = g.horizon - k * g.ht();
    b.m = ScalarField(g, Placement::TimeCell, 1.0);
    b.w = VectorField(g, 0.0);
    b.alpha = ScalarField(g, Placement::TimeCell, 1.0);
    b.converged = true;
    return b;
}

}  // namespace

TEST_CASE("residuals vanish on the exact stationary solution") {
    for (int d : {1, 2}) {
        Grid g(d, 8, 8, 1.0);
        ModelSpec m = reference_model(g.sites());
        ResidualReport rep = weak_solution_residuals(stationary_bundle(g), m, g);
        CHECK(rep.hj_inequality_violation <= 1e-10);
        CHECK(rep.identity_gap <= 1e-10);
        CHECK(rep.continuity_residual <= 1e-10);
        CHECK(rep.terminal_violation <= 1e-10);
    }
}

TEST_CASE("corrupting one cell bumps the continuity residual by ~0.1/ht") {
    Grid g(1, 8, 8, 1.0);
    ModelSpec m = reference_model(8);
    SolutionBundle b = stationary_bundle(g);
    b.m.at(3, 2) += 0.1;
    ResidualReport rep = weak_solution_residuals(b, m, g);
    CHECK(rep.continuity_residual ==
          doctest::Approx(0.1 / g.ht() * g.cell_volume()).epsilon(1e-9));
}

TEST_CASE("energy inequality is an identity on identical bundles") {
    Grid g(1, 8, 8, 1.0);
    ModelSpec m = reference_model(8);
    SolutionBundle b = stationary_bundle(g);
    EnergyReport rep = energy_inequality_check(b, b, m, g, 1, g.nt - 1);
    CHECK(rep.lhs == 0.0);
    CHECK(rep.rhs == 0.0);
    CHECK(rep.pass);
}

TEST_CASE("monotone coupling term arithmetic") {
    Grid g(1, 4, 4, 1.0);
    ModelSpec m = reference_model(4);  // f(m) = m
    SolutionBundle a = stationary_bundle(g);
    SolutionBundle b = stationary_bundle(g);
    b.m.at(2, 1) = 2.0;  // one cell with m2 = 2 against m1 = 1
    EnergyReport rep = energy_inequality_check(a, b, m, g, 1, g.nt);
    // (f(2) - f(1)) * (2 - 1) * ht * hx on that single cell
    CHECK(rep.monotone == doctest::Approx(g.ht() * g.cell_volume()));
    CHECK(rep.bregman_a == 0.0);
    CHECK(rep.bregman_b == 0.0);
}

TEST_CASE("energy check validates its window") {
    Grid g(1, 4, 4, 1.0);
    ModelSpec m = reference_model(4);
    SolutionBundle b = stationary_bundle(g);
    CHECK_THROWS_AS(energy_inequality_check(b, b, m, g, 0, 2), std::invalid_argument);
    CHECK_THROWS_AS(energy_inequality_check(b, b, m, g, 3, 3), std::invalid_argument);
}

TEST_CASE("ergodic oracle closed forms") {
    const int nx = 256;
    Grid g(1, nx, 1, 1.0);
    ModelSpec m = reference_model(nx);

    SUBCASE("flat potential") {
        ErgodicOracle o = explicit_ergodic_oracle(m, g);
        CHECK(o.lambda == doctest::Approx(1.0).epsilon(1e-10));
        for (double mm : o.m) CHECK(mm == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("cosine potential, amplitude 1") {
        for (int j = 0; j < nx; ++j)
            m.hamiltonian.V[j] = std::cos(2.0 * M_PI * g.coord(j, 0));
        ErgodicOracle o = explicit_ergodic_oracle(m, g);
        CHECK(o.lambda == doctest::Approx(1.0).epsilon(1e-10));
        for (int j = 0; j < nx; ++j)
            CHECK(o.m[j] == doctest::Approx(1.0 - m.hamiltonian.V[j]).epsilon(1e-9));
    }
    SUBCASE("cosine potential, amplitude 2: bisection against a monotone map") {
        for (int j = 0; j < nx; ++j)
            m.hamiltonian.V[j] = 2.0 * std::cos(2.0 * M_PI * g.coord(j, 0));
        ErgodicOracle o = explicit_ergodic_oracle(m, g);
        CHECK(o.lambda > -2.0);
        CHECK(o.lambda < 2.0);
        CHECK(ergodic_oracle_mass(m, g, o.lambda) == doctest::Approx(1.0).epsilon(1e-9));
        // monotone normalization map
        double prev = -1.0;
        for (double lam = -2.0; lam <= 2.0; lam += 0.25) {
            double mass = ergodic_oracle_mass(m, g, lam);
            CHECK(mass >= prev);
            prev = mass;
        }
        // mass(1) > 1 already, so lambda must sit below 1
        CHECK(ergodic_oracle_mass(m, g, 1.0) > 1.0);
        CHECK(o.lambda < 1.0);
    }
    SUBCASE("wrong families are rejected") {
        ModelSpec bad = m;
        bad.coupling.family = CouplingFamily::Log;
        CHECK_THROWS_AS(explicit_ergodic_oracle(bad, g), WrongFamily);
        bad = m;
        bad.hamiltonian.r = 3.0;
        CHECK_THROWS_AS(explicit_ergodic_oracle(bad, g), WrongFamily);
        bad = m;
        bad.hamiltonian.c[0] = 2.0;
        CHECK_THROWS_AS(explicit_ergodic_oracle(bad, g), WrongFamily);
    }
}

TEST_CASE("rescale_to_unit_time") {
    Grid g(1, 4, 8, 4.0);
    ScalarField phi(g, Placement::TimeNode);
    for (int k = 0; k <= g.nt; ++k)
        for (std::size_t j = 0; j < g.sites(); ++j) phi.at(k, j) = g.horizon - k * g.ht();
    Grid unit;
    ScalarField psi = rescale_to_unit_time(g, phi, &unit);
    CHECK(unit.horizon == 1.0);
    CHECK(unit.nt == g.nt);
    // phi = T - t maps to psi/T = 1 - s
    for (int k = 0; k <= unit.nt; ++k) {
        double s = static_cast<double>(k) / unit.nt;
        CHECK(psi.at(k, 0) / g.horizon == doctest::Approx(1.0 - s));
    }
    // T = 1 and constants are fixed points
    Grid g1(1, 4, 8, 1.0);
    ScalarField c(g1, Placement::TimeCell, 2.5);
    ScalarField c2 = rescale_to_unit_time(g1, c);
    CHECK(c2.v == c.v);
}

TEST_CASE("long-time experiment is exact on stationary data") {
    // reference model: the solution is already ergodic, so errors stay tiny
    Grid unit(1, 8, 8, 1.0);
    ModelSpec m = reference_model(8);
    SolverOptions o;
    LongTimeReport rep = long_time_experiment(m, unit, {1.0, 2.0}, o);
    CHECK(rep.all_converged);
    CHECK(rep.lambda_bar == doctest::Approx(1.0).epsilon(1e-10));
    for (double e : rep.mu_errors) CHECK(e <= 1e-3);
    for (double e : rep.psi_errors) CHECK(e <= 1e-3);
}
