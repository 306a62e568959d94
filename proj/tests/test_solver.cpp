#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mfg/solver.hpp"

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

}  // namespace

TEST_CASE("prox satisfies its optimality system") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (double r : {1.5, 2.0, 3.0}) {
        for (auto fam : {CouplingFamily::Power, CouplingFamily::Log}) {
            ModelSpec m = reference_model(4);
            m.hamiltonian.r = r;
            m.hamiltonian.c.assign(4, 1.4);
            m.hamiltonian.V.assign(4, 0.2);
            m.coupling.family = fam;
            m.coupling.q = 1.8;
            for (int trial = 0; trial < 200; ++trial) {
                double a = u(rng);
                Vec b{u(rng), u(rng)};
                double sigma = 0.1 + std::abs(u(rng));
                for (int d : {1, 2}) {
                    ProxResult res = prox_primal_point(a, b, sigma, 1, m, d);
                    // multiplier equals the density F*'(-a' + H(x,b'))
                    double h = hamiltonian(m, 1, res.b, d);
                    double g = coupling_F_star_subgradient(m, 1, -res.a + h);
                    CHECK(std::abs(res.multiplier - g) <= 1e-8 * (1.0 + g));
                    CHECK(res.a == doctest::Approx(a + sigma * res.multiplier));
                    // b shrinks along its own direction: b' = b - sigma*g*DpH(b')
                    Vec dph = dp_hamiltonian(m, 1, res.b, d);
                    for (int ax = 0; ax < d; ++ax)
                        CHECK(std::abs(res.b[ax] + sigma * res.multiplier * dph[ax] - b[ax]) <=
                              1e-8);
                }
            }
        }
    }
}

TEST_CASE("prox is the identity on the flat region of F*") {
    ModelSpec m = reference_model(4);  // F*' = 0 for alpha <= 0
    Vec b{0.3, 0.0};
    ProxResult res = prox_primal_point(5.0, b, 1.0, 0, m, 1);
    CHECK(res.a == 5.0);
    CHECK(res.b[0] == 0.3);
    CHECK(res.multiplier == 0.0);
}

TEST_CASE("operator norm estimate in a spatially dominated regime") {
    // with nt tiny the combined operator norm is within a percent of the
    // spatial gradient norm 2*sqrt(d)/hx
    for (int d : {1, 2}) {
        Grid g(d, 64, 2, 1.0);
        double est = estimate_operator_norm(g);
        double spatial = 2.0 * std::sqrt(static_cast<double>(d)) / g.hx();
        double upper = std::sqrt(spatial * spatial + std::pow(2.0 / g.ht(), 2.0));
        CHECK(est >= spatial * 0.999);
        CHECK(est <= upper * 1.001);
    }
}

TEST_CASE("reference solve at desk scale") {
    Grid g(1, 16, 16, 1.0);
    ModelSpec m = reference_model(16);
    SolverOptions o;
    SolutionBundle sol = solve_time_dependent(m, g, o);
    CHECK(sol.converged);
    CHECK(sol.final_gap_rel <= o.tol_gap);
    CHECK(sol.final_feasibility <= o.tol_feas);
    for (double mm : sol.m.v) CHECK(std::abs(mm - 1.0) <= 1e-2);
    // returned slices are renormalized to unit mass
    for (int k = 0; k < g.nt; ++k) {
        double mass = 0;
        for (std::size_t j = 0; j < g.sites(); ++j) mass += sol.m.at(k, j);
        CHECK(std::abs(mass * g.cell_volume() - 1.0) <= 1e-12);
    }
    // phi approaches the stationary profile T - t
    CHECK(std::abs(sol.phi.at(0, 3) - 1.0) <= 1e-2);
    CHECK(sol.assumptions.nu == doctest::Approx(0.2));
}

TEST_CASE("solves are deterministic for a fixed seed") {
    Grid g(1, 8, 8, 1.0);
    ModelSpec m = reference_model(8);
    SolverOptions o;
    o.rng_seed = 77;
    o.max_iters = 500;  // determinism does not need convergence
    SolutionBundle s1 = solve_time_dependent(m, g, o);
    SolutionBundle s2 = solve_time_dependent(m, g, o);
    CHECK(s1.m.v == s2.m.v);
    CHECK(s1.phi.v == s2.phi.v);
    CHECK(s1.iterations == s2.iterations);
}

TEST_CASE("infeasible mass is rejected") {
    Grid g(1, 8, 4, 1.0);
    ModelSpec m = reference_model(8);
    m.m0.assign(8, 1.5);
    CHECK_THROWS_AS(solve_time_dependent(m, g, SolverOptions{}), InfeasibleInput);
}

TEST_CASE("invalid step sizes are rejected") {
    Grid g(1, 8, 4, 1.0);
    ModelSpec m = reference_model(8);
    SolverOptions o;
    o.step_primal = 100.0;
    o.step_dual = 100.0;
    CHECK_THROWS_AS(solve_time_dependent(m, g, o), std::invalid_argument);
}

TEST_CASE("warm start from the exact solution converges immediately") {
    Grid g(1, 16, 16, 1.0);
    ModelSpec m = reference_model(16);
    SolverOptions o;
    auto phi = std::make_shared<ScalarField>(g, Placement::TimeNode);
    for (int k = 0; k <= g.nt; ++k)
        for (std::size_t j = 0; j < g.sites(); ++j) phi->at(k, j) = 1.0 - k * g.ht();
    o.warm_phi = phi;
    o.warm_m = std::make_shared<ScalarField>(g, Placement::TimeCell, 1.0);
    o.warm_w = std::make_shared<VectorField>(g, 0.0);
    SolutionBundle sol = solve_time_dependent(m, g, o);
    CHECK(sol.converged);
    CHECK(sol.iterations <= o.check_every);
}

TEST_CASE("ergodic solve matches the closed form at desk scale") {
    const int nx = 64;
    Grid g(1, nx, 1, 1.0);
    ModelSpec m = reference_model(nx);
    for (std::size_t j = 0; j < static_cast<std::size_t>(nx); ++j)
        m.hamiltonian.V[j] = std::cos(2.0 * M_PI * g.coord(j, 0));
    SolverOptions o;
    o.max_iters = 100000;
    o.tol_gap = 1e-7;
    o.tol_feas = 1e-6;
    ErgodicSolution sol = solve_ergodic(m, g, o);
    CHECK(sol.converged);
    CHECK(std::abs(sol.lambda - 1.0) <= 2e-3);
    double l1 = 0;
    for (std::size_t j = 0; j < static_cast<std::size_t>(nx); ++j)
        l1 += std::abs(sol.m[j] - (1.0 - m.hamiltonian.V[j]));
    CHECK(l1 * g.cell_volume() <= 5e-2);
    double mass = 0;
    for (double mm : sol.m) mass += mm;
    CHECK(mass * g.cell_volume() == doctest::Approx(1.0).epsilon(1e-12));
}
