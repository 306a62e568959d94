#pragma once

#include <vector>

#include "mfg/solver.hpp"

namespace mfg {

struct WrongFamily : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResidualReport {
    double hj_inequality_violation = 0;  // max (alpha - f(m))_+ on {m > eps_m}
    double identity_gap = 0;             // error in the discrete integral identity
    double continuity_residual = 0;      // max over slices of the L1 defect
    double terminal_violation = 0;       // max (phi(T) - phi_T)_+
};

struct EnergyReport {
    double lhs = 0;  // two Bregman terms + monotone coupling term
    double rhs = 0;  // bracketed boundary pairing
    double bregman_a = 0, bregman_b = 0, monotone = 0;
    bool pass = false;
};

struct ErgodicOracle {
    double lambda = 0;
    std::vector<double> m;
};

struct LongTimeReport {
    std::vector<double> horizons;
    std::vector<double> mu_errors;   // L1((0,1) x torus) distance of mu^T to m_bar
    std::vector<double> psi_errors;  // L1((delta,1) x torus), delta = 0.1
    std::vector<double> mu_errors_l2, psi_errors_l2;  // diagnostics
    std::vector<bool> converged;
    double mu_slope = 0, psi_slope = 0;  // fitted d ln(err) / d ln(T)
    double lambda_bar = 0;
    bool all_converged = false;
};

ResidualReport weak_solution_residuals(const SolutionBundle& bundle, const ModelSpec& model,
                                       const Grid& g);

// Energy inequality between two solutions on the same grid/model family,
// over time nodes t1 < t2 (1 <= t1 < t2 <= nt).
EnergyReport energy_inequality_check(const SolutionBundle& a, const SolutionBundle& b,
                                     const ModelSpec& model, const Grid& g, int t1, int t2,
                                     double tol = 1e-3);

// Closed-form ergodic solution for H = |p|^2/2 - V with a power coupling:
// m_bar = f^{-1}(x, (lambda - V)_+), lambda normalized by bisection.
ErgodicOracle explicit_ergodic_oracle(const ModelSpec& model, const Grid& g);

// Value of lambda -> sum_x f^{-1}(x,(lambda-V)_+) h^d (exposed for tests).
double ergodic_oracle_mass(const ModelSpec& model, const Grid& g, double lambda);

LongTimeReport long_time_experiment(const ModelSpec& model, const Grid& unit_grid,
                                    const std::vector<double>& horizons,
                                    const SolverOptions& opts);

// Reinterpret a field on (0,T) as a field on (0,1) via s = t/T (pure
// reindexing; partitions match, so no interpolation happens).
ScalarField rescale_to_unit_time(const Grid& g, const ScalarField& f, Grid* unit_grid = nullptr);

}  // namespace mfg
