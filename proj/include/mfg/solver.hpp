#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mfg/functionals.hpp"
#include "mfg/grid.hpp"
#include "mfg/model.hpp"

namespace mfg {

struct InfeasibleInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InnerProxFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverOptions {
    int max_iters = 20000;
    double tol_gap = 1e-4;    // relative duality gap
    double tol_feas = 1e-4;   // continuity / divergence residual (max L1 per cell)
    double step_primal = 0;   // sigma; 0 = auto (0.9 / ||K||)
    double step_dual = 0;     // tau;   0 = auto
    double theta = 1.0;       // over-relaxation in [0,1]
    double prox_inner_tol = 1e-11;
    int prox_inner_max_iters = 200;
    std::uint64_t rng_seed = 0;
    int check_every = 25;      // gap/feasibility evaluation cadence
    double init_noise = 1e-3;  // seeded perturbation of the initial iterate
    // optional warm start (sizes must match the grid; noise is not applied)
    std::shared_ptr<const ScalarField> warm_phi;  // time nodes
    std::shared_ptr<const ScalarField> warm_m;    // time cells
    std::shared_ptr<const VectorField> warm_w;    // faces
};

struct GapRecord {
    int iter = 0;
    double A = 0, B = 0, gap = 0, feasibility = 0;
};

struct SolutionBundle {
    ScalarField phi;    // time nodes
    ScalarField alpha;  // time cells
    ScalarField m;      // time cells
    VectorField w;      // faces
    std::vector<GapRecord> gap_history;
    int iterations = 0;
    bool converged = false;
    double final_gap_rel = 0;
    double final_feasibility = 0;
    double mass_drift_raw = 0;  // per-cell mass drift before renormalization
    AssumptionReport assumptions;
};

struct ErgodicSolution {
    double lambda = 0;
    std::vector<double> phi;
    std::vector<double> m;
    std::vector<double> w;  // [axis][site]
    std::vector<GapRecord> gap_history;
    int iterations = 0;
    bool converged = false;
    double final_gap_rel = 0;
    double final_feasibility = 0;  // L1 norm of div w
    AssumptionReport assumptions;
};

struct ProxResult {
    double a = 0;
    Vec b{};
    double multiplier = 0;  // the recovered density at the prox point
    int iterations = 0;
};

// Minimizer of F*(x, -a' + H(x,b')) + (1/2 sigma)(|a'-a|^2 + |b'-b|^2),
// solved by a safeguarded Newton/bisection root-find in the scalar multiplier.
ProxResult prox_primal_point(double a, const Vec& b, double sigma, std::size_t x,
                             const ModelSpec& model, int d, double inner_tol = 1e-11,
                             int inner_max_iters = 200);

// Power-method estimate of the Euclidean norm of the combined space-time
// derivative operator phi -> (d_t phi, D phi).
double estimate_operator_norm(const Grid& g);

SolutionBundle solve_time_dependent(const ModelSpec& model, const Grid& g,
                                    const SolverOptions& opts);

ErgodicSolution solve_ergodic(const ModelSpec& model, const Grid& g, const SolverOptions& opts);

}  // namespace mfg
