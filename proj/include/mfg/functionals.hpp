#pragma once

#include <cstdint>
#include <vector>

#include "mfg/grid.hpp"
#include "mfg/model.hpp"

namespace mfg {

struct PrimalState {
    ScalarField phi;    // time nodes
    ScalarField alpha;  // time cells
};

struct DualState {
    ScalarField m;  // time cells, >= 0
    VectorField w;  // faces within time cells
};

struct ErgodicState {
    double lambda = 0.0;
    std::vector<double> phi;  // spatial
    std::vector<double> m;    // spatial density
    std::vector<double> w;    // spatial faces, d * n_sites, layout [axis][site]
};

// m L(x, w/m) with the convention 0 at (0,0) and +inf at (0, w != 0).
double perspective_kinetic(const ModelSpec& model, std::size_t x, double m, const Vec& w, int d);

// The discrete Hamilton-Jacobi operator alpha_k = -(phi_k - phi_{k-1})/ht + H(x, D phi)
// per time cell, with the left-node gradient (the duality-exact pairing).
ScalarField hj_operator(const Grid& g, const ModelSpec& model, const ScalarField& phi);

// A(phi) with alpha := hj_operator(phi); requires phi(T,.) = phi_T exactly.
double eval_primal_A(const ScalarField& phi, const ModelSpec& model, const Grid& g);

// Relaxed objective: sum F*(x, alpha) - <phi(0), m0>.
double eval_relaxed_A(const PrimalState& s, const ModelSpec& model, const Grid& g);

// Largest violation of -d_t phi + H(x,Dphi) <= alpha over all cells.
double relaxed_constraint_violation(const PrimalState& s, const ModelSpec& model, const Grid& g);

// B(m,w); may return +inf. If infinite_cells is non-null it receives the
// number of cells with m = 0, w != 0.
double eval_dual_B(const DualState& s, const ModelSpec& model, const Grid& g,
                   std::int64_t* infinite_cells = nullptr);

double eval_ergodic_A(double lambda, const std::vector<double>& phi, const ModelSpec& model,
                      const Grid& g);
double eval_ergodic_B(const std::vector<double>& m, const std::vector<double>& w,
                      const ModelSpec& model, const Grid& g,
                      std::int64_t* infinite_cells = nullptr);

// A(phi,alpha) + B(m,w); nonnegative for feasible pairs, ~0 at the saddle.
double duality_gap(const PrimalState& primal, const DualState& dual, const ModelSpec& model,
                   const Grid& g);

}  // namespace mfg
