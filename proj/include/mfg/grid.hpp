#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mfg {

// Space-time discretization of (0,T) x T^d, torus side length 1.
// Scalar sites sit at x_j = j*hx per axis; faces sit between a site and its
// forward neighbour. Time nodes t_k = k*ht (k = 0..nt), time cells k = 1..nt.
struct Grid {
    int d = 1;        // spatial dimension, 1 or 2
    int nx = 2;       // points per spatial axis
    int nt = 1;       // time intervals
    double horizon = 1.0;

    Grid() = default;
    Grid(int d_, int nx_, int nt_, double horizon_);

    double hx() const { return 1.0 / nx; }
    double ht() const { return horizon / nt; }
    // spatial sites per slice
    std::size_t sites() const {
        std::size_t n = 1;
        for (int a = 0; a < d; ++a) n *= static_cast<std::size_t>(nx);
        return n;
    }
    double cell_volume() const {
        double v = 1.0;
        for (int a = 0; a < d; ++a) v *= hx();
        return v;
    }

    // index of the neighbour of site j shifted by +/-1 along axis
    std::size_t neighbor(std::size_t j, int axis, int step) const;
    // physical coordinate of site j along axis
    double coord(std::size_t j, int axis) const;
};

enum class Placement { TimeNode, TimeCell };

struct ScalarField {
    Placement placement = Placement::TimeCell;
    int time_len = 0;   // nt+1 for TimeNode, nt for TimeCell
    std::size_t n_sites = 0;
    std::vector<double> v;

    ScalarField() = default;
    ScalarField(const Grid& g, Placement p, double fill = 0.0);

    double& at(int k, std::size_t j) { return v[static_cast<std::size_t>(k) * n_sites + j]; }
    double at(int k, std::size_t j) const { return v[static_cast<std::size_t>(k) * n_sites + j]; }
};

struct VectorField {
    int d = 1;
    int nt = 0;
    std::size_t n_sites = 0;
    std::vector<double> v;   // layout [cell][axis][site]

    VectorField() = default;
    explicit VectorField(const Grid& g, double fill = 0.0);

    double& at(int k, int axis, std::size_t j) {
        return v[(static_cast<std::size_t>(k) * d + axis) * n_sites + j];
    }
    double at(int k, int axis, std::size_t j) const {
        return v[(static_cast<std::size_t>(k) * d + axis) * n_sites + j];
    }
};

// Forward spatial difference of phi with periodic wrap, one vector per time
// cell. With time_average the two bounding nodes are averaged onto the cell;
// otherwise the cell uses its earlier (left) node, which is the variant whose
// pairing with the backward-difference divergence telescopes exactly.
VectorField discrete_gradient(const Grid& g, const ScalarField& phi, bool time_average);

// Spatial forward difference of one time slice (sites -> faces).
void spatial_gradient_slice(const Grid& g, const double* phi, double* out);

// Backward spatial difference (negative adjoint of the forward gradient).
ScalarField discrete_divergence(const Grid& g, const VectorField& w);
void spatial_divergence_slice(const Grid& g, const double* w, double* out);

struct ContinuityReport {
    double max_l1_residual = 0.0;   // max_k || (m_k - m_{k-1})/ht + div w_k ||_{L1}
    double max_mass_drift = 0.0;    // max_k | sum_j m_k hx^d - 1 |
};

ContinuityReport continuity_residual(const Grid& g, const ScalarField& m,
                                     const VectorField& w, const std::vector<double>& m0);

// Deterministic (fixed-order) weighted inner products.
double dot_cells(const Grid& g, const ScalarField& a, const ScalarField& b);
double dot_faces(const Grid& g, const VectorField& a, const VectorField& b);
double dot_spatial(const Grid& g, const std::vector<double>& a, const std::vector<double>& b);

}  // namespace mfg
