#include "mfg/grid.hpp"

#include <cmath>
#include <cstdlib>

namespace mfg {

Grid::Grid(int d_, int nx_, int nt_, double horizon_) : d(d_), nx(nx_), nt(nt_), horizon(horizon_) {
    if (d < 1 || d > 2) throw std::invalid_argument("grid: d must be 1 or 2");
    if (nx < 2) throw std::invalid_argument("grid: nx must be >= 2");
    if (nt < 1) throw std::invalid_argument("grid: nt must be >= 1");
    if (!(horizon > 0.0)) throw std::invalid_argument("grid: horizon must be positive");
}

std::size_t Grid::neighbor(std::size_t j, int axis, int step) const {
    const long n = nx;
    long s = ((step % n) + n) % n;
    if (axis == 0) {
        long i = static_cast<long>(j) % n;
        return j - static_cast<std::size_t>(i) + static_cast<std::size_t>((i + s) % n);
    }
    // axis == 1
    long i = (static_cast<long>(j) / n) % n;
    return j + (static_cast<std::size_t>((i + s) % n) - static_cast<std::size_t>(i)) * static_cast<std::size_t>(n);
}

double Grid::coord(std::size_t j, int axis) const {
    const std::size_t n = static_cast<std::size_t>(nx);
    std::size_t i = (axis == 0) ? j % n : (j / n) % n;
    return static_cast<double>(i) * hx();
}

ScalarField::ScalarField(const Grid& g, Placement p, double fill)
    : placement(p),
      time_len(p == Placement::TimeNode ? g.nt + 1 : g.nt),
      n_sites(g.sites()),
      v(static_cast<std::size_t>(time_len) * g.sites(), fill) {}

VectorField::VectorField(const Grid& g, double fill)
    : d(g.d), nt(g.nt), n_sites(g.sites()),
      v(static_cast<std::size_t>(g.nt) * g.d * g.sites(), fill) {}

void spatial_gradient_slice(const Grid& g, const double* phi, double* out) {
    const std::size_t n = g.sites();
    const double inv_hx = 1.0 / g.hx();
    for (int a = 0; a < g.d; ++a) {
        double* o = out + static_cast<std::size_t>(a) * n;
        for (std::size_t j = 0; j < n; ++j) {
            o[j] = (phi[g.neighbor(j, a, +1)] - phi[j]) * inv_hx;
        }
    }
}

void spatial_divergence_slice(const Grid& g, const double* w, double* out) {
    const std::size_t n = g.sites();
    const double inv_hx = 1.0 / g.hx();
    for (std::size_t j = 0; j < n; ++j) out[j] = 0.0;
    for (int a = 0; a < g.d; ++a) {
        const double* wa = w + static_cast<std::size_t>(a) * n;
        for (std::size_t j = 0; j < n; ++j) {
            out[j] += (wa[j] - wa[g.neighbor(j, a, -1)]) * inv_hx;
        }
    }
}

VectorField discrete_gradient(const Grid& g, const ScalarField& phi, bool time_average) {
    if (phi.placement != Placement::TimeNode)
        throw std::invalid_argument("discrete_gradient: phi must live on time nodes");
    const std::size_t n = g.sites();
    VectorField out(g);
    std::vector<double> slice(n);
    for (int k = 0; k < g.nt; ++k) {
        const double* lo = &phi.v[static_cast<std::size_t>(k) * n];
        const double* hi = lo + n;
        if (time_average) {
            for (std::size_t j = 0; j < n; ++j) slice[j] = 0.5 * (lo[j] + hi[j]);
            spatial_gradient_slice(g, slice.data(), &out.v[static_cast<std::size_t>(k) * g.d * n]);
        } else {
            spatial_gradient_slice(g, lo, &out.v[static_cast<std::size_t>(k) * g.d * n]);
        }
    }
    return out;
}

ScalarField discrete_divergence(const Grid& g, const VectorField& w) {
    if (w.d != g.d || w.nt != g.nt || w.n_sites != g.sites())
        throw std::invalid_argument("discrete_divergence: field/grid shape mismatch");
    const std::size_t n = g.sites();
    ScalarField out;
    out.placement = Placement::TimeCell;
    out.time_len = g.nt;
    out.n_sites = n;
    out.v.assign(static_cast<std::size_t>(g.nt) * n, 0.0);
    for (int k = 0; k < g.nt; ++k) {
        spatial_divergence_slice(g, &w.v[static_cast<std::size_t>(k) * g.d * n],
                                 &out.v[static_cast<std::size_t>(k) * n]);
    }
    return out;
}

ContinuityReport continuity_residual(const Grid& g, const ScalarField& m,
                                     const VectorField& w, const std::vector<double>& m0) {
    const std::size_t n = g.sites();
    if (m.placement != Placement::TimeCell || m.n_sites != n || m.time_len != g.nt)
        throw std::invalid_argument("continuity_residual: m must be a time-cell field on the grid");
    if (m0.size() != n) throw std::invalid_argument("continuity_residual: m0 size mismatch");
    ScalarField divw = discrete_divergence(g, w);
    const double vol = g.cell_volume();
    const double inv_ht = 1.0 / g.ht();
    ContinuityReport rep;
    for (int k = 0; k < g.nt; ++k) {
        const double* prev = (k == 0) ? m0.data() : &m.v[static_cast<std::size_t>(k - 1) * n];
        const double* cur = &m.v[static_cast<std::size_t>(k) * n];
        const double* dv = &divw.v[static_cast<std::size_t>(k) * n];
        double l1 = 0.0, mass = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            l1 += std::abs((cur[j] - prev[j]) * inv_ht + dv[j]);
            mass += cur[j];
        }
        l1 *= vol;
        mass *= vol;
        if (l1 > rep.max_l1_residual) rep.max_l1_residual = l1;
        double drift = std::abs(mass - 1.0);
        if (drift > rep.max_mass_drift) rep.max_mass_drift = drift;
    }
    return rep;
}

double dot_cells(const Grid& g, const ScalarField& a, const ScalarField& b) {
    if (a.v.size() != b.v.size()) throw std::invalid_argument("dot_cells: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
    return s * g.cell_volume();
}

double dot_faces(const Grid& g, const VectorField& a, const VectorField& b) {
    if (a.v.size() != b.v.size()) throw std::invalid_argument("dot_faces: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
    return s * g.cell_volume();
}

double dot_spatial(const Grid& g, const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot_spatial: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s * g.cell_volume();
}

}  // namespace mfg
