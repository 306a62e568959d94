#include "mfg/functionals.hpp"

#include <cmath>
#include <limits>

namespace mfg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double perspective_kinetic(const ModelSpec& model, std::size_t x, double m, const Vec& w, int d) {
    if (m == 0.0) {
        for (int a = 0; a < d; ++a)
            if (w[a] != 0.0) return kInf;
        return 0.0;
    }
    Vec v{};
    for (int a = 0; a < d; ++a) v[a] = w[a] / m;
    return m * lagrangian(model, x, v, d);
}

ScalarField hj_operator(const Grid& g, const ModelSpec& model, const ScalarField& phi) {
    if (phi.placement != Placement::TimeNode || phi.n_sites != g.sites() ||
        phi.time_len != g.nt + 1)
        throw std::invalid_argument("hj_operator: phi must be a time-node field on the grid");
    const std::size_t n = g.sites();
    const double inv_ht = 1.0 / g.ht();
    VectorField grad = discrete_gradient(g, phi, /*time_average=*/false);
    ScalarField alpha(g, Placement::TimeCell);
    for (int k = 0; k < g.nt; ++k) {
        const double* lo = &phi.v[static_cast<std::size_t>(k) * n];
        const double* hi = lo + n;
        for (std::size_t j = 0; j < n; ++j) {
            Vec p{};
            for (int a = 0; a < g.d; ++a) p[a] = grad.at(k, a, j);
            alpha.at(k, j) = -(hi[j] - lo[j]) * inv_ht + hamiltonian(model, j, p, g.d);
        }
    }
    return alpha;
}

double eval_primal_A(const ScalarField& phi, const ModelSpec& model, const Grid& g) {
    const std::size_t n = g.sites();
    for (std::size_t j = 0; j < n; ++j) {
        if (phi.at(g.nt, j) != model.phi_T[j])
            throw std::invalid_argument("eval_primal_A: phi(T,.) must equal phi_T");
    }
    ScalarField alpha = hj_operator(g, model, phi);
    double s = 0.0;
    for (int k = 0; k < g.nt; ++k)
        for (std::size_t j = 0; j < n; ++j) s += coupling_F_star(model, j, alpha.at(k, j));
    s *= g.ht() * g.cell_volume();
    double init = 0.0;
    for (std::size_t j = 0; j < n; ++j) init += phi.at(0, j) * model.m0[j];
    return s - init * g.cell_volume();
}

double eval_relaxed_A(const PrimalState& st, const ModelSpec& model, const Grid& g) {
    const std::size_t n = g.sites();
    double s = 0.0;
    for (int k = 0; k < g.nt; ++k)
        for (std::size_t j = 0; j < n; ++j) s += coupling_F_star(model, j, st.alpha.at(k, j));
    s *= g.ht() * g.cell_volume();
    double init = 0.0;
    for (std::size_t j = 0; j < n; ++j) init += st.phi.at(0, j) * model.m0[j];
    return s - init * g.cell_volume();
}

double relaxed_constraint_violation(const PrimalState& st, const ModelSpec& model, const Grid& g) {
    ScalarField hj = hj_operator(g, model, st.phi);
    double worst = 0.0;
    for (std::size_t i = 0; i < hj.v.size(); ++i)
        worst = std::max(worst, hj.v[i] - st.alpha.v[i]);
    return worst;
}

double eval_dual_B(const DualState& st, const ModelSpec& model, const Grid& g,
                   std::int64_t* infinite_cells) {
    const std::size_t n = g.sites();
    std::int64_t bad = 0;
    double interior = 0.0;
    bool infinite = false;
    for (int k = 0; k < g.nt; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            const double m = st.m.at(k, j);
            Vec w{};
            for (int a = 0; a < g.d; ++a) w[a] = st.w.at(k, a, j);
            double kin = perspective_kinetic(model, j, m, w, g.d);
            double cost = coupling_F(model, j, m);
            if (!std::isfinite(kin) || !std::isfinite(cost)) {
                ++bad;
                infinite = true;
                continue;
            }
            interior += kin + cost;
        }
    }
    if (infinite_cells) *infinite_cells = bad;
    if (infinite) return kInf;
    interior *= g.ht() * g.cell_volume();
    double terminal = 0.0;
    for (std::size_t j = 0; j < n; ++j) terminal += model.phi_T[j] * st.m.at(g.nt - 1, j);
    return interior + terminal * g.cell_volume();
}

double eval_ergodic_A(double lambda, const std::vector<double>& phi, const ModelSpec& model,
                      const Grid& g) {
    const std::size_t n = g.sites();
    std::vector<double> grad(static_cast<std::size_t>(g.d) * n);
    spatial_gradient_slice(g, phi.data(), grad.data());
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        Vec p{};
        for (int a = 0; a < g.d; ++a) p[a] = grad[static_cast<std::size_t>(a) * n + j];
        s += coupling_F_star(model, j, lambda + hamiltonian(model, j, p, g.d));
    }
    return s * g.cell_volume() - lambda;
}

double eval_ergodic_B(const std::vector<double>& m, const std::vector<double>& w,
                      const ModelSpec& model, const Grid& g, std::int64_t* infinite_cells) {
    const std::size_t n = g.sites();
    std::int64_t bad = 0;
    double s = 0.0;
    bool infinite = false;
    for (std::size_t j = 0; j < n; ++j) {
        Vec wj{};
        for (int a = 0; a < g.d; ++a) wj[a] = w[static_cast<std::size_t>(a) * n + j];
        double kin = perspective_kinetic(model, j, m[j], wj, g.d);
        double cost = coupling_F(model, j, m[j]);
        if (!std::isfinite(kin) || !std::isfinite(cost)) {
            ++bad;
            infinite = true;
            continue;
        }
        s += kin + cost;
    }
    if (infinite_cells) *infinite_cells = bad;
    if (infinite) return kInf;
    return s * g.cell_volume();
}

double duality_gap(const PrimalState& primal, const DualState& dual, const ModelSpec& model,
                   const Grid& g) {
    return eval_relaxed_A(primal, model, g) + eval_dual_B(dual, model, g);
}

}  // namespace mfg
