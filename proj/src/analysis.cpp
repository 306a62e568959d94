#include "mfg/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace mfg {

ResidualReport weak_solution_residuals(const SolutionBundle& bundle, const ModelSpec& model,
                                       const Grid& g) {
    const std::size_t n = g.sites();
    ResidualReport rep;
    rep.continuity_residual =
        continuity_residual(g, bundle.m, bundle.w, model.m0).max_l1_residual;
    for (std::size_t j = 0; j < n; ++j)
        rep.terminal_violation =
            std::max(rep.terminal_violation, bundle.phi.at(g.nt, j) - model.phi_T[j]);
    rep.terminal_violation = std::max(rep.terminal_violation, 0.0);

    double m_max = 0.0;
    for (double mi : bundle.m.v) m_max = std::max(m_max, mi);
    const double eps_m = 1e-10 * m_max;

    ScalarField alpha = hj_operator(g, model, bundle.phi);
    VectorField grad = discrete_gradient(g, bundle.phi, /*time_average=*/false);
    double identity = 0.0;
    for (int k = 0; k < g.nt; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            const double m = bundle.m.at(k, j);
            if (m > eps_m)
                rep.hj_inequality_violation = std::max(
                    rep.hj_inequality_violation, alpha.at(k, j) - coupling_f(model, j, m));
            Vec p{};
            for (int a = 0; a < g.d; ++a) p[a] = grad.at(k, a, j);
            Vec dph = dp_hamiltonian(model, j, p, g.d);
            double dot = 0.0;
            for (int a = 0; a < g.d; ++a) dot += p[a] * dph[a];
            double f_m = m > 0.0 ? coupling_f(model, j, m) : 0.0;
            identity += m * (hamiltonian(model, j, p, g.d) - dot - f_m);
        }
    }
    identity *= g.ht() * g.cell_volume();
    double boundary = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        boundary += model.phi_T[j] * bundle.m.at(g.nt - 1, j) - bundle.phi.at(0, j) * model.m0[j];
    rep.identity_gap = std::abs(identity - boundary * g.cell_volume());
    return rep;
}

namespace {

// H(x,p1) - H(x,p2) - DpH(x,p2).(p1-p2) >= 0
double bregman_h(const ModelSpec& model, std::size_t x, const Vec& p1, const Vec& p2, int d) {
    Vec dph = dp_hamiltonian(model, x, p2, d);
    double s = hamiltonian(model, x, p1, d) - hamiltonian(model, x, p2, d);
    for (int a = 0; a < d; ++a) s -= dph[a] * (p1[a] - p2[a]);
    return s;
}

double coupling_f_safe(const ModelSpec& model, std::size_t x, double m) {
    if (model.coupling.family == CouplingFamily::Log) m = std::max(m, 1e-300);
    return coupling_f(model, x, m);
}

}  // namespace

EnergyReport energy_inequality_check(const SolutionBundle& fa, const SolutionBundle& fb,
                                     const ModelSpec& model, const Grid& g, int t1, int t2,
                                     double tol) {
    if (fa.m.n_sites != g.sites() || fb.m.n_sites != g.sites() || fa.m.time_len != fb.m.time_len)
        throw std::invalid_argument("energy_inequality_check: grid mismatch");
    if (!(1 <= t1 && t1 < t2 && t2 <= g.nt))
        throw std::invalid_argument("energy_inequality_check: need 1 <= t1 < t2 <= nt");
    const std::size_t n = g.sites();
    VectorField ga = discrete_gradient(g, fa.phi, false);
    VectorField gb = discrete_gradient(g, fb.phi, false);
    EnergyReport rep;
    for (int k = t1; k < t2; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            Vec p1{}, p2{};
            for (int a = 0; a < g.d; ++a) {
                p1[a] = ga.at(k, a, j);
                p2[a] = gb.at(k, a, j);
            }
            const double m1 = fa.m.at(k, j), m2 = fb.m.at(k, j);
            rep.bregman_a += m2 * bregman_h(model, j, p1, p2, g.d);
            rep.bregman_b += m1 * bregman_h(model, j, p2, p1, g.d);
            rep.monotone +=
                (coupling_f_safe(model, j, m2) - coupling_f_safe(model, j, m1)) * (m2 - m1);
        }
    }
    const double omega = g.ht() * g.cell_volume();
    rep.bregman_a *= omega;
    rep.bregman_b *= omega;
    rep.monotone *= omega;
    rep.lhs = rep.bregman_a + rep.bregman_b + rep.monotone;
    // boundary pairing; a node pairs with the cell that ends there
    auto pairing = [&](int node) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            s += (fb.m.at(node - 1, j) - fa.m.at(node - 1, j)) *
                 (fb.phi.at(node, j) - fa.phi.at(node, j));
        return s * g.cell_volume();
    };
    // the pairing is non-increasing: its time derivative is minus the
    // dissipation collected in lhs, so the budget is pairing(t1) - pairing(t2)
    rep.rhs = pairing(t1) - pairing(t2);
    rep.pass = rep.lhs <= rep.rhs + tol && rep.lhs >= -tol;
    return rep;
}

double ergodic_oracle_mass(const ModelSpec& model, const Grid& g, double lambda) {
    const std::size_t n = g.sites();
    double mass = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double excess = lambda - model.hamiltonian.V[j];
        if (excess > 0.0)
            mass += std::pow(excess / model.coupling.a[j], 1.0 / (model.coupling.q - 1.0));
    }
    return mass * g.cell_volume();
}

ErgodicOracle explicit_ergodic_oracle(const ModelSpec& model, const Grid& g) {
    if (model.coupling.family != CouplingFamily::Power)
        throw WrongFamily("explicit_ergodic_oracle: needs the power coupling (f(x,0) = 0)");
    if (std::abs(model.hamiltonian.r - 2.0) > 1e-12)
        throw WrongFamily("explicit_ergodic_oracle: needs r = 2");
    for (double ci : model.hamiltonian.c)
        if (std::abs(ci - 1.0) > 1e-12)
            throw WrongFamily("explicit_ergodic_oracle: needs c == 1");
    const std::size_t n = g.sites();
    double v_min = model.hamiltonian.V[0], v_max = v_min;
    for (double vi : model.hamiltonian.V) {
        v_min = std::min(v_min, vi);
        v_max = std::max(v_max, vi);
    }
    double lo = v_min, hi = v_max + 1.0;
    while (ergodic_oracle_mass(model, g, hi) < 1.0) hi = v_min + 2.0 * (hi - v_min);
    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        if (ergodic_oracle_mass(model, g, mid) < 1.0) lo = mid; else hi = mid;
    }
    ErgodicOracle out;
    out.lambda = 0.5 * (lo + hi);
    out.m.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        double excess = out.lambda - model.hamiltonian.V[j];
        out.m[j] = excess > 0.0
                       ? std::pow(excess / model.coupling.a[j], 1.0 / (model.coupling.q - 1.0))
                       : 0.0;
    }
    return out;
}

ScalarField rescale_to_unit_time(const Grid& g, const ScalarField& f, Grid* unit_grid) {
    if (unit_grid) *unit_grid = Grid(g.d, g.nx, g.nt, 1.0);
    return f;  // same partition count; s = t/T is a pure reindexing
}

namespace {

double fit_slope(const std::vector<double>& ts, const std::vector<double>& errs) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!(errs[i] > 0.0)) continue;
        double x = std::log(ts[i]), y = std::log(errs[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    if (cnt < 2) return 0.0;
    double den = cnt * sxx - sx * sx;
    return den != 0.0 ? (cnt * sxy - sx * sy) / den : 0.0;
}

}  // namespace

LongTimeReport long_time_experiment(const ModelSpec& model, const Grid& unit_grid,
                                    const std::vector<double>& horizons,
                                    const SolverOptions& opts) {
    for (std::size_t i = 1; i < horizons.size(); ++i)
        if (!(horizons[i] > horizons[i - 1]))
            throw std::invalid_argument("long_time_experiment: horizons must be increasing");
    const double ht = unit_grid.ht();
    const std::size_t n = unit_grid.sites();
    const double vol = unit_grid.cell_volume();
    const double delta = 0.1;

    LongTimeReport rep;
    std::vector<double> m_bar, phi_bar(n, 0.0), w_bar(static_cast<std::size_t>(unit_grid.d) * n,
                                                      0.0);
    try {
        ErgodicOracle oracle = explicit_ergodic_oracle(model, unit_grid);
        rep.lambda_bar = oracle.lambda;
        m_bar = std::move(oracle.m);
    } catch (const WrongFamily&) {
        ErgodicSolution erg = solve_ergodic(model, unit_grid, opts);
        rep.lambda_bar = erg.lambda;
        m_bar = std::move(erg.m);
        phi_bar = std::move(erg.phi);
        w_bar = std::move(erg.w);
    }

    rep.all_converged = true;
    for (double T : horizons) {
        const int nt = std::max(1, static_cast<int>(std::lround(T / ht)));
        Grid g(unit_grid.d, unit_grid.nx, nt, T);
        // turnpike warm start: the long-horizon solution hugs the ergodic
        // profile except in boundary layers near t = 0 and t = T
        SolverOptions topts = opts;
        {
            auto wphi = std::make_shared<ScalarField>(g, Placement::TimeNode);
            auto wm = std::make_shared<ScalarField>(g, Placement::TimeCell);
            auto ww = std::make_shared<VectorField>(g);
            for (int k = 0; k <= nt; ++k)
                for (std::size_t j = 0; j < n; ++j)
                    wphi->at(k, j) = rep.lambda_bar * (T - k * ht) + phi_bar[j];
            for (int k = 0; k < nt; ++k) {
                for (std::size_t j = 0; j < n; ++j) wm->at(k, j) = m_bar[j];
                for (int a = 0; a < unit_grid.d; ++a)
                    for (std::size_t j = 0; j < n; ++j)
                        ww->at(k, a, j) = w_bar[static_cast<std::size_t>(a) * n + j];
            }
            topts.warm_phi = wphi;
            topts.warm_m = wm;
            topts.warm_w = ww;
        }
        SolutionBundle sol = solve_time_dependent(model, g, topts);
        rep.horizons.push_back(T);
        rep.converged.push_back(sol.converged);
        rep.all_converged = rep.all_converged && sol.converged;
        const double hs = 1.0 / nt;  // rescaled time step
        double mu_l1 = 0.0, mu_l2 = 0.0;
        for (int k = 0; k < nt; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                double e = std::abs(sol.m.at(k, j) - m_bar[j]);
                mu_l1 += e;
                mu_l2 += e * e;
            }
        rep.mu_errors.push_back(mu_l1 * hs * vol);
        rep.mu_errors_l2.push_back(std::sqrt(mu_l2 * hs * vol));
        double psi_l1 = 0.0, psi_l2 = 0.0;
        for (int k = 0; k < nt; ++k) {
            const double s = k * hs;  // left node of the rescaled cell
            if (s < delta) continue;
            for (std::size_t j = 0; j < n; ++j) {
                double e = std::abs(sol.phi.at(k, j) / T - rep.lambda_bar * (1.0 - s));
                psi_l1 += e;
                psi_l2 += e * e;
            }
        }
        rep.psi_errors.push_back(psi_l1 * hs * vol);
        rep.psi_errors_l2.push_back(std::sqrt(psi_l2 * hs * vol));
    }
    rep.mu_slope = fit_slope(rep.horizons, rep.mu_errors);
    rep.psi_slope = fit_slope(rep.horizons, rep.psi_errors);
    return rep;
}

}  // namespace mfg
