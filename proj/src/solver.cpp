#include "mfg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace mfg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double fstar_prime(const ModelSpec& model, std::size_t x, double alpha) {
    return coupling_F_star_subgradient(model, x, alpha);
}

double fstar_second(const ModelSpec& model, std::size_t x, double alpha) {
    if (model.coupling.family == CouplingFamily::Log) return std::exp(alpha);
    if (alpha <= 0.0) return 0.0;
    const double q = model.coupling.q;
    const double a = model.coupling.a[x];
    return std::pow(alpha / a, (2.0 - q) / (q - 1.0)) / (a * (q - 1.0));
}

// rho solving rho + eta*rho^{r-1} = nb on [0, nb], eta >= 0
double shrink_radius(double nb, double eta, double r) {
    if (nb == 0.0 || eta == 0.0) return nb;
    if (r == 2.0) return nb / (1.0 + eta);
    double lo = 0.0, hi = nb;
    double rho = nb / (1.0 + eta);
    for (int it = 0; it < 100; ++it) {
        double val = rho + eta * std::pow(rho, r - 1.0) - nb;
        if (val > 0.0) hi = rho; else lo = rho;
        double slope = 1.0 + eta * (r - 1.0) * std::pow(rho, r - 2.0);
        double next = rho - val / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - rho) <= 1e-15 * (1.0 + nb)) { rho = next; break; }
        rho = next;
    }
    return rho;
}

}  // namespace

ProxResult prox_primal_point(double a, const Vec& b, double sigma, std::size_t x,
                             const ModelSpec& model, int d, double inner_tol,
                             int inner_max_iters) {
    if (!(sigma > 0.0)) throw std::invalid_argument("prox_primal_point: sigma must be positive");
    const double c = model.hamiltonian.c[x];
    const double r = model.hamiltonian.r;
    const double V = model.hamiltonian.V[x];
    double nb = 0.0;
    for (int ax = 0; ax < d; ++ax) nb += b[ax] * b[ax];
    nb = std::sqrt(nb);

    if (r == 2.0 && model.coupling.family == CouplingFamily::Power &&
        model.coupling.q == 2.0) {
        // quadratic Hamiltonian, linear coupling derivative: the inner equation
        // (ac + sigma) g + a + V - c nb^2 / (2 (1 + sigma c g)^2) = 0 is
        // increasing and concave in g, so plain Newton from g = 0 is monotone
        const double ac = model.coupling.a[x];
        ProxResult res;
        if (a + V - 0.5 * c * nb * nb >= 0.0) {  // flat region of F*
            res.a = a;
            res.b = b;
            return res;
        }
        double g = 0.0;
        int it = 0;
        for (; it < inner_max_iters; ++it) {
            double u = 1.0 + sigma * c * g;
            double rhs = 0.5 * c * nb * nb / (u * u);
            double val = (ac + sigma) * g + a + V - rhs;
            double slope = (ac + sigma) + 2.0 * sigma * c * rhs / u;
            double step = val / slope;
            g -= step;
            if (std::abs(step) <= inner_tol * (1.0 + g)) break;
        }
        res.a = a + sigma * g;
        if (nb > 0.0) {
            double scale = 1.0 / (1.0 + sigma * c * g);
            for (int ax = 0; ax < d; ++ax) res.b[ax] = b[ax] * scale;
        }
        res.multiplier = g;
        res.iterations = it;
        return res;
    }

    const double h_at_b = c * std::pow(nb, r) / r - V;
    const double g_hi = fstar_prime(model, x, -a + h_at_b);
    ProxResult res;
    if (g_hi <= 0.0) {  // flat region of F*: the point is already the prox
        res.a = a;
        res.b = b;
        return res;
    }

    // psi(g) = g - F*'(x, -a - sigma g + H(x, b'(g))), strictly increasing,
    // psi(0) <= 0 <= psi(g_hi)
    auto eval = [&](double g, double& rho) {
        rho = shrink_radius(nb, sigma * g * c, r);
        double arg = -a - sigma * g + c * std::pow(rho, r) / r - V;
        return g - fstar_prime(model, x, arg);
    };

    double lo = 0.0, hi = g_hi;
    double g = 0.5 * g_hi;
    double rho = nb;
    int it = 0;
    for (; it < inner_max_iters; ++it) {
        double val = eval(g, rho);
        if (std::abs(val) <= inner_tol * (1.0 + g) || hi - lo <= inner_tol * (1.0 + g_hi)) break;
        if (val > 0.0) hi = g; else lo = g;
        // Newton step; psi' >= 1 always
        double eta = sigma * g * c;
        double denom = 1.0 + eta * (r - 1.0) * (rho > 0.0 ? std::pow(rho, r - 2.0) : 0.0);
        double drho_dg = (nb > 0.0) ? -sigma * c * std::pow(rho, r - 1.0) / denom : 0.0;
        double darg = -sigma + c * std::pow(rho, r - 1.0) * drho_dg;
        double arg = -a - sigma * g + c * std::pow(rho, r) / r - V;
        double slope = 1.0 - fstar_second(model, x, arg) * darg;
        double next = g - val / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        g = next;
    }
    if (it >= inner_max_iters)
        throw InnerProxFailure("prox_primal_point: no convergence; step sizes may be too large");

    rho = shrink_radius(nb, sigma * g * c, r);
    res.a = a + sigma * g;
    if (nb > 0.0) {
        for (int ax = 0; ax < d; ++ax) res.b[ax] = b[ax] * (rho / nb);
    }
    res.multiplier = g;
    res.iterations = it;
    return res;
}

double estimate_operator_norm(const Grid& g) {
    const std::size_t n = g.sites();
    const std::size_t nodes = static_cast<std::size_t>(g.nt + 1) * n;
    const double inv_ht = 1.0 / g.ht();
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> x(nodes);
    for (double& xi : x) xi = unif(rng);
    std::vector<double> ka(static_cast<std::size_t>(g.nt) * n);
    std::vector<double> kb(static_cast<std::size_t>(g.nt) * g.d * n);
    std::vector<double> div(n);
    double est = 0.0, prev = 0.0;
    for (int sweep = 0; sweep < 400; ++sweep) {
        // y = K x
        for (int k = 0; k < g.nt; ++k) {
            const double* lo = &x[static_cast<std::size_t>(k) * n];
            const double* hi = lo + n;
            double* a = &ka[static_cast<std::size_t>(k) * n];
            for (std::size_t j = 0; j < n; ++j) a[j] = (hi[j] - lo[j]) * inv_ht;
            spatial_gradient_slice(g, lo, &kb[static_cast<std::size_t>(k) * g.d * n]);
        }
        // x = K^T y
        std::fill(x.begin(), x.end(), 0.0);
        for (int k = 0; k < g.nt; ++k) {
            const double* a = &ka[static_cast<std::size_t>(k) * n];
            double* lo = &x[static_cast<std::size_t>(k) * n];
            double* hi = lo + n;
            spatial_divergence_slice(g, &kb[static_cast<std::size_t>(k) * g.d * n], div.data());
            for (std::size_t j = 0; j < n; ++j) {
                lo[j] += -a[j] * inv_ht - div[j];
                hi[j] += a[j] * inv_ht;
            }
        }
        double nrm = 0.0;
        for (double xi : x) nrm += xi * xi;
        nrm = std::sqrt(nrm);
        est = std::sqrt(nrm);
        for (double& xi : x) xi /= nrm;
        if (sweep > 0 && std::abs(est - prev) <= 1e-10 * est) break;
        prev = est;
    }
    return est;
}

namespace {

struct TdIterate {
    ScalarField phi;        // time nodes
    std::vector<double> ya; // cells, equals -m
    std::vector<double> yb; // faces, equals -w
};

void td_apply_K(const Grid& g, const ScalarField& phi, std::vector<double>& ka,
                std::vector<double>& kb) {
    const std::size_t n = g.sites();
    const double inv_ht = 1.0 / g.ht();
    for (int k = 0; k < g.nt; ++k) {
        const double* lo = &phi.v[static_cast<std::size_t>(k) * n];
        const double* hi = lo + n;
        double* a = &ka[static_cast<std::size_t>(k) * n];
        for (std::size_t j = 0; j < n; ++j) a[j] = (hi[j] - lo[j]) * inv_ht;
        spatial_gradient_slice(g, lo, &kb[static_cast<std::size_t>(k) * g.d * n]);
    }
}

void td_apply_KT(const Grid& g, const std::vector<double>& ya, const std::vector<double>& yb,
                 std::vector<double>& out_nodes, std::vector<double>& scratch) {
    const std::size_t n = g.sites();
    const double inv_ht = 1.0 / g.ht();
    std::fill(out_nodes.begin(), out_nodes.end(), 0.0);
    for (int k = 0; k < g.nt; ++k) {
        const double* a = &ya[static_cast<std::size_t>(k) * n];
        double* lo = &out_nodes[static_cast<std::size_t>(k) * n];
        double* hi = lo + n;
        spatial_divergence_slice(g, &yb[static_cast<std::size_t>(k) * g.d * n], scratch.data());
        for (std::size_t j = 0; j < n; ++j) {
            lo[j] += -a[j] * inv_ht - scratch[j];
            hi[j] += a[j] * inv_ht;
        }
    }
}

void fields_from_dual(const std::vector<double>& ya, const std::vector<double>& yb,
                      ScalarField& m, VectorField& w) {
    for (std::size_t i = 0; i < ya.size(); ++i) m.v[i] = -ya[i];
    for (std::size_t i = 0; i < yb.size(); ++i) w.v[i] = -yb[i];
}

}  // namespace

SolutionBundle solve_time_dependent(const ModelSpec& model, const Grid& g,
                                    const SolverOptions& opts) {
    {
        double mass = 0.0;
        for (double mi : model.m0) mass += mi;
        mass *= g.cell_volume();
        if (model.m0.size() != g.sites() || std::abs(mass - 1.0) > 1e-8)
            throw InfeasibleInput("solve_time_dependent: m0 must be a unit-mass density on the grid");
    }
    model.validate(g);
    AssumptionReport assumptions = check_assumptions(model, g.d);

    const std::size_t n = g.sites();
    const std::size_t ncells = static_cast<std::size_t>(g.nt) * n;
    const std::size_t nfaces = ncells * g.d;
    const double vol = g.cell_volume();

    const double op_norm = estimate_operator_norm(g) * std::sqrt(g.ht());
    double sigma = opts.step_primal > 0 ? opts.step_primal : 0.9 / op_norm;
    double tau = opts.step_dual > 0 ? opts.step_dual : 0.9 / op_norm;
    if (sigma * tau * op_norm * op_norm > 1.0 + 1e-9)
        throw std::invalid_argument("solver: step sizes violate sigma*tau*||K||^2 <= 1");

    std::mt19937_64 rng(opts.rng_seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    TdIterate it;
    it.phi = ScalarField(g, Placement::TimeNode);
    if (opts.warm_phi) {
        if (opts.warm_phi->v.size() != it.phi.v.size())
            throw std::invalid_argument("solver: warm_phi size mismatch");
        it.phi.v = opts.warm_phi->v;
    } else {
        for (int k = 0; k < g.nt; ++k)
            for (std::size_t j = 0; j < n; ++j) it.phi.at(k, j) = opts.init_noise * unif(rng);
    }
    for (std::size_t j = 0; j < n; ++j) it.phi.at(g.nt, j) = model.phi_T[j];
    it.ya.resize(ncells);
    if (opts.warm_m) {
        if (opts.warm_m->v.size() != ncells)
            throw std::invalid_argument("solver: warm_m size mismatch");
        for (std::size_t i = 0; i < ncells; ++i) it.ya[i] = -std::max(opts.warm_m->v[i], 0.0);
    } else {
        for (int k = 0; k < g.nt; ++k)
            for (std::size_t j = 0; j < n; ++j) {
                double mm = model.m0[j] * (1.0 + opts.init_noise * unif(rng));
                it.ya[static_cast<std::size_t>(k) * n + j] = -std::max(mm, 0.0);
            }
    }
    it.yb.assign(nfaces, 0.0);
    if (opts.warm_w) {
        if (opts.warm_w->v.size() != nfaces)
            throw std::invalid_argument("solver: warm_w size mismatch");
        for (std::size_t i = 0; i < nfaces; ++i) it.yb[i] = -opts.warm_w->v[i];
    }

    ScalarField phibar = it.phi;
    ScalarField phiprev = it.phi;
    std::vector<double> ka(ncells), kb(nfaces), kty(static_cast<std::size_t>(g.nt + 1) * n),
        scratch(n);

    ScalarField m_field(g, Placement::TimeCell);
    VectorField w_field(g);

    SolutionBundle best;
    double best_score = kInf;
    std::vector<GapRecord> history;
    bool converged = false;
    int iters_done = 0;
    TdIterate best_it = it;

    auto evaluate = [&](int iter) {
        ScalarField alpha = hj_operator(g, model, it.phi);
        PrimalState ps{it.phi, alpha};
        double A = eval_relaxed_A(ps, model, g);
        fields_from_dual(it.ya, it.yb, m_field, w_field);
        DualState ds{m_field, w_field};
        double B = eval_dual_B(ds, model, g);
        ContinuityReport feas = continuity_residual(g, m_field, w_field, model.m0);
        double gap = A + B;
        double rel = std::abs(gap) / (1.0 + std::abs(A) + std::abs(B));
        history.push_back({iter, A, B, gap, feas.max_l1_residual});
        double score = rel + std::max(0.0, feas.max_l1_residual - opts.tol_feas);
        if (score < best_score) {
            best_score = score;
            best_it = it;
        }
        return rel <= opts.tol_gap && feas.max_l1_residual <= opts.tol_feas;
    };

    for (int iter = 1; iter <= opts.max_iters; ++iter) {
        iters_done = iter;
        // dual ascent step with prox of the composite objective
        td_apply_K(g, phibar, ka, kb);
        const double inv_tau = 1.0 / tau;
        for (int k = 0; k < g.nt; ++k) {
            const std::size_t cbase = static_cast<std::size_t>(k) * n;
            const std::size_t fbase = static_cast<std::size_t>(k) * g.d * n;
            for (std::size_t j = 0; j < n; ++j) {
                double va = it.ya[cbase + j] + tau * ka[cbase + j];
                Vec vb{};
                for (int a = 0; a < g.d; ++a)
                    vb[a] = it.yb[fbase + static_cast<std::size_t>(a) * n + j] +
                            tau * kb[fbase + static_cast<std::size_t>(a) * n + j];
                Vec vb_over{};
                for (int a = 0; a < g.d; ++a) vb_over[a] = vb[a] * inv_tau;
                ProxResult pr = prox_primal_point(va * inv_tau, vb_over, inv_tau, j, model, g.d,
                                                  opts.prox_inner_tol, opts.prox_inner_max_iters);
                it.ya[cbase + j] = va - tau * pr.a;
                for (int a = 0; a < g.d; ++a)
                    it.yb[fbase + static_cast<std::size_t>(a) * n + j] = vb[a] - tau * pr.b[a];
            }
        }
        // primal descent step (linear objective; terminal node stays pinned)
        td_apply_KT(g, it.ya, it.yb, kty, scratch);
        phiprev.v = it.phi.v;
        const double sht = sigma * g.ht();
        for (int k = 0; k < g.nt; ++k) {
            double* p = &it.phi.v[static_cast<std::size_t>(k) * n];
            const double* kt = &kty[static_cast<std::size_t>(k) * n];
            for (std::size_t j = 0; j < n; ++j) p[j] -= sht * kt[j];
        }
        for (std::size_t j = 0; j < n; ++j) it.phi.v[j] += sigma * model.m0[j];
        for (std::size_t i = 0; i < it.phi.v.size(); ++i)
            phibar.v[i] = it.phi.v[i] + opts.theta * (it.phi.v[i] - phiprev.v[i]);

        if (iter % opts.check_every == 0 || iter == opts.max_iters) {
            if (evaluate(iter)) {
                converged = true;
                break;
            }
        }
    }

    const TdIterate& ret = converged ? it : best_it;

    SolutionBundle out;
    out.assumptions = assumptions;
    out.iterations = iters_done;
    out.converged = converged;
    out.gap_history = std::move(history);
    out.phi = ret.phi;
    out.alpha = hj_operator(g, model, ret.phi);
    out.m = ScalarField(g, Placement::TimeCell);
    out.w = VectorField(g);
    fields_from_dual(ret.ya, ret.yb, out.m, out.w);
    // per-slice renormalization: continuity holds only to tol_feas, so the
    // slice masses carry a residual-sized drift we remove here
    double max_drift = 0.0;
    for (int k = 0; k < g.nt; ++k) {
        double mass = 0.0;
        for (std::size_t j = 0; j < n; ++j) mass += out.m.at(k, j);
        mass *= vol;
        max_drift = std::max(max_drift, std::abs(mass - 1.0));
        if (mass > 0.0) {
            for (std::size_t j = 0; j < n; ++j) out.m.at(k, j) /= mass;
        }
    }
    out.mass_drift_raw = max_drift;
    {
        PrimalState ps{out.phi, out.alpha};
        DualState ds{out.m, out.w};
        double A = eval_relaxed_A(ps, model, g);
        double B = eval_dual_B(ds, model, g);
        out.final_gap_rel = std::abs(A + B) / (1.0 + std::abs(A) + std::abs(B));
        out.final_feasibility = continuity_residual(g, out.m, out.w, model.m0).max_l1_residual;
    }
    return out;
}

ErgodicSolution solve_ergodic(const ModelSpec& model, const Grid& g, const SolverOptions& opts) {
    model.validate(g);
    AssumptionReport assumptions = check_assumptions(model, g.d);

    const std::size_t n = g.sites();
    const std::size_t nf = static_cast<std::size_t>(g.d) * n;
    const double vol = g.cell_volume();

    // power method for the weighted norm of (lambda, phi) -> (lambda*1 + 0, D phi)
    double op_norm;
    {
        std::mt19937_64 rng(4321);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        double lam = unif(rng);
        std::vector<double> phi(n), ka(n), kb(nf), div(n);
        for (double& p : phi) p = unif(rng);
        double est = 1.0, prev = 0.0;
        for (int sweep = 0; sweep < 400; ++sweep) {
            spatial_gradient_slice(g, phi.data(), kb.data());
            for (std::size_t j = 0; j < n; ++j) ka[j] = lam;
            // weighted adjoint: lambda row sums with volume weight, phi row is Euclidean
            double lam_new = 0.0;
            for (std::size_t j = 0; j < n; ++j) lam_new += ka[j];
            lam_new *= vol;
            spatial_divergence_slice(g, kb.data(), div.data());
            for (std::size_t j = 0; j < n; ++j) phi[j] = -div[j];
            lam = lam_new;
            double nrm = lam * lam;
            for (std::size_t j = 0; j < n; ++j) nrm += vol * phi[j] * phi[j];
            nrm = std::sqrt(nrm);
            est = std::sqrt(nrm);
            lam /= nrm;
            for (double& p : phi) p /= nrm;
            if (sweep > 0 && std::abs(est - prev) <= 1e-10 * est) break;
            prev = est;
        }
        op_norm = est;
    }
    double sigma = opts.step_primal > 0 ? opts.step_primal : 0.9 / op_norm;
    double tau = opts.step_dual > 0 ? opts.step_dual : 0.9 / op_norm;
    if (sigma * tau * op_norm * op_norm > 1.0 + 1e-9)
        throw std::invalid_argument("solver: step sizes violate sigma*tau*||K||^2 <= 1");

    std::mt19937_64 rng(opts.rng_seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    double lam = 0.0;
    std::vector<double> phi(n), ya(n), yb(nf, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        phi[j] = opts.init_noise * unif(rng);
        ya[j] = std::max(model.m0[j] * (1.0 + opts.init_noise * unif(rng)), 0.0);
    }
    double lam_bar = lam, lam_prev = lam;
    std::vector<double> phi_bar = phi, phi_prev = phi;
    std::vector<double> ka(n), kb(nf), div(n), m(n), w(nf);

    std::vector<GapRecord> history;
    bool converged = false;
    int iters_done = 0;
    double best_score = kInf;
    double b_lam = lam;
    std::vector<double> b_phi = phi, b_ya = ya, b_yb = yb;

    auto evaluate = [&](int iter) {
        for (std::size_t j = 0; j < n; ++j) m[j] = ya[j];
        for (std::size_t i = 0; i < nf; ++i) w[i] = -yb[i];
        double A = eval_ergodic_A(lam, phi, model, g);
        double B = eval_ergodic_B(m, w, model, g);
        spatial_divergence_slice(g, w.data(), div.data());
        double feas = 0.0, mass = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            feas += std::abs(div[j]);
            mass += m[j];
        }
        feas *= vol;
        mass *= vol;
        feas = std::max(feas, std::abs(mass - 1.0));
        double gap = A + B;
        double rel = std::abs(gap) / (1.0 + std::abs(A) + std::abs(B));
        history.push_back({iter, A, B, gap, feas});
        double score = rel + std::max(0.0, feas - opts.tol_feas);
        if (score < best_score) {
            best_score = score;
            b_lam = lam;
            b_phi = phi;
            b_ya = ya;
            b_yb = yb;
        }
        return rel <= opts.tol_gap && feas <= opts.tol_feas;
    };

    const double inv_tau = 1.0 / tau;
    for (int iter = 1; iter <= opts.max_iters; ++iter) {
        iters_done = iter;
        spatial_gradient_slice(g, phi_bar.data(), kb.data());
        for (std::size_t j = 0; j < n; ++j) {
            double vs = ya[j] + tau * lam_bar;
            Vec vb{};
            for (int a = 0; a < g.d; ++a)
                vb[a] = (yb[static_cast<std::size_t>(a) * n + j] +
                         tau * kb[static_cast<std::size_t>(a) * n + j]) * inv_tau;
            // composite here is F*(x, s + H(x,b)); reuse the prox via a = -s
            ProxResult pr = prox_primal_point(-vs * inv_tau, vb, inv_tau, j, model, g.d,
                                              opts.prox_inner_tol, opts.prox_inner_max_iters);
            ya[j] = vs - tau * (-pr.a);
            for (int a = 0; a < g.d; ++a)
                yb[static_cast<std::size_t>(a) * n + j] = vb[a] * tau - tau * pr.b[a];
        }
        lam_prev = lam;
        phi_prev = phi;
        double mass = 0.0;
        for (std::size_t j = 0; j < n; ++j) mass += ya[j];
        mass *= vol;
        lam -= sigma * (mass - 1.0);
        spatial_divergence_slice(g, yb.data(), div.data());
        for (std::size_t j = 0; j < n; ++j) phi[j] += sigma * div[j];
        lam_bar = lam + opts.theta * (lam - lam_prev);
        for (std::size_t j = 0; j < n; ++j)
            phi_bar[j] = phi[j] + opts.theta * (phi[j] - phi_prev[j]);

        if (iter % opts.check_every == 0 || iter == opts.max_iters) {
            if (evaluate(iter)) {
                converged = true;
                break;
            }
        }
    }

    if (!converged) {
        lam = b_lam;
        phi = b_phi;
        ya = b_ya;
        yb = b_yb;
    }

    ErgodicSolution out;
    out.assumptions = assumptions;
    out.iterations = iters_done;
    out.converged = converged;
    out.gap_history = std::move(history);
    out.lambda = lam;
    out.phi = phi;
    out.m.resize(n);
    out.w.resize(nf);
    double mass = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        out.m[j] = std::max(ya[j], 0.0);
        mass += out.m[j];
    }
    mass *= vol;
    if (mass > 0.0)
        for (std::size_t j = 0; j < n; ++j) out.m[j] /= mass;
    for (std::size_t i = 0; i < nf; ++i) out.w[i] = -yb[i];
    {
        double A = eval_ergodic_A(out.lambda, out.phi, model, g);
        double B = eval_ergodic_B(out.m, out.w, model, g);
        out.final_gap_rel = std::abs(A + B) / (1.0 + std::abs(A) + std::abs(B));
        spatial_divergence_slice(g, out.w.data(), div.data());
        double feas = 0.0;
        for (std::size_t j = 0; j < n; ++j) feas += std::abs(div[j]);
        out.final_feasibility = feas * vol;
    }
    return out;
}

}  // namespace mfg
