#include "mfg/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mfg {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double norm(const Vec& p, int d) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) s += p[a] * p[a];
    return std::sqrt(s);
}
}  // namespace

void ModelSpec::validate(const Grid& g) const {
    const std::size_t n = g.sites();
    if (!(hamiltonian.r > 1.0)) throw std::invalid_argument("model: r must exceed 1");
    if (hamiltonian.c.size() != n || hamiltonian.V.size() != n)
        throw std::invalid_argument("model: c/V size mismatch with grid");
    for (double ci : hamiltonian.c)
        if (!(ci > 0.0)) throw std::invalid_argument("model: c must be positive");
    if (coupling.family == CouplingFamily::Power) {
        if (!(coupling.q > 1.0)) throw std::invalid_argument("model: q must exceed 1");
        if (coupling.a.size() != n) throw std::invalid_argument("model: a size mismatch with grid");
        for (double ai : coupling.a)
            if (!(ai > 0.0)) throw std::invalid_argument("model: a must be positive");
    }
    if (m0.size() != n || phi_T.size() != n)
        throw std::invalid_argument("model: m0/phi_T size mismatch with grid");
    double mass = 0.0;
    for (double mi : m0) {
        if (!(mi > 0.0)) throw std::invalid_argument("model: m0 must be positive everywhere");
        mass += mi;
    }
    mass *= g.cell_volume();
    if (std::abs(mass - 1.0) > 1e-8)
        throw std::invalid_argument("model: m0 must have unit mass");
    for (double t : phi_T)
        if (!std::isfinite(t)) throw std::invalid_argument("model: phi_T must be finite");
}

double hamiltonian(const ModelSpec& m, std::size_t x, const Vec& p, int d) {
    const double r = m.hamiltonian.r;
    return m.hamiltonian.c[x] * std::pow(norm(p, d), r) / r - m.hamiltonian.V[x];
}

double hamiltonian_conjugate(const ModelSpec& m, std::size_t x, const Vec& q, int d) {
    const double rc = m.hamiltonian.r_conj();
    return std::pow(m.hamiltonian.c[x], 1.0 - rc) * std::pow(norm(q, d), rc) / rc +
           m.hamiltonian.V[x];
}

double lagrangian(const ModelSpec& m, std::size_t x, const Vec& v, int d) {
    Vec neg{};
    for (int a = 0; a < d; ++a) neg[a] = -v[a];
    return hamiltonian_conjugate(m, x, neg, d);
}

Vec dp_hamiltonian(const ModelSpec& m, std::size_t x, const Vec& p, int d) {
    Vec out{};
    const double np = norm(p, d);
    if (np == 0.0) return out;  // c|p|^{r-2}p -> 0 for r > 1
    const double scale = m.hamiltonian.c[x] * std::pow(np, m.hamiltonian.r - 2.0);
    for (int a = 0; a < d; ++a) out[a] = scale * p[a];
    return out;
}

double coupling_f(const ModelSpec& m, std::size_t x, double density) {
    if (m.coupling.family == CouplingFamily::Log) {
        if (density <= 0.0) return -kInf;
        return std::log(density);
    }
    return m.coupling.a[x] * std::pow(density, m.coupling.q - 1.0);
}

double coupling_F(const ModelSpec& m, std::size_t x, double density) {
    if (density < 0.0) return kInf;
    if (m.coupling.family == CouplingFamily::Log) {
        if (density == 0.0) return 1.0;  // limit of m ln m - m + 1
        return density * std::log(density) - density + 1.0;
    }
    const double q = m.coupling.q;
    return m.coupling.a[x] * (std::pow(density, q) - 1.0) / q;
}

double coupling_F_star(const ModelSpec& m, std::size_t x, double alpha) {
    if (m.coupling.family == CouplingFamily::Log) return std::exp(alpha) - 1.0;
    const double q = m.coupling.q;
    const double a = m.coupling.a[x];
    if (alpha <= 0.0) return a / q;  // sup attained at m = 0
    const double p = q / (q - 1.0);
    return std::pow(a, 1.0 - p) * std::pow(alpha, p) / p + a / q;
}

double coupling_F_star_subgradient(const ModelSpec& m, std::size_t x, double alpha) {
    if (m.coupling.family == CouplingFamily::Log) return std::exp(alpha);
    if (alpha <= 0.0) return 0.0;
    return std::pow(alpha / m.coupling.a[x], 1.0 / (m.coupling.q - 1.0));
}

AssumptionReport check_assumptions(const ModelSpec& m, int d) {
    AssumptionReport rep;
    rep.r = m.hamiltonian.r;
    rep.r_conj = m.hamiltonian.r_conj();
    const bool log_family = m.coupling.family == CouplingFamily::Log;
    // the log coupling grows slower than any power: treat q - 1 as arbitrarily small
    rep.q = log_family ? 1.0 : m.coupling.q;
    rep.p = log_family ? kInf : m.coupling.p_conj();

    double c_min = kInf, c_max = 0.0, v_max = 0.0;
    for (double ci : m.hamiltonian.c) {
        c_min = std::min(c_min, ci);
        c_max = std::max(c_max, ci);
    }
    for (double vi : m.hamiltonian.V) v_max = std::max(v_max, std::abs(vi));
    double C = std::max({c_max, 1.0 / c_min, v_max, 1.0});
    if (!log_family) {
        double a_min = kInf, a_max = 0.0;
        for (double ai : m.coupling.a) {
            a_min = std::min(a_min, ai);
            a_max = std::max(a_max, ai);
        }
        C = std::max({C, a_max, 1.0 / a_min});
    }
    rep.growth_constant = C;

    const double dq1 = d * (rep.q - 1.0);
    rep.exponent_ok = rep.r > std::max(dq1, 1.0);
    rep.nu = (rep.r - dq1) / (dq1 * (rep.r - 1.0) + rep.r * rep.q);
    if (!rep.exponent_ok) {
        throw AssumptionViolation(
            "assumption violated: r > max{d(q-1),1} fails (r = " + std::to_string(rep.r) +
            ", d(q-1) = " + std::to_string(dq1) + ")");
    }
    return rep;
}

}  // namespace mfg
