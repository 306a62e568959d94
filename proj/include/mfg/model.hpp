#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfg/grid.hpp"

namespace mfg {

using Vec = std::array<double, 2>;  // spatial vector, only the first d entries are used

struct AssumptionViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// H(x,p) = c(x)|p|^r / r - V(x)
struct HamiltonianSpec {
    double r = 2.0;
    std::vector<double> c;  // per site, >= c_min > 0
    std::vector<double> V;  // per site
    double r_conj() const { return r / (r - 1.0); }
};

enum class CouplingFamily { Power, Log };

// power: f(x,m) = a(x) m^{q-1};  log: f(x,m) = ln m
struct CouplingSpec {
    CouplingFamily family = CouplingFamily::Power;
    double q = 2.0;         // power family only
    std::vector<double> a;  // per site, >= a_min > 0 (power family)
    double p_conj() const { return q / (q - 1.0); }
};

struct ModelSpec {
    HamiltonianSpec hamiltonian;
    CouplingSpec coupling;
    std::vector<double> m0;     // initial density, > 0, sum m0 hx^d = 1
    std::vector<double> phi_T;  // terminal value

    void validate(const Grid& g) const;
};

struct AssumptionReport {
    double r = 0, r_conj = 0, q = 0, p = 0;
    double growth_constant = 0;  // explicit C in the growth sandwiches
    bool exponent_ok = false;    // r > max{d(q-1), 1}
    double nu = 0;               // (r - d(q-1)) / (d(q-1)(r-1) + r q)
};

double hamiltonian(const ModelSpec& m, std::size_t x, const Vec& p, int d);
double hamiltonian_conjugate(const ModelSpec& m, std::size_t x, const Vec& q, int d);
double lagrangian(const ModelSpec& m, std::size_t x, const Vec& v, int d);  // L(x,v) = H*(x,-v)
Vec dp_hamiltonian(const ModelSpec& m, std::size_t x, const Vec& p, int d);

// coupling f(x,m); -inf at m=0 for the log family
double coupling_f(const ModelSpec& m, std::size_t x, double density);
// primitive F(x,m); +inf for m < 0, finite limit at m=0 where it exists
double coupling_F(const ModelSpec& m, std::size_t x, double density);
// Fenchel conjugate F*(x,alpha) = sup_{m>=0} m*alpha - F(x,m)
double coupling_F_star(const ModelSpec& m, std::size_t x, double alpha);
// the maximizer above: argmax_{m>=0} m*alpha - F(x,m)
double coupling_F_star_subgradient(const ModelSpec& m, std::size_t x, double alpha);

// Validates the exponent relation and reports the derived exponents; throws
// AssumptionViolation when r <= max{d(q-1), 1}.
AssumptionReport check_assumptions(const ModelSpec& m, int d);

}  // namespace mfg
