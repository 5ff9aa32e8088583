#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hjlab/grid.hpp"

namespace hjlab {

/// A contact Hamiltonian H(x,p,u) with the growth/monotonicity metadata the
/// solvers rely on. The evaluator must be pure (same inputs, same output).
struct HamiltonianSpec {
    std::function<double(const Coord& x, const Coord& p, double u)> eval;
    std::string kind;  // builtin id, or "expr"
    int dim = 1;

    double growth_exponent = 2.0;  // m > 1
    double lambda0 = 0.5;          // coercivity lower bound constant
    double m0 = 1.0;
    double rho_star = 1.0;  // upper bound on d_u H (on the working box)

    bool convex_in_p = true;
    bool superlinear_in_p = true;
    bool monotone_in_u = true;          // d_u H >= 0
    bool strictly_monotone_in_u = false;  // d_u H > 0
    bool convex_in_u = false;

    /// H = |p|^2/2 + W(x,u); enables the Hopf-Cole eigenvalue oracle.
    bool quadratic_separable = false;
    /// argmin_p H(x,.,u) sits at p = 0 for every (x,u) and H is non-decreasing
    /// in each |p_k|; enables the Godunov flux.
    bool pstar_origin = false;

    double operator()(const Coord& x, const Coord& p, double u) const { return eval(x, p, u); }
};

struct BuiltinEntry {
    std::string id;
    std::string description;
};

/// Catalogue of named Hamiltonians used throughout the tests and the CLI.
const std::vector<BuiltinEntry>& builtin_catalogue();

/// Construct a builtin by id (FREE, FREEU, PENDULUM, PENDULUM1, MONOTONE,
/// EX31, EX31N, EX32). Throws ConfigError on unknown id.
HamiltonianSpec make_builtin(const std::string& id, int dim = 1);

/// The piecewise-quadratic u-term of EX32: 0 on [-10,10],
/// sgn(t)*(|t|-10)^2 outside; C^1 at +-10.
double ex32_f(double t);
double ex32_f_prime(double t);

/// Randomized spot check of the asserted u-monotonicity: samples `samples`
/// triples (x,p,u1<u2) and requires H(x,p,u2) >= H(x,p,u1) - 1e-12.
/// Throws ConfigError on violation.
void spot_check_monotone(const HamiltonianSpec& h, int samples, std::uint64_t seed);

/// Centered finite difference of H in u (step du).
double du_hamiltonian(const HamiltonianSpec& h, const Coord& x, const Coord& p, double u,
                      double du = 1e-6);

}  // namespace hjlab
