#include "hjlab/hamiltonian.hpp"

#include <cmath>
#include <random>

namespace hjlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double kinetic(const Coord& p, int dim) {
    double s = p[0] * p[0];
    if (dim == 2) s += p[1] * p[1];
    return 0.5 * s;
}

// Sum over axes of cos(2 pi x_k) - 1; <= 0 with max 0 at the origin.
double well(const Coord& x, int dim) {
    double s = std::cos(2.0 * kPi * x[0]) - 1.0;
    if (dim == 2) s += std::cos(2.0 * kPi * x[1]) - 1.0;
    return s;
}

// Same with the paper's printed period (cos x), kept for reference only.
double well_printed(const Coord& x, int dim) {
    double s = std::cos(x[0]) - 1.0;
    if (dim == 2) s += std::cos(x[1]) - 1.0;
    return s;
}

HamiltonianSpec base(const std::string& id, int dim) {
    HamiltonianSpec h;
    h.kind = id;
    h.dim = dim;
    h.growth_exponent = 2.0;
    h.lambda0 = 0.25;
    h.m0 = 2.0 * dim + 1.0;
    h.quadratic_separable = true;
    h.pstar_origin = true;
    return h;
}

}  // namespace

double ex32_f(double t) {
    if (std::fabs(t) <= 10.0) return 0.0;
    const double s = std::fabs(t) - 10.0;
    return (t > 0 ? 1.0 : -1.0) * s * s;
}

double ex32_f_prime(double t) {
    if (std::fabs(t) <= 10.0) return 0.0;
    return 2.0 * (std::fabs(t) - 10.0);  // same sign handling on both branches
}

const std::vector<BuiltinEntry>& builtin_catalogue() {
    static const std::vector<BuiltinEntry> entries = {
        {"FREE", "|p|^2/2 (x- and u-independent)"},
        {"FREEU", "|p|^2/2 + u (x-independent, strictly monotone in u)"},
        {"PENDULUM", "|p|^2/2 + sum_k(cos(2 pi x_k) - 1) (u-independent)"},
        {"PENDULUM1", "PENDULUM + dim, i.e. |p|^2/2 + sum_k cos(2 pi x_k)"},
        {"MONOTONE", "PENDULUM + u (strictly monotone in u)"},
        {"EX31", "|p|^2/2 + (sum_k(cos(x_k)-1))*(1 - atan(u)/(4 pi)), printed period"},
        {"EX31N", "|p|^2/2 + (sum_k(cos(2 pi x_k)-1))*(1 - atan(u)/(4 pi))"},
        {"EX32", "|p|^2/2 + sum_k(cos(2 pi x_k) - 1) + f(u), f flat on [-10,10]"},
    };
    return entries;
}

HamiltonianSpec make_builtin(const std::string& id, int dim) {
    if (dim != 1 && dim != 2) throw ConfigError("builtin '" + id + "': dim must be 1 or 2");
    HamiltonianSpec h = base(id, dim);
    if (id == "FREE") {
        h.eval = [dim](const Coord&, const Coord& p, double) { return kinetic(p, dim); };
        h.rho_star = 0.0;
    } else if (id == "FREEU") {
        h.eval = [dim](const Coord&, const Coord& p, double u) { return kinetic(p, dim) + u; };
        h.strictly_monotone_in_u = true;
        h.convex_in_u = true;
    } else if (id == "PENDULUM") {
        h.eval = [dim](const Coord& x, const Coord& p, double) {
            return kinetic(p, dim) + well(x, dim);
        };
        h.rho_star = 0.0;
    } else if (id == "PENDULUM1") {
        h.eval = [dim](const Coord& x, const Coord& p, double) {
            return kinetic(p, dim) + well(x, dim) + dim;
        };
        h.rho_star = 0.0;
    } else if (id == "MONOTONE") {
        h.eval = [dim](const Coord& x, const Coord& p, double u) {
            return kinetic(p, dim) + well(x, dim) + u;
        };
        h.strictly_monotone_in_u = true;
        h.convex_in_u = true;
    } else if (id == "EX31" || id == "EX31N") {
        const bool normalized = (id == "EX31N");
        h.eval = [dim, normalized](const Coord& x, const Coord& p, double u) {
            const double w = normalized ? well(x, dim) : well_printed(x, dim);
            return kinetic(p, dim) + w * (1.0 - std::atan(u) / (4.0 * kPi));
        };
        h.rho_star = 2.0 * dim / (4.0 * kPi);
        h.quadratic_separable = true;
    } else if (id == "EX32") {
        h.eval = [dim](const Coord& x, const Coord& p, double u) {
            return kinetic(p, dim) + well(x, dim) + ex32_f(u);
        };
        h.convex_in_u = false;  // f is odd, not convex
        h.rho_star = 8.0;       // valid on |u| <= 14; f' is unbounded globally
    } else {
        throw ConfigError("unknown builtin Hamiltonian '" + id + "'");
    }
    return h;
}

void spot_check_monotone(const HamiltonianSpec& h, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    std::uniform_real_distribution<double> up(-6.0, 6.0);
    std::uniform_real_distribution<double> uu(-12.0, 12.0);
    for (int s = 0; s < samples; ++s) {
        Coord x{ux(rng), h.dim == 2 ? ux(rng) : 0.0};
        Coord p{up(rng), h.dim == 2 ? up(rng) : 0.0};
        double u1 = uu(rng), u2 = uu(rng);
        if (u1 > u2) std::swap(u1, u2);
        if (u1 == u2) u2 += 1e-3;
        if (h.eval(x, p, u2) < h.eval(x, p, u1) - 1e-12)
            throw ConfigError("Hamiltonian '" + h.kind +
                              "' violates the asserted u-monotonicity at sample " +
                              std::to_string(s));
    }
}

double du_hamiltonian(const HamiltonianSpec& h, const Coord& x, const Coord& p, double u,
                      double du) {
    return (h.eval(x, p, u + du) - h.eval(x, p, u - du)) / (2.0 * du);
}

}  // namespace hjlab
