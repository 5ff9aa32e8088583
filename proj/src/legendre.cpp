#include "hjlab/legendre.hpp"

#include <cmath>
#include <string>

namespace hjlab {

namespace {

constexpr double kGolden = 0.6180339887498949;  // (sqrt(5)-1)/2

// Maximize g on [lo,hi] (unimodal); returns argmax, writes value.
template <class F>
double golden_max(F&& g, double lo, double hi, double* value) {
    double a = lo, b = hi;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 80 && (b - a) > 1e-12 * (1.0 + std::fabs(a) + std::fabs(b)); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = g(x1);
        }
    }
    const double xm = 0.5 * (a + b);
    if (value) *value = g(xm);
    return xm;
}

}  // namespace

double LagrangianEval::lagrangian(const Coord& x, const Coord& v, double theta) const {
    return lagrangian(x, v, theta, nullptr);
}

double LagrangianEval::lagrangian(const Coord& x, const Coord& v, double theta,
                                  Coord* argmax) const {
    if (p_points < 129) throw ConfigError("LagrangianEval: p_points must be >= 129");
    if (p_max <= 0.0) throw ConfigError("LagrangianEval: p_max must be positive");
    const int dim = h.dim;
    auto objective = [&](const Coord& p) {
        double dot = p[0] * v[0];
        if (dim == 2) dot += p[1] * v[1];
        const double hv = h.eval(x, p, theta);
        if (!std::isfinite(hv)) throw NumericalError("lagrangian: non-finite Hamiltonian value");
        return dot - hv;
    };

    // Coarse scan. 1D uses the full grid; 2D drops to 33 points per axis and
    // relies on the cyclic refinement below.
    const int coarse = dim == 1 ? p_points : std::min(p_points, 33);
    const double step = 2.0 * p_max / (coarse - 1);
    Coord best{0.0, 0.0};
    double best_val = -1e300;
    Coord p{0.0, 0.0};
    if (dim == 1) {
        for (int i = 0; i < coarse; ++i) {
            p[0] = -p_max + i * step;
            const double val = objective(p);
            if (val > best_val) {
                best_val = val;
                best = p;
            }
        }
    } else {
        for (int i = 0; i < coarse; ++i) {
            p[0] = -p_max + i * step;
            for (int j = 0; j < coarse; ++j) {
                p[1] = -p_max + j * step;
                const double val = objective(p);
                if (val > best_val) {
                    best_val = val;
                    best = p;
                }
            }
        }
    }
    for (int k = 0; k < dim; ++k)
        if (std::fabs(best[k]) >= p_max - 0.5 * step)
            throw NumericalError(
                "lagrangian: maximizer on the p-search boundary (increase p_max); |v|=" +
                std::to_string(std::fabs(v[0])));

    // Golden refinement, one pass per axis (repeated once more in 2D where the
    // axes couple).
    const int rounds = dim == 1 ? 1 : 3;
    for (int r = 0; r < rounds; ++r) {
        for (int k = 0; k < dim; ++k) {
            Coord probe = best;
            auto g = [&](double t) {
                probe[k] = t;
                return objective(probe);
            };
            double val = 0.0;
            const double lo = std::max(-p_max, best[k] - step);
            const double hi = std::min(p_max, best[k] + step);
            const double t = golden_max(g, lo, hi, &val);
            if (val > best_val) {
                best_val = val;
                best[k] = t;
            }
        }
    }
    if (argmax) *argmax = best;
    return best_val;
}

double LagrangianEval::du(const Coord& x, const Coord& v, double theta, double dtheta) const {
    if (dtheta <= 0.0) throw ConfigError("lagrangian du: dtheta must be positive");
    const double d =
        (lagrangian(x, v, theta + dtheta) - lagrangian(x, v, theta - dtheta)) / (2.0 * dtheta);
    if (d > 1e-6)
        throw NumericalError("lagrangian du: positive d_theta L (" + std::to_string(d) +
                             ") contradicts the asserted u-monotonicity");
    return d;
}

double LagrangianEval::du_envelope(const Coord& x, const Coord& v, double theta,
                                   double dtheta) const {
    Coord pstar{0.0, 0.0};
    lagrangian(x, v, theta, &pstar);
    return -(h.eval(x, pstar, theta + dtheta) - h.eval(x, pstar, theta - dtheta)) /
           (2.0 * dtheta);
}

}  // namespace hjlab
