#pragma once

#include <optional>

#include "hjlab/effective.hpp"
#include "hjlab/mather.hpp"

namespace hjlab {

/// Oscillatory problem H(x/eps, du, u) = (order==second: eps lap u +) c on the
/// eps-torus, solved in the rescaled variable y = x/eps on the unit grid.
struct EpsProblem {
    HamiltonianSpec h;
    double eps = 0.125;
    double c = 0.0;
    Order order = Order::first;
    std::optional<double> initial_guess;                    // default 0
    std::optional<std::pair<double, double>> u_range;       // sampling box override
};

struct LambdaTraceRow {
    double lambda;
    double sup_change;  // vs previous settled level (NaN for the first)
    long iterations;
};

struct EpsSolution {
    ScalarField u;  // u_eps sampled on the eps-torus: u(eps*y_i) = u[i]
    double eps = 0.0;
    std::vector<LambdaTraceRow> lambda_trace;
    double lipschitz_estimate = 0.0;  // max one-sided slope in x units
    double residual_sup = 0.0;        // final-lambda discounted residual
    double final_lambda = 0.0;
    bool cauchy = false;  // discount ladder became Cauchy within tol
    long iterations = 0;
};

/// Vanishing-discount solve over lambda in {1e-1,1e-2,1e-3,1e-4} with warm
/// starts; a level is settled when the discounted residual drops below tol/2,
/// the ladder stops early once consecutive settled fields differ by <= tol.
/// A non-Cauchy sweep is reported in the trace (cauchy=false), not an error.
EpsSolution solve_eps(const EpsProblem& prob, const PeriodicGrid& grid, double tol);

/// Sub/supersolution envelopes theta_-+ + eps*w(x/eps) -+ eps*||w||.
struct Envelope {
    ScalarField lower, upper;
    bool has_lower = false, has_upper = false;
    double theta_minus = 0.0, theta_plus = 0.0;
    double w_minus_sup = 0.0, w_plus_sup = 0.0;
    double lower_residual_max = 0.0;  // max of (NumH - nu lap - c) on lower; <= check tol
    double upper_residual_min = 0.0;  // min of the same on upper; >= -check tol
};

Envelope build_envelope(const HamiltonianSpec& h, double eps, double c,
                        const ThetaInterval& interval, Order order, const PeriodicGrid& grid,
                        double tol);

struct ProbeResult {
    bool certified_unique = false;
    double max_du = 0.0;                                      // second order route
    double shift_residual = 0.0;                              // second order route
    OrdinalVerdict ordinal = OrdinalVerdict::inconclusive;    // first order route
    double ordinal_integral = 0.0;
};

/// Second order: certified-unique iff max_x d_u H(x/eps, du_eps, u_eps)
/// exceeds 10x the derivative step; also reports the constant-shift residual
/// from a re-solve with a shifted initial guess. First order: certified-unique
/// iff the ordinal diagnostic on the frozen field is empty-certified.
ProbeResult uniqueness_probe(const EpsProblem& prob, const EpsSolution& sol,
                             const PeriodicGrid& grid, double tol);

}  // namespace hjlab
