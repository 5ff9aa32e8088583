#pragma once

#include <string>

#include "hjlab/epsolve.hpp"

namespace hjlab {

struct RateRow {
    double eps;
    double sup_error;
    double lipschitz;
    long iterations;
    bool cauchy;
};

/// Convergence-rate study against the effective-constant target theta.
struct RateReport {
    std::string example;
    double c = 0.0;
    double theta = 0.0;
    Order order = Order::first;
    std::vector<RateRow> rows;  // sorted by decreasing eps
    double fitted_slope = 0.0;
    double fitted_C = 0.0;
    bool pass = false;
};

/// Least squares on (log eps, log err): returns {slope, C = exp(intercept)}.
std::pair<double, double> fit_loglog(const std::vector<std::pair<double, double>>& rows);

/// Runs solve_eps per eps (each of the form 1/2^k, >= 4 entries), measures
/// sup_x |u_eps - theta|, fits the rate; pass iff slope >= 0.7 and every row
/// satisfies sup_error <= 1.5 * C * eps.
RateReport rate_sweep(const HamiltonianSpec& h, Order order, double c, double theta,
                      const std::vector<double>& eps_list, const PeriodicGrid& grid, double tol,
                      std::optional<double> initial_guess = std::nullopt);

struct EnvelopeRow {
    double eps;
    bool contained;
    double max_violation;    // positive = containment broken by this much
    double dev_minus;        // ||lower - theta_-||_inf (NaN when side absent)
    double dev_plus;
    double width;            // sup(upper - lower) (NaN when one-sided)
    bool cauchy;
};

struct EnvelopeReport {
    std::string example;
    double c = 0.0;
    Order order = Order::first;
    double theta_minus = 0.0, theta_plus = 0.0;
    bool minus_unbounded = false, plus_unbounded = false;
    std::vector<EnvelopeRow> rows;
    double fitted_C_env = 0.0;  // max over rows of endpoint deviation / eps
    bool all_contained = false;
};

/// Per eps: build the envelopes, solve, and verify nodewise containment up to
/// 2*tol; endpoint deviations must shrink like O(eps) (C_env reported).
EnvelopeReport envelope_sweep(const HamiltonianSpec& h, Order order, double c,
                              const ThetaInterval& interval,
                              const std::vector<double>& eps_list, const PeriodicGrid& grid,
                              double tol);

}  // namespace hjlab
