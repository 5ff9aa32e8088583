#include "hjlab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hjlab {

namespace {

void validate_eps_list(const std::vector<double>& eps_list, std::size_t min_count) {
    if (eps_list.size() < min_count)
        throw ConfigError("sweep needs at least " + std::to_string(min_count) +
                          " eps values, got " + std::to_string(eps_list.size()));
    for (double e : eps_list) {
        if (!(e > 0.0 && e <= 1.0)) throw ConfigError("sweep: eps must lie in (0,1]");
        const double k = std::log2(1.0 / e);
        if (std::fabs(k - std::round(k)) > 1e-9)
            throw ConfigError("sweep: eps must be of the form 1/2^k, got " + std::to_string(e));
    }
}

}  // namespace

std::pair<double, double> fit_loglog(const std::vector<std::pair<double, double>>& rows) {
    if (rows.size() < 2) throw ConfigError("fit_loglog: need at least 2 rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(rows.size());
    for (const auto& [eps, err] : rows) {
        const double x = std::log(eps);
        const double y = std::log(std::max(err, 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    return {slope, std::exp(intercept)};
}

RateReport rate_sweep(const HamiltonianSpec& h, Order order, double c, double theta,
                      const std::vector<double>& eps_list, const PeriodicGrid& grid, double tol,
                      std::optional<double> initial_guess) {
    validate_eps_list(eps_list, 4);
    std::vector<double> eps_sorted(eps_list);
    std::sort(eps_sorted.rbegin(), eps_sorted.rend());

    RateReport report;
    report.example = h.kind;
    report.c = c;
    report.theta = theta;
    report.order = order;

    std::string failures;
    for (double eps : eps_sorted) {
        EpsProblem prob;
        prob.h = h;
        prob.eps = eps;
        prob.c = c;
        prob.order = order;
        prob.initial_guess = initial_guess.value_or(theta);
        try {
            const EpsSolution sol = solve_eps(prob, grid, tol);
            double err = 0.0;
            for (double v : sol.u.values) err = std::max(err, std::fabs(v - theta));
            report.rows.push_back({eps, err, sol.lipschitz_estimate, sol.iterations, sol.cauchy});
        } catch (const NumericalError& e) {
            failures += std::string(failures.empty() ? "" : "; ") + e.what();
        }
    }
    if (report.rows.size() < 4)
        throw NumericalError("rate_sweep: fewer than 4 converged rows (" + failures + ")");

    std::vector<std::pair<double, double>> pts;
    for (const auto& row : report.rows) pts.push_back({row.eps, row.sup_error});
    std::tie(report.fitted_slope, report.fitted_C) = fit_loglog(pts);

    report.pass = report.fitted_slope >= 0.7;
    for (const auto& row : report.rows)
        if (row.sup_error > report.fitted_C * row.eps * 1.5) report.pass = false;
    return report;
}

EnvelopeReport envelope_sweep(const HamiltonianSpec& h, Order order, double c,
                              const ThetaInterval& interval,
                              const std::vector<double>& eps_list, const PeriodicGrid& grid,
                              double tol) {
    validate_eps_list(eps_list, 1);
    if (interval.minus_unbounded && interval.plus_unbounded)
        throw ConfigError("envelope_sweep: interval must be finite on at least one side");
    std::vector<double> eps_sorted(eps_list);
    std::sort(eps_sorted.rbegin(), eps_sorted.rend());

    EnvelopeReport report;
    report.example = h.kind;
    report.c = c;
    report.order = order;
    report.theta_minus = interval.theta_minus;
    report.theta_plus = interval.theta_plus;
    report.minus_unbounded = interval.minus_unbounded;
    report.plus_unbounded = interval.plus_unbounded;
    report.all_contained = true;
    report.fitted_C_env = 0.0;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (double eps : eps_sorted) {
        const Envelope env = build_envelope(h, eps, c, interval, order, grid, tol);

        EpsProblem prob;
        prob.h = h;
        prob.eps = eps;
        prob.c = c;
        prob.order = order;
        if (!interval.minus_unbounded && !interval.plus_unbounded)
            prob.initial_guess = 0.5 * (interval.theta_minus + interval.theta_plus);
        else
            prob.initial_guess = interval.minus_unbounded ? interval.theta_plus
                                                          : interval.theta_minus;
        if (!interval.minus_unbounded && !interval.plus_unbounded)
            prob.u_range = std::make_pair(interval.theta_minus - 2.0 - std::fabs(c),
                                          interval.theta_plus + 2.0 + std::fabs(c));
        const EpsSolution sol = solve_eps(prob, grid, tol);

        EnvelopeRow row{eps, true, 0.0, nan, nan, nan, sol.cauchy};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (env.has_lower)
                row.max_violation = std::max(row.max_violation, env.lower[i] - sol.u[i]);
            if (env.has_upper)
                row.max_violation = std::max(row.max_violation, sol.u[i] - env.upper[i]);
        }
        row.contained = row.max_violation <= 2.0 * tol;
        if (!row.contained) report.all_contained = false;

        double dev = 0.0;
        if (env.has_lower) {
            row.dev_minus = 0.0;
            for (double v : env.lower.values)
                row.dev_minus = std::max(row.dev_minus, std::fabs(v - interval.theta_minus));
            dev = std::max(dev, row.dev_minus);
        }
        if (env.has_upper) {
            row.dev_plus = 0.0;
            for (double v : env.upper.values)
                row.dev_plus = std::max(row.dev_plus, std::fabs(v - interval.theta_plus));
            dev = std::max(dev, row.dev_plus);
        }
        if (env.has_lower && env.has_upper) {
            row.width = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i)
                row.width = std::max(row.width, env.upper[i] - env.lower[i]);
        }
        report.fitted_C_env = std::max(report.fitted_C_env, dev / eps);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace hjlab
