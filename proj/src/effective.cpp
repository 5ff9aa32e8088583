#include "hjlab/effective.hpp"

#include <cmath>
#include <string>

#include "hjlab/mather.hpp"

namespace hjlab {

namespace {

double hbar_at(const EffectiveCurve& curve, double theta) {
    CellProblem prob;
    prob.h = curve.h;
    prob.theta = theta;
    prob.order = curve.order;
    prob.method = curve.method;
    const PeriodicGrid grid(curve.h.dim, curve.grid_n);
    return solve_cell(prob, grid, curve.tol).hbar;
}

}  // namespace

EffectiveCurve sample_curve(const HamiltonianSpec& h, Order order, double theta_min,
                            double theta_max, int count, const PeriodicGrid& grid, double tol,
                            CellMethod method) {
    if (!(theta_min < theta_max)) throw ConfigError("sample_curve: need theta_min < theta_max");
    if (count < 9) throw ConfigError("sample_curve: need at least 9 samples");
    EffectiveCurve curve;
    curve.h = h;
    curve.order = order;
    curve.method = method;
    curve.grid_n = grid.n();
    curve.tol = tol;
    curve.samples.reserve(count);
    for (int j = 0; j < count; ++j) {
        const double theta = theta_min + (theta_max - theta_min) * j / (count - 1.0);
        CellProblem prob;
        prob.h = h;
        prob.theta = theta;
        prob.order = order;
        prob.method = method;
        const CellSolution sol = solve_cell(prob, grid, tol);
        curve.samples.push_back({theta, sol.hbar, sol.residual_sup});
    }
    for (std::size_t j = 1; j < curve.samples.size(); ++j)
        if (curve.samples[j].hbar < curve.samples[j - 1].hbar - 2.0 * tol)
            throw NumericalError("sample_curve: hbar decreased by more than 2*tol between theta=" +
                                 std::to_string(curve.samples[j - 1].theta) + " and theta=" +
                                 std::to_string(curve.samples[j].theta) +
                                 " (solver breakdown)");
    return curve;
}

ThetaInterval level_set(const EffectiveCurve& curve, double c, double resolution) {
    if (resolution <= 0.0) throw ConfigError("level_set: resolution must be positive");
    const auto& s = curve.samples;
    if (s.size() < 2) throw ConfigError("level_set: curve has too few samples");
    const double slack = curve.tol;

    double hbar_min = s.front().hbar, hbar_max = s.front().hbar;
    for (const auto& row : s) {
        hbar_min = std::min(hbar_min, row.hbar);
        hbar_max = std::max(hbar_max, row.hbar);
    }
    if (c < hbar_min - slack || c > hbar_max + slack)
        throw ConfigError("level_set: c = " + std::to_string(c) +
                          " lies outside the sampled hbar range [" + std::to_string(hbar_min) +
                          ", " + std::to_string(hbar_max) + "]");

    ThetaInterval out;
    out.c = c;

    // theta_minus: smallest theta with hbar >= c - slack.
    std::size_t jlo = s.size();
    for (std::size_t j = 0; j < s.size(); ++j)
        if (s[j].hbar >= c - slack) {
            jlo = j;
            break;
        }
    if (jlo == s.size())
        throw ConfigError("level_set: no sample reaches c - slack (c above the range)");
    if (jlo == 0) {
        out.minus_unbounded = true;
        out.theta_minus = s.front().theta;
    } else {
        double lo = s[jlo - 1].theta, hi = s[jlo].theta;
        while (hi - lo > resolution / 4.0) {
            const double mid = 0.5 * (lo + hi);
            if (hbar_at(curve, mid) >= c - slack)
                hi = mid;
            else
                lo = mid;
        }
        out.theta_minus = 0.5 * (lo + hi);
    }

    // theta_plus: largest theta with hbar <= c + slack.
    std::size_t jhi = s.size();
    for (std::size_t j = s.size(); j-- > 0;)
        if (s[j].hbar <= c + slack) {
            jhi = j;
            break;
        }
    if (jhi == s.size())
        throw ConfigError("level_set: no sample stays below c + slack (c below the range)");
    if (jhi + 1 == s.size()) {
        out.plus_unbounded = true;
        out.theta_plus = s.back().theta;
    } else {
        double lo = s[jhi].theta, hi = s[jhi + 1].theta;
        while (hi - lo > resolution / 4.0) {
            const double mid = 0.5 * (lo + hi);
            if (hbar_at(curve, mid) <= c + slack)
                lo = mid;
            else
                hi = mid;
        }
        out.theta_plus = 0.5 * (lo + hi);
    }

    out.singleton = !out.minus_unbounded && !out.plus_unbounded &&
                    (out.theta_plus - out.theta_minus) <= resolution;
    return out;
}

Certificate singleton_certificate(const HamiltonianSpec& h, Order order,
                                  const ThetaInterval& interval, const PeriodicGrid& grid,
                                  double tol, std::optional<double> candidate_theta) {
    std::vector<double> candidates;
    if (candidate_theta) {
        candidates.push_back(*candidate_theta);
    } else {
        if (!interval.minus_unbounded) candidates.push_back(interval.theta_minus);
        if (!interval.plus_unbounded) candidates.push_back(interval.theta_plus);
        if (!interval.minus_unbounded && !interval.plus_unbounded)
            candidates.push_back(0.5 * (interval.theta_minus + interval.theta_plus));
    }
    if (candidates.empty())
        throw ConfigError(
            "singleton_certificate: interval unbounded on both sides and no candidate theta");
    // Dedupe near-identical candidates (singleton intervals collapse to one solve).
    std::vector<double> unique;
    for (double t : candidates) {
        bool seen = false;
        for (double u : unique)
            if (std::fabs(u - t) < 1e-3) seen = true;
        if (!seen) unique.push_back(t);
    }
    candidates = unique;

    if (order == Order::first) {
        // An empty ordinal Mather set at theta certifies the singleton;
        // anything else is inconclusive at this resolution.
        MeasureGrid mg = default_measure_grid(h.dim);
        for (double theta : candidates) {
            const OrdinalResult diag =
                ordinal_diagnostic(h, Frozen{theta}, mg, default_fourier_order(h.dim));
            if (diag.verdict != OrdinalVerdict::empty_certified) return Certificate::inconclusive;
        }
        return Certificate::certified_singleton;
    }

    // A positive sampled max of d_u H along any corrector gradient in I(c)
    // certifies the singleton.
    const double du_step = 1e-6;
    double best = -1e300;
    for (double theta : candidates) {
        CellProblem prob;
        prob.h = h;
        prob.theta = theta;
        prob.order = Order::second;
        const CellSolution sol = solve_cell(prob, grid, tol);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const Coord du = gradient_centered(sol.corrector, i);
            best = std::max(best, du_hamiltonian(h, grid.node(i), du, theta, du_step));
        }
    }
    return best > 10.0 * du_step ? Certificate::certified_singleton : Certificate::inconclusive;
}

}  // namespace hjlab
