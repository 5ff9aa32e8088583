#include <doctest.h>

#include <cmath>

#include "hjlab/cellsolve.hpp"
#include "hjlab/epsolve.hpp"

using namespace hjlab;

namespace {

EpsProblem eps_problem(const char* id, double eps, double c, Order order, int dim = 1) {
    EpsProblem prob;
    prob.h = make_builtin(id, dim);
    prob.eps = eps;
    prob.c = c;
    prob.order = order;
    return prob;
}

ThetaInterval interval(double lo, double hi) {
    ThetaInterval iv;
    iv.theta_minus = lo;
    iv.theta_plus = hi;
    iv.singleton = (hi - lo) <= 0.05;
    return iv;
}

}  // namespace

TEST_SUITE("epsolve") {

TEST_CASE("FREE+u has the constant solution u = c") {
    const PeriodicGrid grid(1, 32);
    for (double eps : {0.5, 1.0 / 16}) {
        const EpsSolution sol = solve_eps(eps_problem("FREEU", eps, 0.0, Order::first), grid, 1e-6);
        CHECK(sol.u.max_abs() < 1e-6);
        CHECK(sol.cauchy);
        CHECK(sol.residual_sup <= 1e-6);
    }
}

TEST_CASE("MONOTONE: sup|u_eps| <= C eps with C from the corrector") {
    const PeriodicGrid grid(1, 64);
    CellProblem cp;
    cp.h = make_builtin("MONOTONE", 1);
    cp.theta = 0.0;
    const CellSolution cell = solve_cell(cp, grid, 1e-3);
    const double eps = 1.0 / 16;
    const EpsSolution sol = solve_eps(eps_problem("MONOTONE", eps, 0.0, Order::first), grid, 1e-3);
    CHECK(sol.u.max_abs() <= (2.0 * cell.corrector.max_abs() + 0.5) * eps);
    CHECK(sol.cauchy);
}

TEST_CASE("EX32 at c=0: solution stays inside the plateau envelopes") {
    const PeriodicGrid grid(1, 64);
    const double eps = 1.0 / 16;
    EpsProblem prob = eps_problem("EX32", eps, 0.0, Order::first);
    prob.initial_guess = 0.0;
    prob.u_range = std::make_pair(-12.0, 12.0);
    const EpsSolution sol = solve_eps(prob, grid, 1e-3);
    const Envelope env =
        build_envelope(prob.h, eps, 0.0, interval(-10.0, 10.0), Order::first, grid, 1e-3);
    REQUIRE(env.has_lower);
    REQUIRE(env.has_upper);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(sol.u[i] >= env.lower[i] - 2e-3);
        CHECK(sol.u[i] <= env.upper[i] + 2e-3);
    }
}

TEST_CASE("MONOTONE envelopes collapse onto theta = 0 at rate eps") {
    const PeriodicGrid grid(1, 64);
    const double eps = 1.0 / 8;
    const auto h = make_builtin("MONOTONE", 1);
    CellProblem cp;
    cp.h = h;
    const CellSolution cell = solve_cell(cp, PeriodicGrid(1, 64), 1e-3);
    const double wsup = cell.corrector.max_abs();
    const Envelope env = build_envelope(h, eps, 0.0, interval(0.0, 0.0), Order::first, grid, 1e-3);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(std::fabs(env.lower[i]) <= 3.0 * eps * wsup + 1e-6);
        CHECK(std::fabs(env.upper[i]) <= 3.0 * eps * wsup + 1e-6);
        CHECK(env.lower[i] <= env.upper[i]);
    }
}

TEST_CASE("EX32 envelope endpoints land near -+10 with O(eps) deviation") {
    const PeriodicGrid grid(1, 64);
    const double eps = 1.0 / 8;
    const Envelope env = build_envelope(make_builtin("EX32", 1), eps, 0.0,
                                        interval(-10.0, 10.0), Order::first, grid, 1e-3);
    double dev_lo = 0.0, dev_hi = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        dev_lo = std::max(dev_lo, std::fabs(env.lower[i] + 10.0));
        dev_hi = std::max(dev_hi, std::fabs(env.upper[i] - 10.0));
    }
    CHECK(dev_lo <= 2.0 * eps * env.w_minus_sup + 1e-6);
    CHECK(dev_hi <= 2.0 * eps * env.w_plus_sup + 1e-6);
}

TEST_CASE("unbounded interval side omits that envelope and keeps the flag") {
    const PeriodicGrid grid(1, 64);
    ThetaInterval iv = interval(-10.0, 0.0);
    iv.plus_unbounded = true;
    const Envelope env =
        build_envelope(make_builtin("EX32", 1), 0.125, 0.0, iv, Order::first, grid, 1e-3);
    CHECK(env.has_lower);
    CHECK_FALSE(env.has_upper);
}

TEST_CASE("uniqueness probes by route") {
    const PeriodicGrid grid(1, 32);
    {
        EpsProblem prob = eps_problem("MONOTONE", 0.125, 0.0, Order::first);
        const EpsSolution sol = solve_eps(prob, grid, 1e-3);
        const ProbeResult probe = uniqueness_probe(prob, sol, grid, 1e-3);
        CHECK(probe.certified_unique);
        CHECK(probe.ordinal == OrdinalVerdict::empty_certified);
    }
    {
        EpsProblem prob = eps_problem("FREEU", 0.125, 0.0, Order::second);
        const EpsSolution sol = solve_eps(prob, grid, 1e-3);
        const ProbeResult probe = uniqueness_probe(prob, sol, grid, 1e-3);
        CHECK(probe.certified_unique);
        CHECK(probe.max_du == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(probe.shift_residual < 1e-3);
    }
    {
        EpsProblem prob = eps_problem("EX32", 0.125, 0.0, Order::first);
        prob.initial_guess = 0.0;
        prob.u_range = std::make_pair(-12.0, 12.0);
        const EpsSolution sol = solve_eps(prob, grid, 1e-3);
        const ProbeResult probe = uniqueness_probe(prob, sol, grid, 1e-3);
        CHECK_FALSE(probe.certified_unique);
        CHECK(probe.ordinal == OrdinalVerdict::ordinal_found);
    }
}

TEST_CASE("eps-uniform Lipschitz estimates for MONOTONE (first order)") {
    const PeriodicGrid grid(1, 64);
    double lo = 1e300, hi = 0.0;
    for (double eps : {0.25, 0.125, 0.0625, 0.03125, 0.015625}) {
        const EpsSolution sol =
            solve_eps(eps_problem("MONOTONE", eps, 0.0, Order::first), grid, 1e-3);
        lo = std::min(lo, sol.lipschitz_estimate);
        hi = std::max(hi, sol.lipschitz_estimate);
    }
    CHECK(hi <= 1.2 * lo);
}

TEST_CASE("discount trace: sup-changes decrease for the monotone example") {
    const PeriodicGrid grid(1, 64);
    EpsProblem prob = eps_problem("MONOTONE", 0.0625, 0.0, Order::first);
    prob.initial_guess = 1.0;  // start away from the solution
    const EpsSolution sol = solve_eps(prob, grid, 1e-4);
    double prev = 1e300;
    for (const auto& row : sol.lambda_trace) {
        if (std::isnan(row.sup_change)) continue;
        CHECK(row.sup_change <= prev + 1e-12);
        prev = row.sup_change;
    }
}

TEST_CASE("second-order MONOTONE converges to the viscous effective constant") {
    const PeriodicGrid grid(1, 64);
    CellProblem cp;
    cp.h = make_builtin("PENDULUM", 1);
    cp.order = Order::second;
    cp.method = CellMethod::eigenvalue_oracle;
    const double theta_star = -solve_cell(cp, grid, 1e-3).hbar;  // I(0) = {-hbar_pend}
    EpsProblem prob = eps_problem("MONOTONE", 0.0625, 0.0, Order::second);
    prob.initial_guess = theta_star;
    const EpsSolution sol = solve_eps(prob, grid, 1e-3);
    double err = 0.0;
    for (double v : sol.u.values) err = std::max(err, std::fabs(v - theta_star));
    CHECK(err < 0.05);
}

TEST_CASE("input validation") {
    const PeriodicGrid grid(1, 32);
    CHECK_THROWS_AS(solve_eps(eps_problem("FREEU", 0.0, 0.0, Order::first), grid, 1e-3),
                    ConfigError);
    CHECK_THROWS_AS(solve_eps(eps_problem("FREEU", 2.0, 0.0, Order::first), grid, 1e-3),
                    ConfigError);
    CHECK_THROWS_AS(solve_eps(eps_problem("FREEU", 0.5, 0.0, Order::first), PeriodicGrid(1, 16),
                              1e-3),
                    ConfigError);
}

TEST_CASE("2D smoke: FREE+u constant solution") {
    const PeriodicGrid grid(2, 32);
    const EpsSolution sol =
        solve_eps(eps_problem("FREEU", 0.25, 0.5, Order::first, 2), grid, 1e-5);
    // final-level discount floor: u = c/(1+lambda) with lambda = 1e-4
    for (double v : sol.u.values) CHECK(std::fabs(v - 0.5) < 1e-3);
}

TEST_CASE("2D second order goes through the implicit-diffusion path") {
    const PeriodicGrid grid(2, 32);
    const EpsSolution sol =
        solve_eps(eps_problem("FREEU", 0.25, 0.0, Order::second, 2), grid, 1e-5);
    CHECK(sol.u.max_abs() < 1e-5);
    CHECK(sol.residual_sup <= 1e-5);
}

}  // TEST_SUITE
