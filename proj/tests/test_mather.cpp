#include <doctest.h>

#include <cmath>

#include "hjlab/cellsolve.hpp"
#include "hjlab/mather.hpp"

using namespace hjlab;

TEST_SUITE("mather") {

TEST_CASE("FREE first order: zero action carried on v = 0") {
    const MeasureGrid mg = default_measure_grid(1);
    const MatherResult res =
        mather_lp(make_builtin("FREE", 1), Frozen{0.0}, Order::first, mg, 8);
    CHECK(std::fabs(res.c_value) < 1e-9);
    CHECK(std::fabs(res.measure.mass() - 1.0) < 1e-9);
    for (const auto& atom : res.support) CHECK(std::fabs(atom.v[0]) < 1e-12);
    double feas = 0.0;
    for (double r : res.row_residuals) feas = std::max(feas, std::fabs(r));
    CHECK(feas <= 1e-8);
}

TEST_CASE("PENDULUM first order: Mather measure at the hyperbolic fixed point") {
    const MeasureGrid mg = default_measure_grid(1);
    const MatherResult res =
        mather_lp(make_builtin("PENDULUM", 1), Frozen{0.0}, Order::first, mg, 8);
    CHECK(std::fabs(res.c_value) < 1e-2);
    // dominant support atom is (x,v) = (0,0)
    REQUIRE(!res.support.empty());
    const SupportAtom* top = &res.support.front();
    for (const auto& atom : res.support)
        if (atom.weight > top->weight) top = &atom;
    CHECK(std::fabs(top->v[0]) < 1e-12);
    const double dist = std::min(top->x[0], 1.0 - top->x[0]);
    CHECK(dist < 1e-12);
    CHECK(top->weight > 0.99);
}

TEST_CASE("LP/PDE duality for the viscous pendulum+1 within 3e-2") {
    const MeasureGrid mg = default_measure_grid(1);
    const auto h = make_builtin("PENDULUM1", 1);
    const MatherResult lp = mather_lp(h, Frozen{0.0}, Order::second, mg, 8);
    CellProblem cp;
    cp.h = h;
    cp.order = Order::second;
    const PeriodicGrid fine(1, 256);
    const CellSolution pde = solve_cell(cp, fine, 1e-3);
    cp.method = CellMethod::eigenvalue_oracle;
    const CellSolution eig = solve_cell(cp, fine, 1e-3);
    CHECK(std::fabs(lp.c_value - pde.hbar) < 3e-2);
    CHECK(std::fabs(lp.c_value - eig.hbar) < 3e-2);
    // second-order rows carry (2 pi k)^2 Laplacian coefficients; the returned
    // measure must still satisfy them to 1e-8 in absolute value
    double feas = 0.0;
    for (double r : lp.row_residuals) feas = std::max(feas, std::fabs(r));
    CHECK(feas <= 1e-8);
}

TEST_CASE("sign property: int d_u L dmu <= 1e-6 for returned measures") {
    const MeasureGrid mg = default_measure_grid(1);
    for (const char* id : {"MONOTONE", "EX31N", "EX32"}) {
        const auto h = make_builtin(id, 1);
        const MatherResult res = mather_lp(h, Frozen{0.0}, Order::first, mg, 8);
        LagrangianEval le;
        le.h = h;
        le.v_max = mg.vmax;
        std::vector<double> dl(mg.size());
        for (std::size_t xi = 0; xi < mg.xgrid.size(); ++xi)
            for (std::size_t vj = 0; vj < mg.v_count(); ++vj)
                dl[xi * mg.v_count() + vj] = le.du(mg.xgrid.node(xi), mg.v_node(vj), 0.0);
        CHECK(res.measure.integrate(dl) <= 1e-6);
    }
}

TEST_CASE("ordinal diagnostics separate strict monotonicity from plateaus") {
    const MeasureGrid mg = default_measure_grid(1);
    const OrdinalResult mono =
        ordinal_diagnostic(make_builtin("MONOTONE", 1), Frozen{0.0}, mg, 8);
    CHECK(mono.verdict == OrdinalVerdict::empty_certified);
    CHECK(mono.max_du_integral == doctest::Approx(-1.0).epsilon(1e-3));

    const OrdinalResult ex31 =
        ordinal_diagnostic(make_builtin("EX31N", 1), Frozen{0.0}, mg, 8);
    CHECK(ex31.verdict == OrdinalVerdict::ordinal_found);
    CHECK(ex31.has_witness);

    const OrdinalResult ex32 =
        ordinal_diagnostic(make_builtin("EX32", 1), Frozen{0.0}, mg, 8);
    CHECK(ex32.verdict == OrdinalVerdict::ordinal_found);
}

TEST_CASE("pushforward: FREE second order has a uniform marginal") {
    const MeasureGrid mg = default_measure_grid(1);
    const MatherResult res =
        mather_lp(make_builtin("FREE", 1), Frozen{0.0}, Order::second, mg, 8);
    const MarginalTable table = measure_pushforward_density(res);
    const double uniform = 1.0 / mg.xgrid.size();
    for (double w : table.weight) CHECK(std::fabs(w - uniform) < 1e-3);
    CHECK(table.positivity_fraction == doctest::Approx(1.0));
}

TEST_CASE("pushforward: viscous pendulum+1 marginal is everywhere positive") {
    const MeasureGrid mg = default_measure_grid(1);
    const MatherResult res =
        mather_lp(make_builtin("PENDULUM1", 1), Frozen{0.0}, Order::second, mg, 8);
    const MarginalTable table = measure_pushforward_density(res);
    CHECK(table.positivity_fraction == doctest::Approx(1.0));
    CHECK(table.zero_nodes == 0);
}

TEST_CASE("pushforward rejects first-order input") {
    const MeasureGrid mg = default_measure_grid(1);
    const MatherResult res =
        mather_lp(make_builtin("FREE", 1), Frozen{0.0}, Order::first, mg, 8);
    CHECK_THROWS_AS(measure_pushforward_density(res), ConfigError);
}

TEST_CASE("scaling sanity: doubling vmax leaves c_value nearly unchanged") {
    const auto h = make_builtin("PENDULUM", 1);
    const MeasureGrid mg1(PeriodicGrid(1, 32), 33, 5.0);
    const MeasureGrid mg2(PeriodicGrid(1, 32), 65, 10.0);  // same spacing
    const MatherResult a = mather_lp(h, Frozen{0.0}, Order::first, mg1, 8);
    const MatherResult b = mather_lp(h, Frozen{0.0}, Order::first, mg2, 8);
    CHECK(std::fabs(a.c_value - b.c_value) <= 1e-3);
}

TEST_CASE("frozen-field input evaluates L along the field") {
    const MeasureGrid mg = default_measure_grid(1);
    const auto h = make_builtin("MONOTONE", 1);
    ScalarField phi(PeriodicGrid(1, 32), 0.25);
    const MatherResult res = mather_lp(h, Frozen{phi}, Order::first, mg, 8);
    // L = L_pend - phi; the action shifts by -0.25, so c shifts by +0.25
    const MatherResult base = mather_lp(h, Frozen{0.0}, Order::first, mg, 8);
    CHECK(std::fabs((res.c_value - base.c_value) - 0.25) < 1e-6);
}

TEST_CASE("measure grid validation") {
    CHECK_THROWS_AS(MeasureGrid(PeriodicGrid(1, 32), 32, 5.0), ConfigError);  // even mv
    CHECK_THROWS_AS(MeasureGrid(PeriodicGrid(1, 32), 33, -1.0), ConfigError);
    CHECK_THROWS_AS(
        mather_lp(make_builtin("FREE", 1), Frozen{0.0}, Order::first, default_measure_grid(1), 0),
        ConfigError);
}

TEST_CASE("2D smoke: FREE second order on a tiny grid") {
    const MeasureGrid mg(PeriodicGrid(2, 8), 5, 3.0);
    const MatherResult res =
        mather_lp(make_builtin("FREE", 2), Frozen{0.0}, Order::second, mg, 2);
    CHECK(std::fabs(res.c_value) < 1e-8);
    CHECK(std::fabs(res.measure.mass() - 1.0) < 1e-9);
}

TEST_CASE("2D ordinal diagnostic certifies the strictly monotone case") {
    const MeasureGrid mg(PeriodicGrid(2, 8), 5, 3.0);
    const OrdinalResult od =
        ordinal_diagnostic(make_builtin("MONOTONE", 2), Frozen{0.0}, mg, 2);
    CHECK(od.verdict == OrdinalVerdict::empty_certified);
    CHECK(od.max_du_integral == doctest::Approx(-1.0).epsilon(1e-3));
}

}  // TEST_SUITE
