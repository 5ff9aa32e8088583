#include <doctest.h>

#include <cmath>
#include <random>

#include "hjlab/hamiltonian.hpp"

using namespace hjlab;

namespace {
constexpr double kPi = 3.14159265358979323846;

double rel_err(double a, double b) {
    return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}
}  // namespace

TEST_SUITE("hamiltonian") {

TEST_CASE("built-in evaluators match their closed forms at 1e3 random points") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ux(0.0, 1.0), up(-5.0, 5.0), uu(-13.0, 13.0);
    auto h_free = make_builtin("FREE", 1);
    auto h_freeu = make_builtin("FREEU", 1);
    auto h_pend = make_builtin("PENDULUM", 1);
    auto h_pend1 = make_builtin("PENDULUM1", 1);
    auto h_mono = make_builtin("MONOTONE", 1);
    auto h_31 = make_builtin("EX31", 1);
    auto h_31n = make_builtin("EX31N", 1);
    auto h_32 = make_builtin("EX32", 1);
    for (int s = 0; s < 1000; ++s) {
        const Coord x{ux(rng), 0.0};
        const Coord p{up(rng), 0.0};
        const double u = uu(rng);
        const double kin = 0.5 * p[0] * p[0];
        const double well = std::cos(2 * kPi * x[0]) - 1.0;
        CHECK(rel_err(h_free(x, p, u), kin) < 1e-12);
        CHECK(rel_err(h_freeu(x, p, u), kin + u) < 1e-12);
        CHECK(rel_err(h_pend(x, p, u), kin + well) < 1e-12);
        CHECK(rel_err(h_pend1(x, p, u), kin + std::cos(2 * kPi * x[0])) < 1e-12);
        CHECK(rel_err(h_mono(x, p, u), kin + well + u) < 1e-12);
        CHECK(rel_err(h_31(x, p, u),
                      kin + (std::cos(x[0]) - 1.0) * (1.0 - std::atan(u) / (4 * kPi))) < 1e-12);
        CHECK(rel_err(h_31n(x, p, u), kin + well * (1.0 - std::atan(u) / (4 * kPi))) < 1e-12);
        CHECK(rel_err(h_32(x, p, u), kin + well + ex32_f(u)) < 1e-12);
    }
}

TEST_CASE("EX32 f: flat core, quadratic tails, C1 at the junctions") {
    CHECK(ex32_f(0.0) == 0.0);
    CHECK(ex32_f(10.0) == 0.0);
    CHECK(ex32_f(-10.0) == 0.0);
    CHECK(ex32_f(12.0) == doctest::Approx(4.0));
    CHECK(ex32_f(-12.0) == doctest::Approx(-4.0));
    CHECK(ex32_f(11.0) == doctest::Approx(1.0));
    // C1 at +-10: value and derivative continuous
    const double eps = 1e-7;
    CHECK(std::fabs(ex32_f(10.0 + eps) - ex32_f(10.0 - eps)) < 1e-12);
    CHECK(std::fabs(ex32_f_prime(10.0 + eps) - ex32_f_prime(10.0 - eps)) < 1e-5);
    CHECK(ex32_f_prime(11.0) == doctest::Approx(2.0));
    CHECK(ex32_f_prime(-11.0) == doctest::Approx(2.0));  // d/dt of -(|t|-10)^2 has sign from |t|
    // odd symmetry of f itself
    CHECK(ex32_f(-11.5) == doctest::Approx(-ex32_f(11.5)));
}

TEST_CASE("catalogue lists every builtin and make_builtin rejects unknown ids") {
    const auto& cat = builtin_catalogue();
    CHECK(cat.size() == 8);
    for (const auto& e : cat) CHECK_NOTHROW(make_builtin(e.id, 1));
    for (const auto& e : cat) CHECK_NOTHROW(make_builtin(e.id, 2));
    CHECK_THROWS_AS(make_builtin("NOPE", 1), ConfigError);
    CHECK_THROWS_AS(make_builtin("FREE", 3), ConfigError);
}

TEST_CASE("asserted u-monotonicity spot check passes for all builtins") {
    for (const auto& e : builtin_catalogue()) {
        const auto h = make_builtin(e.id, 1);
        if (h.monotone_in_u) CHECK_NOTHROW(spot_check_monotone(h, 1000, 7));
    }
}

TEST_CASE("spot check catches a decreasing Hamiltonian") {
    HamiltonianSpec bad = make_builtin("FREE", 1);
    bad.eval = [](const Coord&, const Coord& p, double u) { return 0.5 * p[0] * p[0] - u; };
    CHECK_THROWS_AS(spot_check_monotone(bad, 1000, 7), ConfigError);
}

TEST_CASE("finite-difference d_u H matches analytic derivatives") {
    const auto h = make_builtin("MONOTONE", 1);
    CHECK(du_hamiltonian(h, {0.3, 0}, {1.0, 0}, 0.7) == doctest::Approx(1.0).epsilon(1e-6));
    const auto g = make_builtin("EX31N", 1);
    // d_u H = -(cos(2 pi x)-1) / (4 pi (1+u^2)) >= 0, zero exactly at x=0
    CHECK(du_hamiltonian(g, {0.0, 0}, {0.0, 0}, 0.0) == doctest::Approx(0.0).epsilon(1e-8));
    const double expect = (1.0 - std::cos(2 * kPi * 0.5)) / (4 * kPi);
    CHECK(du_hamiltonian(g, {0.5, 0}, {0.0, 0}, 0.0) == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("2D builtins reduce to per-axis sums") {
    const auto h = make_builtin("PENDULUM", 2);
    const Coord x{0.25, 0.5};
    const Coord p{1.0, -2.0};
    const double expect = 0.5 * (1.0 + 4.0) + (std::cos(2 * kPi * 0.25) - 1.0) +
                          (std::cos(2 * kPi * 0.5) - 1.0);
    CHECK(h(x, p, 0.0) == doctest::Approx(expect).epsilon(1e-14));
}

}  // TEST_SUITE
