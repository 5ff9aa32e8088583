#include <doctest.h>

#include <cmath>
#include <random>

#include "hjlab/legendre.hpp"

using namespace hjlab;

namespace {
constexpr double kPi = 3.14159265358979323846;

LagrangianEval make_le(const char* id, int dim = 1) {
    LagrangianEval le;
    le.h = make_builtin(id, dim);
    return le;
}
}  // namespace

TEST_SUITE("legendre") {

TEST_CASE("quadratic kinetic energy is self-dual: FREE v=3 gives 4.5") {
    const LagrangianEval le = make_le("FREE");
    CHECK(std::fabs(le.lagrangian({0.2, 0}, {3.0, 0}, 0.0) - 4.5) < 1e-6);
}

TEST_CASE("PENDULUM at x=0, v=0 gives L = 0") {
    const LagrangianEval le = make_le("PENDULUM");
    CHECK(std::fabs(le.lagrangian({0.0, 0}, {0.0, 0}, 0.0) - 0.0) < 1e-6);
}

TEST_CASE("EX32 at x=1/4, v=1, theta=0 gives 1.5") {
    const LagrangianEval le = make_le("EX32");
    CHECK(std::fabs(le.lagrangian({0.25, 0}, {1.0, 0}, 0.0) - 1.5) < 1e-4);
}

TEST_CASE("boundary maximizer is rejected (p_max too small)") {
    LagrangianEval le = make_le("FREE");
    le.p_max = 2.0;
    le.p_points = 129;
    CHECK_THROWS_AS(le.lagrangian({0.0, 0}, {4.0, 0}, 0.0), NumericalError);
}

TEST_CASE("d_theta L vanishes for u-independent and flat-region Hamiltonians") {
    const LagrangianEval pend = make_le("PENDULUM");
    CHECK(std::fabs(pend.du({0.3, 0}, {1.0, 0}, 0.0)) < 1e-10);
    const LagrangianEval ex32 = make_le("EX32");
    CHECK(std::fabs(ex32.du({0.3, 0}, {1.0, 0}, 0.0)) < 1e-8);
}

TEST_CASE("d_theta L sees the EX32 tail: -f'(11) = -2") {
    const LagrangianEval ex32 = make_le("EX32");
    CHECK(ex32.du({0.0, 0}, {0.0, 0}, 11.0) == doctest::Approx(-2.0).epsilon(1e-3));
}

TEST_CASE("centered-difference and envelope routes agree to 1e-4") {
    const LagrangianEval ex31 = make_le("EX31N");
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ux(0.0, 1.0), uv(-3.0, 3.0), ut(-2.0, 2.0);
    for (int s = 0; s < 50; ++s) {
        const Coord x{ux(rng), 0.0};
        const Coord v{uv(rng), 0.0};
        const double t = ut(rng);
        CHECK(std::fabs(ex31.du(x, v, t) - ex31.du_envelope(x, v, t)) < 1e-4);
    }
}

TEST_CASE("Young's inequality holds on 1e3 samples") {
    const LagrangianEval le = make_le("EX31N");
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ux(0.0, 1.0), up(-3.0, 3.0), uv(-5.0, 5.0),
        ut(-4.0, 4.0);
    int violations = 0;
    for (int s = 0; s < 1000; ++s) {
        const Coord x{ux(rng), 0.0};
        const Coord p{up(rng), 0.0};
        const Coord v{uv(rng), 0.0};
        const double t = ut(rng);
        const double lhs = le.lagrangian(x, v, t) + le.h(x, p, t);
        if (lhs < p[0] * v[0] - 1e-6) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("monotonicity transfer: L non-increasing in theta for monotone H") {
    const LagrangianEval le = make_le("EX32");
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ux(0.0, 1.0), uv(-4.0, 4.0), ut(-13.0, 13.0);
    for (int s = 0; s < 200; ++s) {
        const Coord x{ux(rng), 0.0};
        const Coord v{uv(rng), 0.0};
        double t1 = ut(rng), t2 = ut(rng);
        if (t1 > t2) std::swap(t1, t2);
        CHECK(le.lagrangian(x, v, t1) >= le.lagrangian(x, v, t2) - 1e-8);
    }
}

TEST_CASE("separable quadratic H gives L = |v|^2/2 - W on 1e3 samples") {
    const LagrangianEval le = make_le("EX31N");
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> ux(0.0, 1.0), uv(-5.0, 5.0), ut(-4.0, 4.0);
    for (int s = 0; s < 1000; ++s) {
        const Coord x{ux(rng), 0.0};
        const Coord v{uv(rng), 0.0};
        const double t = ut(rng);
        const double w = le.h(x, {0.0, 0.0}, t);  // W(x,t) = H(x,0,t)
        const double expect = 0.5 * v[0] * v[0] - w;
        CHECK(std::fabs(le.lagrangian(x, v, t) - expect) < 1e-6);
    }
}

TEST_CASE("2D transform matches the separable closed form") {
    const LagrangianEval le = make_le("PENDULUM", 2);
    const Coord x{0.3, 0.7};
    const Coord v{1.5, -2.0};
    const double w = le.h(x, {0.0, 0.0}, 0.0);
    const double expect = 0.5 * (v[0] * v[0] + v[1] * v[1]) - w;
    CHECK(std::fabs(le.lagrangian(x, v, 0.0) - expect) < 1e-5);
}

}  // TEST_SUITE
