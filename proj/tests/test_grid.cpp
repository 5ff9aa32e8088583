#include <doctest.h>

#include <cmath>
#include <random>

#include "hjlab/grid.hpp"

using namespace hjlab;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("grid") {

TEST_CASE("construction invariants") {
    PeriodicGrid g(1, 8);
    CHECK(g.spacing() == doctest::Approx(1.0 / 8).epsilon(1e-15));
    CHECK(g.n() * g.spacing() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(g.size() == 8);
    PeriodicGrid g2(2, 16);
    CHECK(g2.size() == 256);
    CHECK_THROWS_AS(PeriodicGrid(3, 16), ConfigError);
    CHECK_THROWS_AS(PeriodicGrid(1, 4), ConfigError);
}

TEST_CASE("periodic indexing: i and i+N are the same node") {
    PeriodicGrid g(1, 8);
    for (int i = -8; i < 16; ++i) CHECK(g.index(i) == g.index(i + 8));
    PeriodicGrid g2(2, 8);
    CHECK(g2.index(3, 5) == g2.index(3 + 8, 5 - 8));
    CHECK(g2.shift(g2.index(7, 0), 0, 1) == g2.index(0, 0));
}

TEST_CASE("gradient_upwind on a constant field is zero") {
    PeriodicGrid g(2, 8);
    ScalarField f(g, 3.25);
    auto [pm, pp] = gradient_upwind(f, g.index(2, 5));
    for (int k = 0; k < 2; ++k) {
        CHECK(pm[k] == 0.0);
        CHECK(pp[k] == 0.0);
    }
}

TEST_CASE("gradient_upwind linear ramp wraps to -7 at the seam (N=8)") {
    PeriodicGrid g(1, 8);
    ScalarField f(g);
    for (int i = 0; i < 8; ++i) f[i] = i * g.spacing();
    auto [pm_int, pp_int] = gradient_upwind(f, 3);
    CHECK(pm_int[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pp_int[0] == doctest::Approx(1.0).epsilon(1e-14));
    auto [pm_seam, pp_seam] = gradient_upwind(f, 7);
    CHECK(pp_seam[0] == doctest::Approx(-7.0).epsilon(1e-14));
}

TEST_CASE("gradient_upwind approximates the sine slope at x=0") {
    PeriodicGrid g(1, 64);
    ScalarField f(g);
    for (int i = 0; i < 64; ++i) f[i] = std::sin(2.0 * kPi * i * g.spacing());
    auto [pm, pp] = gradient_upwind(f, 0);
    CHECK(std::fabs(pm[0] - 2.0 * kPi) < 0.1);
    CHECK(std::fabs(pp[0] - 2.0 * kPi) < 0.1);
}

TEST_CASE("gradient shift invariance is exact in floating point") {
    // Values on a dyadic lattice so that adding the constant is itself exact;
    // the one-sided differences must then agree bit for bit.
    PeriodicGrid g(1, 32);
    ScalarField f(g), fs(g);
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> lattice(-1024, 1024);
    for (int i = 0; i < 32; ++i) {
        f[i] = lattice(rng) / 1024.0;
        fs[i] = f[i] + 4.0;
    }
    for (std::size_t i = 0; i < g.size(); ++i) {
        auto [am, ap] = gradient_upwind(f, i);
        auto [bm, bp] = gradient_upwind(fs, i);
        CHECK(am[0] == bm[0]);
        CHECK(ap[0] == bp[0]);
    }
}

TEST_CASE("laplacian annihilates constants everywhere and affine lifts away from the seam") {
    PeriodicGrid g(1, 16);
    ScalarField c(g, -2.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(laplacian_centered(c, i) == 0.0);
    ScalarField a(g);
    for (int i = 0; i < 16; ++i) a[i] = 3.0 * i * g.spacing() + 0.5;
    for (std::size_t i = 1; i + 1 < g.size(); ++i) CHECK(laplacian_centered(a, i) == 0.0);

    PeriodicGrid g2(2, 8);
    ScalarField b(g2);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) b[g2.index(i, j)] = 2.0 * i * g2.spacing() - j * g2.spacing();
    for (int i = 1; i < 7; ++i)
        for (int j = 1; j < 7; ++j) CHECK(laplacian_centered(b, g2.index(i, j)) == 0.0);
}

TEST_CASE("laplacian of cos(2 pi x) at the origin (N=128)") {
    PeriodicGrid g(1, 128);
    ScalarField f(g);
    for (int i = 0; i < 128; ++i) f[i] = std::cos(2.0 * kPi * i * g.spacing());
    CHECK(std::fabs(laplacian_centered(f, 0) - (-4.0 * kPi * kPi)) < 1e-2);
}

TEST_CASE("2D laplacian of cos+cos at the origin (N=128)") {
    PeriodicGrid g(2, 128);
    ScalarField f(g);
    for (int i = 0; i < 128; ++i)
        for (int j = 0; j < 128; ++j)
            f[g.index(i, j)] = std::cos(2.0 * kPi * i * g.spacing()) +
                               std::cos(2.0 * kPi * j * g.spacing());
    CHECK(std::fabs(laplacian_centered(f, g.index(0, 0)) - (-8.0 * kPi * kPi)) < 2e-2);
}

TEST_CASE("require_finite flags NaN") {
    PeriodicGrid g(1, 8);
    ScalarField f(g);
    f[3] = std::nan("");
    CHECK_THROWS_AS(f.require_finite("test"), NumericalError);
}

TEST_CASE("periodic interpolation hits nodes and midpoints") {
    PeriodicGrid g(1, 8);
    ScalarField f(g);
    for (int i = 0; i < 8; ++i) f[i] = i;
    CHECK(sample_periodic(f, {0.25, 0.0}) == doctest::Approx(2.0));
    CHECK(sample_periodic(f, {0.25 + 0.0625, 0.0}) == doctest::Approx(2.5));
    // wrap: between the last node (7) and node 0
    CHECK(sample_periodic(f, {0.9375, 0.0}) == doctest::Approx(3.5));
}

}  // TEST_SUITE
