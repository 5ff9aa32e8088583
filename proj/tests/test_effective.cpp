#include <doctest.h>

#include <cmath>

#include "hjlab/effective.hpp"
#include "hjlab/hamiltonian.hpp"

using namespace hjlab;

TEST_SUITE("effective") {

TEST_CASE("MONOTONE curve tracks hbar(theta) = theta and inverts cleanly") {
    const PeriodicGrid grid(1, 64);
    const auto h = make_builtin("MONOTONE", 1);
    const EffectiveCurve curve = sample_curve(h, Order::first, -2.0, 2.0, 9, grid, 1e-3);
    for (const auto& s : curve.samples) CHECK(std::fabs(s.hbar - s.theta) < 5e-3);

    const ThetaInterval iv = level_set(curve, 0.5, 0.05);
    CHECK(iv.singleton);
    CHECK(std::fabs(iv.theta_minus - 0.5) < 0.05);
    CHECK(std::fabs(iv.theta_plus - 0.5) < 0.05);
}

TEST_CASE("EX31N curve is identically zero and I(0) escapes the sampled range") {
    const PeriodicGrid grid(1, 64);
    const auto h = make_builtin("EX31N", 1);
    const EffectiveCurve curve = sample_curve(h, Order::first, -5.0, 5.0, 11, grid, 1e-3);
    for (const auto& s : curve.samples) CHECK(std::fabs(s.hbar) < 1e-3);
    const ThetaInterval iv = level_set(curve, 0.0, 0.05);
    CHECK(iv.minus_unbounded);
    CHECK(iv.plus_unbounded);
    CHECK_FALSE(iv.singleton);
}

TEST_CASE("EX32 additive split and the plateau level set [-10, 10]") {
    const PeriodicGrid grid(1, 64);
    const auto h = make_builtin("EX32", 1);
    const EffectiveCurve curve = sample_curve(h, Order::first, -14.0, 14.0, 29, grid, 1e-3);
    const double hbar0 = curve.samples[14].hbar;  // theta = 0
    for (const auto& s : curve.samples)
        CHECK(std::fabs((s.hbar - hbar0) - ex32_f(s.theta)) < 2e-3);

    const ThetaInterval iv = level_set(curve, 0.0, 0.05);
    CHECK_FALSE(iv.singleton);
    CHECK_FALSE(iv.minus_unbounded);
    CHECK_FALSE(iv.plus_unbounded);
    CHECK(std::fabs(iv.theta_minus + 10.0) < 0.05);
    CHECK(std::fabs(iv.theta_plus - 10.0) < 0.05);
}

TEST_CASE("curve monotonicity holds and consistency: each sample lies in its own level set") {
    const PeriodicGrid grid(1, 64);
    const auto h = make_builtin("MONOTONE", 1);
    const EffectiveCurve curve = sample_curve(h, Order::first, -1.0, 1.0, 9, grid, 1e-3);
    for (std::size_t j = 1; j < curve.samples.size(); ++j)
        CHECK(curve.samples[j].hbar >= curve.samples[j - 1].hbar - 2e-3);
    for (std::size_t k = 1; k + 1 < curve.samples.size(); k += 3) {
        const ThetaInterval iv = level_set(curve, curve.samples[k].hbar, 0.05);
        const double lo = iv.minus_unbounded ? -1e300 : iv.theta_minus - 0.05;
        const double hi = iv.plus_unbounded ? 1e300 : iv.theta_plus + 0.05;
        CHECK(curve.samples[k].theta >= lo);
        CHECK(curve.samples[k].theta <= hi);
    }
}

TEST_CASE("c outside the sampled range is reported, not guessed") {
    const PeriodicGrid grid(1, 64);
    const auto h = make_builtin("MONOTONE", 1);
    const EffectiveCurve curve = sample_curve(h, Order::first, -1.0, 1.0, 9, grid, 1e-3);
    CHECK_THROWS_AS(level_set(curve, 5.0, 0.05), ConfigError);
    CHECK_THROWS_AS(level_set(curve, -5.0, 0.05), ConfigError);
}

TEST_CASE("argument validation") {
    const PeriodicGrid grid(1, 64);
    const auto h = make_builtin("MONOTONE", 1);
    CHECK_THROWS_AS(sample_curve(h, Order::first, 1.0, -1.0, 9, grid, 1e-3), ConfigError);
    CHECK_THROWS_AS(sample_curve(h, Order::first, -1.0, 1.0, 5, grid, 1e-3), ConfigError);
}

TEST_CASE("second-order singleton certificates") {
    const PeriodicGrid grid(1, 64);
    ThetaInterval iv;
    iv.c = 0.0;
    iv.theta_minus = iv.theta_plus = 0.5;
    iv.singleton = true;
    CHECK(singleton_certificate(make_builtin("MONOTONE", 1), Order::second, iv, grid, 1e-3) ==
          Certificate::certified_singleton);
    CHECK(singleton_certificate(make_builtin("EX32", 1), Order::second, iv, grid, 1e-3,
                                0.0) == Certificate::inconclusive);
    // EX31N viscous: d_u H > 0 away from the well bottom certifies
    CHECK(singleton_certificate(make_builtin("EX31N", 1), Order::second, iv, grid, 1e-3,
                                0.0) == Certificate::certified_singleton);
}

TEST_CASE("discounted sampling matches the large-time curve") {
    const PeriodicGrid grid(1, 64);
    const auto h = make_builtin("MONOTONE", 1);
    const EffectiveCurve curve =
        sample_curve(h, Order::first, -1.0, 1.0, 9, grid, 1e-3, CellMethod::discounted);
    for (const auto& s : curve.samples) CHECK(std::fabs(s.hbar - s.theta) < 5e-3);
}

TEST_CASE("2D curve: MONOTONE keeps hbar(theta) = theta") {
    const PeriodicGrid grid(2, 32);
    const auto h = make_builtin("MONOTONE", 2);
    const EffectiveCurve curve = sample_curve(h, Order::first, -0.5, 0.5, 9, grid, 5e-3);
    for (const auto& s : curve.samples) CHECK(std::fabs(s.hbar - s.theta) < 1e-2);
    const ThetaInterval iv = level_set(curve, 0.25, 0.05);
    CHECK(iv.singleton);
    CHECK(std::fabs(0.5 * (iv.theta_minus + iv.theta_plus) - 0.25) < 0.05);
}

TEST_CASE("first-order certificate defers to the ordinal diagnostic") {
    const PeriodicGrid grid(1, 32);
    ThetaInterval iv;
    iv.c = 0.0;
    iv.theta_minus = iv.theta_plus = 0.0;
    iv.singleton = true;
    CHECK(singleton_certificate(make_builtin("MONOTONE", 1), Order::first, iv, grid, 1e-3) ==
          Certificate::certified_singleton);
    CHECK(singleton_certificate(make_builtin("EX31N", 1), Order::first, iv, grid, 1e-3, 0.0) ==
          Certificate::inconclusive);
}

}  // TEST_SUITE
