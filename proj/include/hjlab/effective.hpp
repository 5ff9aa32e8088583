#pragma once

#include <optional>

#include "hjlab/cellsolve.hpp"

namespace hjlab {

struct CurveSample {
    double theta;
    double hbar;
    double residual;
};

/// Sampled map theta -> hbar(0, theta); non-decreasing up to 2*tol slack.
struct EffectiveCurve {
    HamiltonianSpec h;
    Order order = Order::first;
    CellMethod method = CellMethod::large_time;
    std::vector<CurveSample> samples;  // strictly increasing theta
    int grid_n = 0;
    double tol = 0.0;
};

EffectiveCurve sample_curve(const HamiltonianSpec& h, Order order, double theta_min,
                            double theta_max, int count, const PeriodicGrid& grid, double tol,
                            CellMethod method = CellMethod::large_time);

/// I(c) = {theta : hbar(0,theta) = c} as an interval with plateau detection.
/// Unbounded flags mean the level set touches the sampled range's ends.
struct ThetaInterval {
    double c = 0.0;
    double theta_minus = 0.0;
    double theta_plus = 0.0;
    bool minus_unbounded = false;
    bool plus_unbounded = false;
    bool singleton = false;
};

/// Endpoint bisection refines to resolution/4 with fresh cell solves; hbar
/// comparisons use a slack equal to the curve's solver tolerance. Throws
/// ConfigError when c lies outside the sampled hbar range.
ThetaInterval level_set(const EffectiveCurve& curve, double c, double resolution = 0.05);

enum class Certificate { certified_singleton, inconclusive };

/// Second order: checks max_x d_u H(x, du_theta(x), theta) > 0 along the
/// computed corrector gradient (threshold 10x the derivative step) -- a
/// strictly active u-dependence pins the level set to a point.
/// First order: delegates to the ordinal-measure diagnostic (empty-certified
/// implies singleton). Candidates are the finite interval endpoints and
/// midpoint, or the explicitly supplied theta.
Certificate singleton_certificate(const HamiltonianSpec& h, Order order,
                                  const ThetaInterval& interval, const PeriodicGrid& grid,
                                  double tol,
                                  std::optional<double> candidate_theta = std::nullopt);

}  // namespace hjlab
