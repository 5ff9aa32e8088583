#pragma once

#include "hjlab/hamiltonian.hpp"

namespace hjlab {

/// Numerical Legendre transform L(x,v,theta) = max_p <p,v> - H(x,p,theta),
/// scanned on a p-grid of `p_points` per axis over |p_k| <= p_max and refined
/// by golden-section passes around the discrete argmax. The maximizer must be
/// interior (|p*_k| < p_max) for every queried |v| <= v_max, otherwise the
/// search radius is too small and a NumericalError is thrown.
struct LagrangianEval {
    HamiltonianSpec h;
    double p_max = 8.0;
    int p_points = 257;
    double v_max = 5.0;

    double lagrangian(const Coord& x, const Coord& v, double theta) const;
    double lagrangian(const Coord& x, const Coord& v, double theta, Coord* argmax) const;

    /// d_theta L by centered differencing of the transform (default route).
    double du(const Coord& x, const Coord& v, double theta, double dtheta = 1e-4) const;

    /// d_theta L by the envelope identity -d_theta H(x, p*, theta) at the
    /// maximizer (cross-check route).
    double du_envelope(const Coord& x, const Coord& v, double theta,
                       double dtheta = 1e-4) const;
};

}  // namespace hjlab
