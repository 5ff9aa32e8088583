#pragma once

#include "hjlab/scheme.hpp"

namespace hjlab {

enum class CellMethod { large_time, discounted, eigenvalue_oracle };

/// Frozen-theta cell problem H(x, p + Dv, theta) = (order==second: Lap v +) hbar.
struct CellProblem {
    HamiltonianSpec h;
    Coord p{0.0, 0.0};
    double theta = 0.0;
    Order order = Order::first;
    CellMethod method = CellMethod::large_time;
};

struct CellSolution {
    double hbar = 0.0;
    ScalarField corrector;  // normalized so corrector(node 0) == 0
    double residual_sup = 0.0;
    long iterations = 0;
};

/// Solve the cell problem on `grid` to tolerance `tol`.
///
/// large_time evolves w' = -(NumH - nu Lap) and reads hbar from the mean
/// drift once it is linear in time; discounted solves delta*u + NumH = nu Lap
/// at delta in {1e-1,1e-2,1e-3} and extrapolates -delta*mean(u) linearly from
/// the last two levels; eigenvalue_oracle (quadratic-separable H, p = 0,
/// second order only) returns the largest eigenvalue of 2 Lap + W via
/// shift-inverted power iteration. For the iterative methods residual_sup is
/// the sup-norm of the discrete cell equation residual at (hbar, corrector);
/// for the oracle it is the eigenproblem residual.
CellSolution solve_cell(const CellProblem& prob, const PeriodicGrid& grid, double tol);

}  // namespace hjlab
