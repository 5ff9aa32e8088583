#pragma once

#include <vector>

#include "hjlab/errors.hpp"

namespace hjlab {

/// min c.x subject to the rows and x >= 0.
struct LpRow {
    enum class Type { eq, le, ge };
    Type type = Type::eq;
    std::vector<double> a;
    double rhs = 0.0;
};

struct LinearProgram {
    std::size_t nvars = 0;
    std::vector<double> objective;
    std::vector<LpRow> rows;
};

struct LpSolution {
    std::vector<double> x;
    double objective = 0.0;
    long pivots = 0;
    /// Signed residual a.x - rhs per row, on the caller's (unscaled) data.
    std::vector<double> row_residuals;
};

/// Dense two-phase primal simplex with Dantzig pricing and an automatic
/// permanent switch to Bland's rule when the objective stalls (anti-cycling).
/// Rows are max-abs scaled internally; the reported solution and residuals
/// refer to the original data. Throws NumericalError on infeasible input or
/// a pivot-budget stall (unboundedness cannot occur on a feasible bounded
/// polytope but is guarded anyway).
LpSolution solve_lp(const LinearProgram& lp);

}  // namespace hjlab
