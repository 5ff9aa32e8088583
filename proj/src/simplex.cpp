#include "hjlab/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace hjlab {

namespace {

constexpr double kEnterTol = 1e-9;
constexpr double kNoiseCost = 1e-7;   // columns this close to flat never prove unboundedness
constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;
constexpr long kMaxPivots = 200000;
constexpr long kStallLimit = 400;
constexpr long kRefreshEvery = 512;  // re-canonicalize the cost row (flush drift)

struct Tableau {
    std::size_t m = 0, ncols = 0;    // rows, columns excluding rhs
    std::vector<double> t;           // (m+1) x (ncols+1), row-major; last row = costs
    std::vector<std::size_t> basis;  // per row
    std::vector<char> active;        // redundant rows get deactivated after phase 1
    std::size_t art_begin = 0;       // artificial columns start here

    double& at(std::size_t i, std::size_t j) { return t[i * (ncols + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return t[i * (ncols + 1) + j]; }
    double& rhs(std::size_t i) { return t[i * (ncols + 1) + ncols]; }
    double rhs(std::size_t i) const { return t[i * (ncols + 1) + ncols]; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double inv = 1.0 / at(pr, pc);
        for (std::size_t j = 0; j <= ncols; ++j) at(pr, j) *= inv;
        at(pr, pc) = 1.0;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == pr || (i < m && !active[i])) continue;
            const double f = at(i, pc);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= ncols; ++j) at(i, j) -= f * at(pr, j);
            at(i, pc) = 0.0;
        }
        basis[pr] = pc;
    }

    // Put `cost` (full-length) into the last row and canonicalize against the
    // basis; also used periodically to flush accumulated roundoff.
    void set_costs(const std::vector<double>& cost) {
        for (std::size_t j = 0; j < ncols; ++j) at(m, j) = cost[j];
        rhs(m) = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (!active[i]) continue;
            const double cb = cost[basis[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j <= ncols; ++j) at(m, j) -= cb * at(i, j);
        }
    }

    // Ratio test for an entering column; returns m when no row qualifies.
    std::size_t leaving_row(std::size_t enter) const {
        std::size_t leave = m;
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (!active[i]) continue;
            const double a = at(i, enter);
            if (a > kPivotTol) {
                const double ratio = rhs(i) / a;
                if (leave == m || ratio < best_ratio - 1e-15 ||
                    (std::fabs(ratio - best_ratio) <= 1e-15 && basis[i] < basis[leave])) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        return leave;
    }

    // One simplex iteration; returns false at optimality; throws on a genuine
    // unbounded ray or an exhausted pivot budget.
    bool iterate(bool forbid_artificials, long& pivots, bool bland) {
        while (true) {
            std::size_t enter = ncols;
            double best = -kEnterTol;
            for (std::size_t j = 0; j < ncols; ++j) {
                if (forbid_artificials && j >= art_begin) continue;
                if (blocked_sweep == sweep_id && blocked[j]) continue;
                const double c = at(m, j);
                if (c < -kEnterTol) {
                    if (bland) {
                        enter = j;
                        break;
                    }
                    if (c < best) {
                        best = c;
                        enter = j;
                    }
                }
            }
            if (enter == ncols) return false;
            const std::size_t leave = leaving_row(enter);
            if (leave == m) {
                // No admissible pivot row. For a noise-level reduced cost this
                // is roundoff, not an unbounded ray: skip the column.
                if (at(m, enter) >= -kNoiseCost) {
                    if (blocked_sweep != sweep_id) {
                        blocked.assign(ncols, 0);
                        blocked_sweep = sweep_id;
                    }
                    blocked[enter] = 1;
                    continue;
                }
                throw NumericalError("simplex: unbounded direction encountered");
            }
            pivot(leave, enter);
            ++pivots;
            ++sweep_id;
            if (pivots > kMaxPivots)
                throw NumericalError("simplex: pivot budget exhausted (stall)");
            return true;
        }
    }

    std::vector<char> blocked;
    long sweep_id = 0, blocked_sweep = -1;
};

// Runs a phase to optimality; when stop_below is finite the phase exits as
// soon as the objective drops below it (phase 1 only needs feasibility, and
// stopping there avoids endless degenerate pivoting on the optimal face).
void run_phase(Tableau& tab, const std::vector<double>& cost, bool forbid_artificials,
               long& pivots, double stop_below = -1e300) {
    tab.set_costs(cost);
    if (-tab.rhs(tab.m) <= stop_below) return;
    bool bland = false;
    long stall = 0, since_refresh = 0;
    double prev = -tab.rhs(tab.m);
    while (tab.iterate(forbid_artificials, pivots, bland)) {
        const double obj = -tab.rhs(tab.m);
        if (obj <= stop_below) return;
        if (++since_refresh >= kRefreshEvery) {
            tab.set_costs(cost);
            since_refresh = 0;
        }
        if (obj > prev - 1e-13) {
            if (++stall > kStallLimit) bland = true;
        } else {
            stall = 0;
        }
        prev = obj;
    }
    // Final guard: flush roundoff and confirm optimality once.
    tab.set_costs(cost);
    bland = true;
    while (tab.iterate(forbid_artificials, pivots, bland)) {
        if (-tab.rhs(tab.m) <= stop_below) return;
    }
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    const std::size_t n = lp.nvars, m = lp.rows.size();
    if (lp.objective.size() != n) throw ConfigError("solve_lp: objective length mismatch");
    for (const auto& row : lp.rows)
        if (row.a.size() != n) throw ConfigError("solve_lp: row length mismatch");

    // Scale every row to unit max-abs and make rhs nonnegative.
    std::vector<LpRow> rows(lp.rows);
    for (auto& row : rows) {
        double mx = std::fabs(row.rhs);
        for (double a : row.a) mx = std::max(mx, std::fabs(a));
        if (mx == 0.0) mx = 1.0;
        for (double& a : row.a) a /= mx;
        row.rhs /= mx;
        if (row.rhs < 0.0) {
            for (double& a : row.a) a = -a;
            row.rhs = -row.rhs;
            if (row.type == LpRow::Type::le)
                row.type = LpRow::Type::ge;
            else if (row.type == LpRow::Type::ge)
                row.type = LpRow::Type::le;
        }
    }

    std::size_t n_slack = 0, n_art = 0;
    for (const auto& row : rows) {
        if (row.type != LpRow::Type::eq) ++n_slack;
        if (row.type != LpRow::Type::le) ++n_art;
    }

    Tableau tab;
    tab.m = m;
    tab.ncols = n + n_slack + n_art;
    tab.art_begin = n + n_slack;
    tab.t.assign((m + 1) * (tab.ncols + 1), 0.0);
    tab.basis.assign(m, 0);
    tab.active.assign(m, 1);

    // Deterministic rhs perturbation: distinct positive ratios break the
    // degenerate ties that make Bland-style pivoting crawl. The final basis
    // is re-solved against the unperturbed data below.
    for (std::size_t i = 0; i < m; ++i) rows[i].rhs += 1e-11 * static_cast<double>(i + 1);

    std::size_t slack_col = n, art_col = tab.art_begin;
    // slack-column bookkeeping for the final refinement step
    std::vector<std::size_t> slack_row(tab.art_begin, 0);
    std::vector<double> slack_sign(tab.art_begin, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = rows[i].a[j];
        tab.rhs(i) = rows[i].rhs;
        switch (rows[i].type) {
            case LpRow::Type::le:
                tab.at(i, slack_col) = 1.0;
                slack_row[slack_col] = i;
                slack_sign[slack_col] = 1.0;
                tab.basis[i] = slack_col++;
                break;
            case LpRow::Type::ge:
                tab.at(i, slack_col) = -1.0;
                slack_row[slack_col] = i;
                slack_sign[slack_col] = -1.0;
                ++slack_col;
                tab.at(i, art_col) = 1.0;
                tab.basis[i] = art_col++;
                break;
            case LpRow::Type::eq:
                tab.at(i, art_col) = 1.0;
                tab.basis[i] = art_col++;
                break;
        }
    }

    long pivots = 0;

    if (n_art > 0) {
        std::vector<double> phase1_cost(tab.ncols, 0.0);
        for (std::size_t j = tab.art_begin; j < tab.ncols; ++j) phase1_cost[j] = 1.0;
        run_phase(tab, phase1_cost, false, pivots, 0.5 * kFeasTol);
        if (-tab.rhs(tab.m) > kFeasTol)
            throw NumericalError("simplex: infeasible (phase-1 objective " +
                                 std::to_string(-tab.rhs(tab.m)) + ")");
        // Pivot leftover basic artificials (level ~0) out; rows where that is
        // impossible are linearly dependent and get deactivated.
        for (std::size_t i = 0; i < m; ++i) {
            if (tab.basis[i] < tab.art_begin) continue;
            std::size_t pc = tab.ncols;
            for (std::size_t j = 0; j < tab.art_begin; ++j)
                if (std::fabs(tab.at(i, j)) > 1e-7) {
                    pc = j;
                    break;
                }
            if (pc < tab.ncols) {
                tab.pivot(i, pc);
                ++pivots;
            } else {
                tab.active[i] = 0;
            }
        }
    }

    std::vector<double> phase2_cost(tab.ncols, 0.0);
    for (std::size_t j = 0; j < n; ++j) phase2_cost[j] = lp.objective[j];
    run_phase(tab, phase2_cost, true, pivots);

    LpSolution sol;
    sol.pivots = pivots;
    sol.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] < n) sol.x[tab.basis[i]] = std::max(0.0, tab.rhs(i));

    // Final refinement: re-solve the basic system on the original (unscaled,
    // unperturbed) data so the anti-cycling perturbation never leaks into the
    // reported solution. Columns are the basic structural/slack variables of
    // the active rows; skipped if the solve degenerates or flips a sign.
    {
        std::vector<std::size_t> rws, cols;
        for (std::size_t i = 0; i < m; ++i) {
            if (!tab.active[i]) continue;
            if (tab.basis[i] >= tab.art_begin) {
                rws.clear();
                break;  // leftover artificial on an active row: keep tableau x
            }
            rws.push_back(i);
            cols.push_back(tab.basis[i]);
        }
        const std::size_t k = rws.size();
        if (k > 0) {
            std::vector<double> B(k * k, 0.0);
            std::vector<double> xb(k);
            for (std::size_t r = 0; r < k; ++r) {
                const std::size_t i = rws[r];
                xb[r] = lp.rows[i].rhs;
                for (std::size_t c = 0; c < k; ++c) {
                    const std::size_t j = cols[c];
                    if (j < n)
                        B[r * k + c] = lp.rows[i].a[j];
                    else
                        B[r * k + c] = (slack_row[j] == i) ? slack_sign[j] : 0.0;
                }
            }
            std::vector<std::size_t> perm(k);
            for (std::size_t i = 0; i < k; ++i) perm[i] = i;
            bool ok = true;
            for (std::size_t col = 0; col < k && ok; ++col) {
                std::size_t piv = col;
                for (std::size_t r = col + 1; r < k; ++r)
                    if (std::fabs(B[perm[r] * k + col]) > std::fabs(B[perm[piv] * k + col]))
                        piv = r;
                if (std::fabs(B[perm[piv] * k + col]) < 1e-12) {
                    ok = false;
                    break;
                }
                std::swap(perm[col], perm[piv]);
                for (std::size_t r = col + 1; r < k; ++r) {
                    const double f = B[perm[r] * k + col] / B[perm[col] * k + col];
                    if (f == 0.0) continue;
                    for (std::size_t cc = col; cc < k; ++cc)
                        B[perm[r] * k + cc] -= f * B[perm[col] * k + cc];
                    xb[perm[r]] -= f * xb[perm[col]];
                }
            }
            if (ok) {
                std::vector<double> out(k);
                for (std::size_t col = k; col-- > 0;) {
                    double s2 = xb[perm[col]];
                    for (std::size_t cc = col + 1; cc < k; ++cc)
                        s2 -= B[perm[col] * k + cc] * out[cc];
                    out[col] = s2 / B[perm[col] * k + col];
                }
                bool admissible = true;
                for (std::size_t c = 0; c < k; ++c) {
                    const std::size_t j = cols[c];
                    const double lo = -1e-9;
                    if (j < n && out[c] < lo) admissible = false;
                    if (j >= n && out[c] * 1.0 < lo) admissible = false;  // slack >= 0
                }
                if (admissible)
                    for (std::size_t c = 0; c < k; ++c)
                        if (cols[c] < n) sol.x[cols[c]] = std::max(0.0, out[c]);
            }
        }
    }

    sol.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) sol.objective += lp.objective[j] * sol.x[j];
    // Residuals report constraint *violations* on the original data: signed
    // for equalities, one-sided slack excess for inequalities.
    sol.row_residuals.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        double dot = 0.0;
        for (std::size_t j = 0; j < n; ++j) dot += lp.rows[i].a[j] * sol.x[j];
        switch (lp.rows[i].type) {
            case LpRow::Type::eq: sol.row_residuals[i] = dot - lp.rows[i].rhs; break;
            case LpRow::Type::le: sol.row_residuals[i] = std::max(0.0, dot - lp.rows[i].rhs); break;
            case LpRow::Type::ge: sol.row_residuals[i] = std::max(0.0, lp.rows[i].rhs - dot); break;
        }
    }
    return sol;
}

}  // namespace hjlab
