#include "hjlab/mather.hpp"

#include <cmath>
#include <string>

namespace hjlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSupportCut = 1e-6;
constexpr double kMarginalCap = 1e-7;
constexpr double kSpreadSlack = 1e-5;

double frozen_at(const Frozen& frozen, const Coord& x) {
    if (const double* theta = std::get_if<double>(&frozen)) return *theta;
    return sample_periodic(std::get<ScalarField>(frozen), x);
}

struct LpData {
    std::vector<double> lagrangian;   // per (x,v)
    std::vector<LpRow> rows;          // mass + Fourier rows
    std::size_t nx = 0, nv = 0;
};

LpData assemble(const HamiltonianSpec& h, const Frozen& frozen, Order order,
                const MeasureGrid& mg, int K) {
    if (K < 1) throw ConfigError("mather_lp: fourier_order must be >= 1");
    const PeriodicGrid& xg = mg.xgrid;
    const int dim = xg.dim();
    LpData d;
    d.nx = xg.size();
    d.nv = mg.v_count();
    const std::size_t nvar = d.nx * d.nv;

    LagrangianEval le;
    le.h = h;
    le.v_max = mg.vmax;
    le.p_max = std::max(8.0, mg.vmax + 3.0);  // keep the maximizer interior
    d.lagrangian.resize(nvar);
    for (std::size_t xi = 0; xi < d.nx; ++xi) {
        const Coord x = xg.node(xi);
        const double theta = frozen_at(frozen, x);
        for (std::size_t vj = 0; vj < d.nv; ++vj)
            d.lagrangian[xi * d.nv + vj] = le.lagrangian(x, mg.v_node(vj), theta);
    }

    LpRow mass;
    mass.type = LpRow::Type::eq;
    mass.a.assign(nvar, 1.0);
    mass.rhs = 1.0;
    d.rows.push_back(std::move(mass));

    // Real Fourier test basis phi_k, |k|_inf <= K: rows
    // sum mu_ij [ <dphi(x_i), v_j> + (order==second) lap phi(x_i) ] = 0.
    std::vector<std::array<int, 2>> modes;
    if (dim == 1) {
        for (int k = 1; k <= K; ++k) modes.push_back({k, 0});
    } else {
        for (int k1 = -K; k1 <= K; ++k1)
            for (int k2 = -K; k2 <= K; ++k2) {
                if (k1 == 0 && k2 == 0) continue;
                if (k1 > 0 || (k1 == 0 && k2 > 0)) modes.push_back({k1, k2});
            }
    }
    for (const auto& k : modes) {
        const double w1 = 2.0 * kPi * k[0], w2 = 2.0 * kPi * k[1];
        const double ksq = w1 * w1 + w2 * w2;
        LpRow rc, rs;
        rc.type = rs.type = LpRow::Type::eq;
        rc.rhs = rs.rhs = 0.0;
        rc.a.assign(nvar, 0.0);
        rs.a.assign(nvar, 0.0);
        for (std::size_t xi = 0; xi < d.nx; ++xi) {
            const Coord x = xg.node(xi);
            const double phase = w1 * x[0] + w2 * x[1];
            const double c = std::cos(phase), s = std::sin(phase);
            for (std::size_t vj = 0; vj < d.nv; ++vj) {
                const Coord v = mg.v_node(vj);
                const double kv = w1 * v[0] + w2 * v[1];
                double row_c = -kv * s;  // <dcos, v>
                double row_s = kv * c;   // <dsin, v>
                if (order == Order::second) {
                    row_c += -ksq * c;
                    row_s += -ksq * s;
                }
                rc.a[xi * d.nv + vj] = row_c;
                rs.a[xi * d.nv + vj] = row_s;
            }
        }
        d.rows.push_back(std::move(rc));
        d.rows.push_back(std::move(rs));
    }
    return d;
}

}  // namespace

MeasureGrid::MeasureGrid(const PeriodicGrid& xg, int mv_, double vmax_)
    : xgrid(xg), mv(mv_), vmax(vmax_) {
    if (mv < 3 || mv % 2 == 0)
        throw ConfigError("MeasureGrid: mv must be odd and >= 3 so v = 0 is a node");
    if (vmax <= 0.0) throw ConfigError("MeasureGrid: vmax must be positive");
}

std::size_t MeasureGrid::v_count() const {
    return xgrid.dim() == 1 ? static_cast<std::size_t>(mv)
                            : static_cast<std::size_t>(mv) * mv;
}

std::size_t MeasureGrid::size() const { return xgrid.size() * v_count(); }

double MeasureGrid::v_component(int j) const {
    return -vmax + 2.0 * vmax * j / static_cast<double>(mv - 1);
}

Coord MeasureGrid::v_node(std::size_t vflat) const {
    Coord v{0.0, 0.0};
    v[0] = v_component(static_cast<int>(vflat % mv));
    if (xgrid.dim() == 2) v[1] = v_component(static_cast<int>(vflat / mv));
    return v;
}

MeasureGrid default_measure_grid(int dim) {
    return MeasureGrid(PeriodicGrid(dim, dim == 1 ? 32 : 12), dim == 1 ? 33 : 9, 5.0);
}

int default_fourier_order(int dim) { return dim == 1 ? 8 : 4; }

double DiscreteMeasure::mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

std::vector<double> DiscreteMeasure::x_marginal() const {
    const std::size_t nv = mg.v_count();
    std::vector<double> marg(mg.xgrid.size(), 0.0);
    for (std::size_t xi = 0; xi < marg.size(); ++xi)
        for (std::size_t vj = 0; vj < nv; ++vj) marg[xi] += weights[xi * nv + vj];
    return marg;
}

double DiscreteMeasure::integrate(const std::vector<double>& table) const {
    double s = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) s += weights[i] * table[i];
    return s;
}

MatherResult mather_lp(const HamiltonianSpec& h, const Frozen& frozen, Order order,
                       const MeasureGrid& mg, int fourier_order) {
    const LpData d = assemble(h, frozen, order, mg, fourier_order);
    const std::size_t nvar = d.nx * d.nv;

    LinearProgram stage1;
    stage1.nvars = nvar;
    stage1.objective = d.lagrangian;
    stage1.rows = d.rows;
    const LpSolution opt = solve_lp(stage1);

    // Stage 2: keep the action within a small slack of optimal and maximize
    // capped marginal mass per x-node, so the reported measure exposes the
    // support/positivity structure instead of an arbitrary sparse vertex.
    const double slack = kSpreadSlack * std::max(1.0, std::fabs(opt.objective));
    LinearProgram stage2;
    stage2.nvars = nvar + d.nx;
    stage2.objective.assign(stage2.nvars, 0.0);
    for (std::size_t i = 0; i < d.nx; ++i) stage2.objective[nvar + i] = -1.0;
    for (const auto& row : d.rows) {
        LpRow r = row;
        r.a.resize(stage2.nvars, 0.0);
        stage2.rows.push_back(std::move(r));
    }
    {
        LpRow pin;
        pin.type = LpRow::Type::le;
        pin.a = d.lagrangian;
        pin.a.resize(stage2.nvars, 0.0);
        pin.rhs = opt.objective + slack;
        stage2.rows.push_back(std::move(pin));
    }
    for (std::size_t i = 0; i < d.nx; ++i) {
        LpRow link;  // t_i - marginal_i <= 0
        link.type = LpRow::Type::le;
        link.a.assign(stage2.nvars, 0.0);
        for (std::size_t vj = 0; vj < d.nv; ++vj) link.a[i * d.nv + vj] = -1.0;
        link.a[nvar + i] = 1.0;
        link.rhs = 0.0;
        stage2.rows.push_back(std::move(link));
        LpRow cap;  // t_i <= kMarginalCap
        cap.type = LpRow::Type::le;
        cap.a.assign(stage2.nvars, 0.0);
        cap.a[nvar + i] = 1.0;
        cap.rhs = kMarginalCap;
        stage2.rows.push_back(std::move(cap));
    }
    const LpSolution spread = solve_lp(stage2);

    MatherResult result{DiscreteMeasure(mg), -opt.objective, opt.objective, order, {}, {},
                        opt.pivots + spread.pivots};
    for (std::size_t i = 0; i < nvar; ++i) result.measure.weights[i] = spread.x[i];

    // Average over grid translations that preserve the action to machine
    // precision (exact feasibility: the Fourier test basis is shift-closed).
    {
        const PeriodicGrid& xg = mg.xgrid;
        const int n = xg.n();
        const std::vector<double>& w = result.measure.weights;
        double obj0 = 0.0;
        for (std::size_t i = 0; i < nvar; ++i) obj0 += w[i] * d.lagrangian[i];
        std::vector<double> averaged(nvar, 0.0);
        int count = 0;
        const int sj_max = xg.dim() == 2 ? n : 1;
        for (int si = 0; si < n; ++si) {
            for (int sj = 0; sj < sj_max; ++sj) {
                double obj = 0.0;
                for (std::size_t xi = 0; xi < d.nx; ++xi) {
                    const int i0 = static_cast<int>(xi % n), j0 = static_cast<int>(xi / n);
                    const std::size_t xs = xg.index(i0 + si, j0 + sj);
                    for (std::size_t vj = 0; vj < d.nv; ++vj)
                        obj += w[xi * d.nv + vj] * d.lagrangian[xs * d.nv + vj];
                }
                if (std::fabs(obj - obj0) <= 1e-10 * (1.0 + std::fabs(obj0))) {
                    for (std::size_t xi = 0; xi < d.nx; ++xi) {
                        const int i0 = static_cast<int>(xi % n), j0 = static_cast<int>(xi / n);
                        const std::size_t xs = xg.index(i0 + si, j0 + sj);
                        for (std::size_t vj = 0; vj < d.nv; ++vj)
                            averaged[xs * d.nv + vj] += w[xi * d.nv + vj];
                    }
                    ++count;
                }
            }
        }
        for (std::size_t i = 0; i < nvar; ++i)
            result.measure.weights[i] = averaged[i] / static_cast<double>(count);
    }

    for (std::size_t xi = 0; xi < d.nx; ++xi)
        for (std::size_t vj = 0; vj < d.nv; ++vj) {
            const double wgt = result.measure.weights[xi * d.nv + vj];
            if (wgt > kSupportCut)
                result.support.push_back({mg.xgrid.node(xi), mg.v_node(vj), wgt});
        }

    result.row_residuals.resize(d.rows.size());
    for (std::size_t r = 0; r < d.rows.size(); ++r) {
        double dot = 0.0;
        for (std::size_t i = 0; i < nvar; ++i) dot += d.rows[r].a[i] * result.measure.weights[i];
        result.row_residuals[r] = dot - d.rows[r].rhs;
    }
    return result;
}

OrdinalResult ordinal_diagnostic(const HamiltonianSpec& h, const Frozen& frozen,
                                 const MeasureGrid& mg, int fourier_order) {
    const LpData d = assemble(h, frozen, Order::first, mg, fourier_order);
    const std::size_t nvar = d.nx * d.nv;

    LinearProgram stage1;
    stage1.nvars = nvar;
    stage1.objective = d.lagrangian;
    stage1.rows = d.rows;
    const LpSolution opt = solve_lp(stage1);

    // d_u L table via the centered-difference route.
    LagrangianEval le;
    le.h = h;
    le.v_max = mg.vmax;
    le.p_max = std::max(8.0, mg.vmax + 3.0);
    std::vector<double> dl(nvar);
    for (std::size_t xi = 0; xi < d.nx; ++xi) {
        const Coord x = mg.xgrid.node(xi);
        const double theta = frozen_at(frozen, x);
        for (std::size_t vj = 0; vj < d.nv; ++vj)
            dl[xi * d.nv + vj] = le.du(x, mg.v_node(vj), theta);
    }

    // Phase 2: maximize int d_u L dmu over the (1e-8-pinned) optimal face.
    LinearProgram stage2;
    stage2.nvars = nvar;
    stage2.objective.resize(nvar);
    for (std::size_t i = 0; i < nvar; ++i) stage2.objective[i] = -dl[i];
    stage2.rows = d.rows;
    {
        LpRow hi;
        hi.type = LpRow::Type::le;
        hi.a = d.lagrangian;
        hi.rhs = opt.objective + 1e-8;
        stage2.rows.push_back(std::move(hi));
        LpRow lo;
        lo.type = LpRow::Type::ge;
        lo.a = d.lagrangian;
        lo.rhs = opt.objective - 1e-8;
        stage2.rows.push_back(std::move(lo));
    }
    const LpSolution face = solve_lp(stage2);

    OrdinalResult out{OrdinalVerdict::inconclusive, -face.objective, -opt.objective,
                      DiscreteMeasure(mg), false};
    if (out.max_du_integral >= -1e-6) {
        out.verdict = OrdinalVerdict::ordinal_found;
        for (std::size_t i = 0; i < nvar; ++i) out.witness.weights[i] = face.x[i];
        out.has_witness = true;
    } else if (out.max_du_integral <= -1e-3) {
        out.verdict = OrdinalVerdict::empty_certified;
    }
    return out;
}

MarginalTable measure_pushforward_density(const MatherResult& result) {
    if (result.order != Order::second)
        throw ConfigError(
            "measure_pushforward_density: x-marginal positivity is a second-order diagnostic");
    MarginalTable table;
    table.weight = result.measure.x_marginal();
    int positive = 0;
    for (double w : table.weight)
        if (w > 1e-8)
            ++positive;
        else
            ++table.zero_nodes;
    table.positivity_fraction = positive / static_cast<double>(table.weight.size());
    return table;
}

}  // namespace hjlab
