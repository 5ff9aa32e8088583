#include "hjlab/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hjlab {

namespace {

// Sample lattice for metadata estimation; independent of the solve grid.
std::vector<Coord> sample_points(int dim, int per_axis) {
    std::vector<Coord> pts;
    if (dim == 1) {
        pts.reserve(per_axis);
        for (int i = 0; i < per_axis; ++i) pts.push_back({i / static_cast<double>(per_axis), 0.0});
    } else {
        pts.reserve(static_cast<std::size_t>(per_axis) * per_axis);
        for (int i = 0; i < per_axis; ++i)
            for (int j = 0; j < per_axis; ++j)
                pts.push_back({i / static_cast<double>(per_axis), j / static_cast<double>(per_axis)});
    }
    return pts;
}

std::vector<double> u_samples(double u_lo, double u_hi, int count) {
    std::vector<double> us;
    if (u_hi <= u_lo) {
        us.push_back(u_lo);
        return us;
    }
    for (int i = 0; i < count; ++i)
        us.push_back(u_lo + (u_hi - u_lo) * i / static_cast<double>(count - 1));
    return us;
}

}  // namespace

double coercivity_radius(const HamiltonianSpec& h, double u_lo, double u_hi, double c_level) {
    const auto pts = sample_points(h.dim, h.dim == 1 ? 64 : 16);
    const auto us = u_samples(u_lo, u_hi, 3);
    double base = -1e300;
    for (const auto& x : pts)
        for (double u : us) base = std::max(base, h.eval(x, {0.0, 0.0}, u));
    const double target = base + std::fabs(c_level) + 1.0;
    for (double r = 1.0; r <= 24.0; r += 0.5) {
        bool ok = true;
        for (int k = 0; k < h.dim && ok; ++k) {
            for (double s : {-r, r}) {
                Coord p{0.0, 0.0};
                p[k] = s;
                for (const auto& x : pts) {
                    for (double u : us) {
                        if (h.eval(x, p, u) < target) {
                            ok = false;
                            break;
                        }
                    }
                    if (!ok) break;
                }
                if (!ok) break;
            }
        }
        if (ok) return r;
    }
    throw NumericalError("coercivity_radius: Hamiltonian '" + h.kind +
                         "' does not look coercive in p up to |p|=24");
}

std::vector<double> sample_gradient_bound(const HamiltonianSpec& h, const PeriodicGrid& grid,
                                          double p_box, double u_lo, double u_hi) {
    const int dim = grid.dim();
    const auto pts = sample_points(dim, dim == 1 ? std::min(grid.n(), 64) : std::min(grid.n(), 16));
    const auto us = u_samples(u_lo, u_hi, 5);
    const double dp = 1e-4 * std::max(1.0, p_box);
    std::vector<double> sigma(dim, 0.0);
    const int np = 25;
    for (int k = 0; k < dim; ++k) {
        double m = 0.0;
        for (const auto& x : pts) {
            for (double u : us) {
                for (int i = 0; i < np; ++i) {
                    Coord p{0.0, 0.0};
                    p[k] = -p_box + 2.0 * p_box * i / (np - 1);
                    if (dim == 2) p[1 - k] = (i % 3 - 1) * p_box * 0.5;
                    Coord pl = p, pr = p;
                    pl[k] -= dp;
                    pr[k] += dp;
                    m = std::max(m, std::fabs(h.eval(x, pr, u) - h.eval(x, pl, u)) / (2.0 * dp));
                }
            }
        }
        sigma[k] = 1.2 * m;
    }
    return sigma;
}

double sample_du_bound(const HamiltonianSpec& h, const PeriodicGrid& grid, double p_box,
                       double u_lo, double u_hi) {
    const int dim = grid.dim();
    const auto pts = sample_points(dim, dim == 1 ? 32 : 8);
    const auto us = u_samples(u_lo - 0.5, u_hi + 0.5, 9);
    const double du = 1e-4;
    double m = 0.0;
    for (const auto& x : pts)
        for (double u : us)
            for (double pk : {0.0, 0.5 * p_box, -0.5 * p_box}) {
                Coord p{pk, dim == 2 ? -pk : 0.0};
                m = std::max(m, (h.eval(x, p, u + du) - h.eval(x, p, u - du)) / (2.0 * du));
            }
    return 1.1 * m;
}

FluxSetup make_flux_setup(const HamiltonianSpec& h, const PeriodicGrid& grid,
                          const Coord& p_slope, double grad_scale, bool use_field_u,
                          double theta, double nu, double u_lo, double u_hi, double c_level) {
    FluxSetup s;
    s.h = &h;
    s.grid = grid;
    s.p_slope = p_slope;
    s.grad_scale = grad_scale;
    s.use_field_u = use_field_u;
    s.theta = theta;
    s.nu = nu;
    s.godunov = h.pstar_origin;
    const double lip = coercivity_radius(h, u_lo, u_hi, c_level);
    double pmag = std::fabs(p_slope[0]);
    if (grid.dim() == 2) pmag = std::max(pmag, std::fabs(p_slope[1]));
    s.p_box_radius = pmag + lip + 1.0;
    s.sigma = sample_gradient_bound(h, grid, s.p_box_radius, u_lo, u_hi);
    for (double sg : s.sigma)
        if (sg <= 0.0)
            throw NumericalError("flux setup: sampled gradient bound is nonpositive");
    s.du_bound = sample_du_bound(h, grid, s.p_box_radius, u_lo, u_hi);
    return s;
}

double numerical_hamiltonian(const FluxSetup& s, const Coord& x, const Coord& pm,
                             const Coord& pp, double u) {
    const int dim = s.grid.dim();
    if (s.godunov) {
        // Per-axis Godunov selection around the argmin p* = 0: the candidate
        // with larger magnitude among max(p-,0) and min(p+,0) realizes the
        // max of H over the relevant interval.
        Coord g{0.0, 0.0};
        for (int k = 0; k < dim; ++k) {
            const double a = std::max(pm[k], 0.0);
            const double b = std::min(pp[k], 0.0);
            g[k] = std::fabs(a) >= std::fabs(b) ? a : b;
        }
        return s.h->eval(x, g, u);
    }
    Coord central{0.0, 0.0};
    double diss = 0.0;
    for (int k = 0; k < dim; ++k) {
        central[k] = 0.5 * (pm[k] + pp[k]);
        diss += 0.5 * s.sigma[k] * (pp[k] - pm[k]);
    }
    return s.h->eval(x, central, u) - diss;
}

double residual_sweep(const FluxSetup& s, const ScalarField& v, double lambda, double c,
                      std::vector<double>& r) {
    const PeriodicGrid& g = v.grid;
    const int dim = g.dim();
    const double scale = s.grad_scale / g.spacing();
    const double inv_h2 = 1.0 / (g.spacing() * g.spacing());
    r.resize(g.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        Coord pm{0.0, 0.0}, pp{0.0, 0.0};
        double lap = 0.0;
        for (int k = 0; k < dim; ++k) {
            const double back = v[g.shift(i, k, -1)];
            const double fwd = v[g.shift(i, k, +1)];
            pm[k] = s.p_slope[k] + (v[i] - back) * scale;
            pp[k] = s.p_slope[k] + (fwd - v[i]) * scale;
            lap += (fwd - 2.0 * v[i] + back) * inv_h2;
        }
        const double u = s.use_field_u ? v[i] : s.theta;
        const double res =
            lambda * v[i] + numerical_hamiltonian(s, g.node(i), pm, pp, u) - s.nu * lap - c;
        r[i] = res;
        sup = std::max(sup, std::fabs(res));
    }
    return sup;
}

void explicit_euler_step(const FluxSetup& s, ScalarField& v, double lambda, double c,
                         double dt) {
    static thread_local std::vector<double> r;
    residual_sweep(s, v, lambda, c, r);
    for (std::size_t i = 0; i < v.values.size(); ++i) v.values[i] -= dt * r[i];
}

double cfl_timestep(const PeriodicGrid& grid, const std::vector<double>& sigma, Order order,
                    double nu) {
    double sum = 0.0;
    for (double s : sigma) {
        if (s <= 0.0) throw ConfigError("cfl_timestep: sigma must be positive");
        sum += s;
    }
    double dt = grid.spacing() / sum;
    if (order == Order::second && nu > 0.0)
        dt = std::min(dt, grid.spacing() * grid.spacing() / (2.0 * grid.dim() * nu));
    return 0.4 * dt;
}

void solve_cyclic_tridiagonal(const std::vector<double>& diag, double off,
                              const std::vector<double>& rhs, std::vector<double>& x) {
    const std::size_t n = diag.size();
    if (n < 3) throw ConfigError("cyclic tridiagonal solve needs n >= 3");
    // Sherman-Morrison splitting A = T + u v^T with
    //   gamma = -diag[0], u = (gamma,0,...,0,off), v = (1,0,...,0,off/gamma).
    const double gamma = -diag[0];
    std::vector<double> d(diag);
    d[0] -= gamma;
    d[n - 1] -= off * off / gamma;

    auto thomas = [&](const std::vector<double>& b, std::vector<double>& out) {
        static thread_local std::vector<double> cp, dp;
        cp.assign(n, 0.0);
        dp.assign(n, 0.0);
        cp[0] = off / d[0];
        dp[0] = b[0] / d[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double m = d[i] - off * cp[i - 1];
            cp[i] = off / m;
            dp[i] = (b[i] - off * dp[i - 1]) / m;
        }
        out.assign(n, 0.0);
        out[n - 1] = dp[n - 1];
        for (std::size_t i = n - 1; i-- > 0;) out[i] = dp[i] - cp[i] * out[i + 1];
    };

    static thread_local std::vector<double> y, z, u;
    thomas(rhs, y);
    u.assign(n, 0.0);
    u[0] = gamma;
    u[n - 1] = off;
    thomas(u, z);
    const double vy = y[0] + off / gamma * y[n - 1];
    const double vz = z[0] + off / gamma * z[n - 1];
    const double factor = vy / (1.0 + vz);
    x.resize(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - factor * z[i];
}

PeriodicHelmholtz::PeriodicHelmholtz(const PeriodicGrid& grid, double alpha)
    : grid_(grid), a_(alpha / (grid.spacing() * grid.spacing())) {
    if (alpha < 0.0) throw ConfigError("PeriodicHelmholtz: alpha must be nonnegative");
}

void PeriodicHelmholtz::solve(const std::vector<double>& rhs, std::vector<double>& out) {
    const std::size_t n = grid_.size();
    if (a_ == 0.0) {
        out = rhs;
        return;
    }
    if (grid_.dim() == 1) {
        std::vector<double> diag(n, 1.0 + 2.0 * a_);
        solve_cyclic_tridiagonal(diag, -a_, rhs, out);
        return;
    }
    // 2D: conjugate gradients on the SPD operator I - alpha Lap_h, warm start.
    auto matvec = [&](const std::vector<double>& v, std::vector<double>& y) {
        for (std::size_t i = 0; i < n; ++i) {
            double lap = 0.0;
            for (int k = 0; k < 2; ++k)
                lap += v[grid_.shift(i, k, +1)] - 2.0 * v[i] + v[grid_.shift(i, k, -1)];
            y[i] = v[i] - a_ * lap;
        }
    };
    if (out.size() != n) out.assign(n, 0.0);
    cg_r_.resize(n);
    cg_p_.resize(n);
    cg_ap_.resize(n);
    matvec(out, cg_ap_);
    double rr = 0.0, b2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cg_r_[i] = rhs[i] - cg_ap_[i];
        cg_p_[i] = cg_r_[i];
        rr += cg_r_[i] * cg_r_[i];
        b2 += rhs[i] * rhs[i];
    }
    const double tol2 = 1e-26 * std::max(b2, 1e-300);
    for (std::size_t it = 0; it < 20 * n && rr > tol2; ++it) {
        matvec(cg_p_, cg_ap_);
        double pap = 0.0;
        for (std::size_t i = 0; i < n; ++i) pap += cg_p_[i] * cg_ap_[i];
        const double alpha = rr / pap;
        double rr_new = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            out[i] += alpha * cg_p_[i];
            cg_r_[i] -= alpha * cg_ap_[i];
            rr_new += cg_r_[i] * cg_r_[i];
        }
        const double beta = rr_new / rr;
        for (std::size_t i = 0; i < n; ++i) cg_p_[i] = cg_r_[i] + beta * cg_p_[i];
        rr = rr_new;
    }
}

}  // namespace hjlab
