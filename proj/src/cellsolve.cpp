#include "hjlab/cellsolve.hpp"

#include <cmath>
#include <string>

namespace hjlab {

namespace {

struct March {
    FluxSetup flux;   // full operator (diffusion included), used for residuals
    FluxSetup hyper;  // hyperbolic part only, used inside the implicit step
    double dt = 0.0;
    PeriodicHelmholtz* helmholtz = nullptr;  // non-null for implicit diffusion
    std::vector<double> residual;
    std::vector<double> rhs;

    void init(const FluxSetup& f) {
        flux = f;
        hyper = f;
        hyper.nu = 0.0;
    }

    // One step of v' = -(lambda v + NumH - nu Lap - c); diffusion implicit.
    void step(ScalarField& v, double lambda, double c) {
        if (!helmholtz) {
            residual_sweep(flux, v, lambda, c, residual);
            for (std::size_t i = 0; i < v.values.size(); ++i) v.values[i] -= dt * residual[i];
            return;
        }
        residual_sweep(hyper, v, lambda, c, residual);
        rhs.resize(v.values.size());
        for (std::size_t i = 0; i < v.values.size(); ++i)
            rhs[i] = v.values[i] - dt * residual[i];
        helmholtz->solve(rhs, v.values);
    }
};

CellSolution finish(const FluxSetup& flux, const ScalarField& w, double hbar, long iters,
                    double tol, const char* method) {
    CellSolution sol{hbar, w, 0.0, iters};
    const double anchor = sol.corrector[0];
    for (double& v : sol.corrector.values) v -= anchor;
    sol.corrector.require_finite("cell corrector");
    std::vector<double> r;
    sol.residual_sup = residual_sweep(flux, sol.corrector, 0.0, hbar, r);
    if (sol.residual_sup > tol)
        throw NumericalError(std::string("solve_cell(") + method + "): residual " +
                             std::to_string(sol.residual_sup) + " exceeds tol " +
                             std::to_string(tol));
    return sol;
}

CellSolution solve_large_time(const CellProblem& prob, const PeriodicGrid& grid, double tol,
                              const FluxSetup& flux) {
    March m;
    m.init(flux);
    m.dt = cfl_timestep(grid, flux.sigma, Order::first, 0.0);
    PeriodicHelmholtz hh(grid, prob.order == Order::second ? m.dt : 0.0);
    if (prob.order == Order::second) m.helmholtz = &hh;

    const double window = 2.0;
    const long steps_per_window = std::max<long>(1, std::lround(window / m.dt));
    const double t_window = steps_per_window * m.dt;
    const double drift_tol = tol / 10.0;
    const double t_max = 600.0;

    ScalarField w(grid, 0.0);
    double mean_prev = 0.0;
    double drift_prev = 0.0;
    bool have_prev = false;
    long iters = 0;
    double last_residual = 1e300;
    std::vector<double> r;
    for (double t = 0.0; t < t_max; t += t_window) {
        for (long s = 0; s < steps_per_window; ++s) m.step(w, 0.0, 0.0);
        iters += steps_per_window;
        w.require_finite("large-time iterate");
        const double mean = w.mean();
        const double drift = (mean - mean_prev) / t_window;
        mean_prev = mean;
        if (have_prev && std::fabs(drift - drift_prev) <= drift_tol) {
            // Drift is linear; accept only once the steady profile has set in
            // (the approach can lag the drift for rotating characteristics).
            last_residual = residual_sweep(flux, w, 0.0, -drift, r);
            if (last_residual <= 0.5 * tol) return finish(flux, w, -drift, iters, tol, "large-time");
        }
        drift_prev = drift;
        have_prev = true;
    }
    throw NumericalError("solve_cell(large-time): residual " + std::to_string(last_residual) +
                         " after T=600 (drift not settled within tol)");
}

CellSolution solve_discounted(const CellProblem& prob, const PeriodicGrid& grid, double tol,
                              const FluxSetup& flux) {
    March m;
    m.init(flux);
    const double dt_cfl = cfl_timestep(grid, flux.sigma, Order::first, 0.0);
    PeriodicHelmholtz hh(grid, 0.0);

    const double deltas[] = {1e-1, 1e-2, 1e-3};
    double hbar_levels[3] = {0, 0, 0};
    ScalarField u(grid, 0.0);
    long iters = 0;
    std::vector<double> r;
    for (int level = 0; level < 3; ++level) {
        const double delta = deltas[level];
        // dt also limited by the u-damping from the delta term
        m.dt = std::min(dt_cfl, 0.9 / delta);
        if (prob.order == Order::second) {
            hh = PeriodicHelmholtz(grid, m.dt);
            m.helmholtz = &hh;
        }
        const long max_iters = 4000000;
        bool done = false;
        for (long it = 0; it < max_iters && !done; ++it) {
            m.step(u, delta, 0.0);
            ++iters;
            if (it % 16 == 15) {
                // The frozen-theta residual is exactly affine in a constant
                // shift: residual(u+s) = residual(u) + delta*s.
                const double sup = residual_sweep(flux, u, delta, 0.0, r);
                double mean_r = 0.0;
                for (double x : r) mean_r += x;
                mean_r /= static_cast<double>(r.size());
                for (double& x : u.values) x -= mean_r / delta;
                if (sup - std::fabs(mean_r) <= 0.1 * tol &&
                    residual_sweep(flux, u, delta, 0.0, r) <= 0.1 * tol)
                    done = true;
            }
        }
        u.require_finite("discounted iterate");
        if (!done)
            throw NumericalError("solve_cell(discounted): no convergence at delta=" +
                                 std::to_string(delta));
        hbar_levels[level] = -delta * u.mean();
    }
    // hbar(delta) ~ hbar(0) + a*delta, fitted on the last two levels.
    const double d2 = deltas[1], d3 = deltas[2];
    const double hbar = (hbar_levels[2] * d2 - hbar_levels[1] * d3) / (d2 - d3);
    return finish(flux, u, hbar, iters, tol, "discounted");
}

CellSolution solve_eigenvalue_oracle(const CellProblem& prob, const PeriodicGrid& grid,
                                     double tol) {
    if (!prob.h.quadratic_separable)
        throw ConfigError("eigenvalue-oracle method requires a quadratic-separable Hamiltonian");
    if (prob.order != Order::second)
        throw ConfigError("eigenvalue-oracle method is second-order only");
    if (prob.p[0] != 0.0 || (grid.dim() == 2 && prob.p[1] != 0.0))
        throw ConfigError("eigenvalue-oracle method requires p = 0");

    // Hopf-Cole: u = -2 log w turns |Du|^2/2 + W = Lap u + hbar into the
    // eigenproblem 2 Lap w + W w = hbar w; hbar is the largest eigenvalue.
    const std::size_t n = grid.size();
    std::vector<double> W(n);
    double wmax = -1e300;
    for (std::size_t i = 0; i < n; ++i) {
        W[i] = prob.h.eval(grid.node(i), {0.0, 0.0}, prob.theta);
        wmax = std::max(wmax, W[i]);
    }
    const double mu = wmax + 0.5;
    const double h2 = grid.spacing() * grid.spacing();

    // Shift-inverted power iteration on (mu - 2 Lap - W)^{-1}.
    std::vector<double> q(n, 1.0), z(n);
    for (std::size_t i = 0; i < n; ++i) q[i] += 1e-3 * std::cos(7.0 * grid.node(i)[0]);
    double lambda_prev = -1e300, rho = 0.0;
    long iters = 0;

    auto apply_inverse = [&](const std::vector<double>& in, std::vector<double>& out) {
        if (grid.dim() == 1) {
            std::vector<double> diag(n);
            for (std::size_t i = 0; i < n; ++i) diag[i] = mu - W[i] + 4.0 / h2;
            solve_cyclic_tridiagonal(diag, -2.0 / h2, in, out);
            return;
        }
        // 2D: CG on the SPD operator (mu - W) v - 2 Lap v.
        auto matvec = [&](const std::vector<double>& v, std::vector<double>& y) {
            for (std::size_t i = 0; i < n; ++i) {
                double lap = 0.0;
                for (int k = 0; k < 2; ++k)
                    lap += v[grid.shift(i, k, +1)] - 2.0 * v[i] + v[grid.shift(i, k, -1)];
                y[i] = (mu - W[i]) * v[i] - 2.0 * lap / h2;
            }
        };
        if (out.size() != n) out.assign(n, 0.0);
        std::vector<double> r(n), p(n), ap(n);
        matvec(out, ap);
        double rr = 0.0, b2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            r[i] = in[i] - ap[i];
            p[i] = r[i];
            rr += r[i] * r[i];
            b2 += in[i] * in[i];
        }
        const double tol2 = 1e-26 * std::max(b2, 1e-300);
        for (std::size_t cgit = 0; cgit < 20 * n && rr > tol2; ++cgit) {
            matvec(p, ap);
            double pap = 0.0;
            for (std::size_t i = 0; i < n; ++i) pap += p[i] * ap[i];
            const double alpha = rr / pap;
            double rr_new = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                out[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
                rr_new += r[i] * r[i];
            }
            const double beta = rr_new / rr;
            for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
            rr = rr_new;
        }
    };

    for (int it = 0; it < 20000; ++it) {
        apply_inverse(q, z);
        double qz = 0.0, qq = 0.0, zmax = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            qz += q[i] * z[i];
            qq += q[i] * q[i];
            zmax = std::max(zmax, std::fabs(z[i]));
        }
        rho = qz / qq;  // estimates 1/(mu - lambda_max)
        for (std::size_t i = 0; i < n; ++i) q[i] = z[i] / zmax;
        const double lambda = mu - 1.0 / rho;
        ++iters;
        if (std::fabs(lambda - lambda_prev) < 1e-13 * (1.0 + std::fabs(lambda))) break;
        lambda_prev = lambda;
    }
    const double hbar = mu - 1.0 / rho;

    // Eigen-residual: || (2 Lap + W) q - hbar q ||_inf / ||q||_inf.
    double res = 0.0, qsup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double lap = 0.0;
        for (int k = 0; k < grid.dim(); ++k)
            lap += q[grid.shift(i, k, +1)] - 2.0 * q[i] + q[grid.shift(i, k, -1)];
        res = std::max(res, std::fabs(2.0 * lap / h2 + W[i] * q[i] - hbar * q[i]));
        qsup = std::max(qsup, std::fabs(q[i]));
    }

    // Ground state is positive; corrector = -2 log w, anchored at node 0.
    CellSolution sol{hbar, ScalarField(grid, 0.0), res / qsup, iters};
    double qmin = 1e300;
    for (double v : q) qmin = std::min(qmin, v);
    if (qmin <= 0.0)
        throw NumericalError("eigenvalue oracle: ground state is not positive (spurious mode)");
    for (std::size_t i = 0; i < n; ++i) sol.corrector[i] = -2.0 * std::log(q[i]);
    const double anchor = sol.corrector[0];
    for (double& v : sol.corrector.values) v -= anchor;
    (void)tol;
    return sol;
}

}  // namespace

CellSolution solve_cell(const CellProblem& prob, const PeriodicGrid& grid, double tol) {
    if (tol <= 0.0) throw ConfigError("solve_cell: tol must be positive");
    if (grid.n() < 32) throw ConfigError("solve_cell: grid needs at least 32 points per axis");
    if (prob.h.dim != grid.dim()) throw ConfigError("solve_cell: Hamiltonian/grid dim mismatch");
    if (prob.method == CellMethod::eigenvalue_oracle)
        return solve_eigenvalue_oracle(prob, grid, tol);
    double pmag = std::fabs(prob.p[0]);
    if (grid.dim() == 2) pmag = std::max(pmag, std::fabs(prob.p[1]));
    if (pmag > 7.0)
        throw ConfigError("solve_cell: |p| = " + std::to_string(pmag) +
                          " is outside the reliable sampling box (|p| <= 7)");

    const FluxSetup flux =
        make_flux_setup(prob.h, grid, prob.p, 1.0, false, prob.theta,
                        prob.order == Order::second ? 1.0 : 0.0, prob.theta, prob.theta, 0.0);

    if (prob.method == CellMethod::large_time) return solve_large_time(prob, grid, tol, flux);
    return solve_discounted(prob, grid, tol, flux);
}

}  // namespace hjlab
