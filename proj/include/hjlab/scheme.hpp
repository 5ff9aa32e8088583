#pragma once

#include <vector>

#include "hjlab/grid.hpp"
#include "hjlab/hamiltonian.hpp"

namespace hjlab {

enum class Order { first, second };

/// Everything a monotone-scheme sweep needs: which Hamiltonian, how one-sided
/// differences map to p-arguments, where u comes from, the diffusion
/// coefficient, and the flux choice (Godunov for pstar_origin Hamiltonians,
/// sampled-sigma Lax-Friedrichs otherwise).
struct FluxSetup {
    const HamiltonianSpec* h = nullptr;
    PeriodicGrid grid{1, 8};
    Coord p_slope{0.0, 0.0};
    double grad_scale = 1.0;  // one-sided differences are multiplied by grad_scale/h
    bool use_field_u = false;
    double theta = 0.0;  // frozen u when !use_field_u
    double nu = 0.0;     // coefficient of the Laplacian term
    bool godunov = true;
    std::vector<double> sigma;   // per-axis dissipation / gradient bounds (x-space p units)
    double du_bound = 0.0;       // sampled sup of d_u H over the working box
    double p_box_radius = 0.0;   // |p| box used for the sigma sampling
};

/// Smallest radius r (in 0.5 steps, capped at 24) with
/// H(x, +-r e_k, u) >= max_x H(x,0,u) + |c| + 1 over sampled (x,u).
/// Throws NumericalError when no such radius exists (non-coercive data).
double coercivity_radius(const HamiltonianSpec& h, double u_lo, double u_hi, double c_level);

/// Per-axis bound max |dH/dp_k| sampled over the grid x-nodes, |p|_inf <= box
/// and u in [u_lo, u_hi], times a 1.2 safety factor.
std::vector<double> sample_gradient_bound(const HamiltonianSpec& h, const PeriodicGrid& grid,
                                          double p_box, double u_lo, double u_hi);

/// Sampled upper bound for d_u H over the working box (u-damping stability).
double sample_du_bound(const HamiltonianSpec& h, const PeriodicGrid& grid, double p_box,
                       double u_lo, double u_hi);

FluxSetup make_flux_setup(const HamiltonianSpec& h, const PeriodicGrid& grid,
                          const Coord& p_slope, double grad_scale, bool use_field_u,
                          double theta, double nu, double u_lo, double u_hi, double c_level);

/// Monotone numerical Hamiltonian at one node; pm/pp are the full one-sided
/// p-arguments (slope and gradient scaling already applied).
double numerical_hamiltonian(const FluxSetup& s, const Coord& x, const Coord& pm,
                             const Coord& pp, double u);

/// residual_i = lambda v_i + NumH_i(v) - nu lap(v)_i - c. Returns sup |r|.
double residual_sweep(const FluxSetup& s, const ScalarField& v, double lambda, double c,
                      std::vector<double>& r);

/// One forward-Euler step v <- v - dt * residual(v). Monotone for dt within
/// the CFL bound; exposed for the order-preservation property test.
void explicit_euler_step(const FluxSetup& s, ScalarField& v, double lambda, double c, double dt);

/// dt = 0.4 min(h / sum sigma_k, order==second ? h^2/(2 dim nu) : inf).
double cfl_timestep(const PeriodicGrid& grid, const std::vector<double>& sigma, Order order,
                    double nu);

/// Solves (I - alpha Lap_h) out = rhs on the periodic grid: cyclic Thomas in
/// 1D, plain conjugate gradients in 2D. alpha >= 0.
class PeriodicHelmholtz {
public:
    PeriodicHelmholtz(const PeriodicGrid& grid, double alpha);
    void solve(const std::vector<double>& rhs, std::vector<double>& out);

private:
    PeriodicGrid grid_;
    double a_;  // alpha / h^2
    std::vector<double> cg_p_, cg_r_, cg_ap_;
};

/// Cyclic tridiagonal solve: diag[i] x[i] + off (x[i-1]+x[i+1]) = rhs[i] with
/// periodic wrap; diag may vary per row. Used by the Helmholtz solve and the
/// eigenvalue oracle.
void solve_cyclic_tridiagonal(const std::vector<double>& diag, double off,
                              const std::vector<double>& rhs, std::vector<double>& x);

}  // namespace hjlab
