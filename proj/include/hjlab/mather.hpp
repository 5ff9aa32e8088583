#pragma once

#include <variant>

#include "hjlab/legendre.hpp"
#include "hjlab/scheme.hpp"
#include "hjlab/simplex.hpp"

namespace hjlab {

/// Product discretization of position-velocity space: the periodic x-grid
/// times a uniform v-grid on [-vmax, vmax]^dim with mv (odd) points per axis,
/// so v = 0 is a node.
struct MeasureGrid {
    PeriodicGrid xgrid;
    int mv = 33;
    double vmax = 5.0;

    MeasureGrid(const PeriodicGrid& xg, int mv_, double vmax_);
    std::size_t v_count() const;     // mv^dim
    std::size_t size() const;        // xgrid.size() * v_count()
    double v_component(int j) const; // axis value of v-index j
    Coord v_node(std::size_t vflat) const;
};

MeasureGrid default_measure_grid(int dim);
int default_fourier_order(int dim);  // K = 8 in 1D, 4 in 2D

/// Nonnegative weights on the (x,v) product grid; indexing is
/// x-major: weight[xi * v_count + vj].
struct DiscreteMeasure {
    MeasureGrid mg;
    std::vector<double> weights;

    explicit DiscreteMeasure(const MeasureGrid& g) : mg(g), weights(g.size(), 0.0) {}
    double mass() const;
    std::vector<double> x_marginal() const;
    /// Integral of an (x,v)-sampled table against the measure.
    double integrate(const std::vector<double>& table) const;
};

struct SupportAtom {
    Coord x;
    Coord v;
    double weight;
};

/// The u-argument of the Lagrangian at each x-node: a constant theta or a
/// continuous field phi (sampled by periodic interpolation).
using Frozen = std::variant<double, ScalarField>;

struct MatherResult {
    DiscreteMeasure measure;
    double c_value = 0.0;      // = -(optimal objective)
    double objective = 0.0;    // stage-1 optimum (before measure canonicalization)
    Order order = Order::first;
    std::vector<SupportAtom> support;        // weights above 1e-6
    std::vector<double> row_residuals;       // per constraint row, returned measure
    long lp_pivots = 0;
};

/// Minimize the Lagrangian action over discretized holonomic measures:
///   min sum mu_ij L(x_i, v_j, frozen(x_i))
///   s.t. mass 1, mu >= 0, and for every Fourier mode phi with |k|_inf <= K:
///        sum mu_ij [ <dphi(x_i), v_j> + (order==second) * lap phi(x_i) ] = 0.
/// The returned measure is canonicalized: re-optimized within a 1e-5 slack to
/// spread marginal mass (capped at 1e-7 per node) and averaged over grid
/// translations that preserve optimality; c_value always reports the exact
/// stage-1 optimum.
MatherResult mather_lp(const HamiltonianSpec& h, const Frozen& frozen, Order order,
                       const MeasureGrid& mg, int fourier_order);

enum class OrdinalVerdict { empty_certified, ordinal_found, inconclusive };

struct OrdinalResult {
    OrdinalVerdict verdict = OrdinalVerdict::inconclusive;
    double max_du_integral = 0.0;  // max of int d_u L dmu over the optimal face
    double c_value = 0.0;
    DiscreteMeasure witness;
    bool has_witness = false;
};

/// First-order ordinal Mather diagnostic: maximize int d_u L dmu over the
/// face of Mather measures (objective pinned within 1e-8). Max >= -1e-6:
/// ordinal-found; max <= -1e-3: empty-certified; otherwise inconclusive.
OrdinalResult ordinal_diagnostic(const HamiltonianSpec& h, const Frozen& frozen,
                                 const MeasureGrid& mg, int fourier_order);

struct MarginalTable {
    std::vector<double> weight;  // per x-node
    double positivity_fraction = 0.0;
    int zero_nodes = 0;          // below the 1e-8 threshold
};

/// x-marginal of a second-order Mather measure (first-order input is a
/// contract violation).
MarginalTable measure_pushforward_density(const MatherResult& result);

}  // namespace hjlab
