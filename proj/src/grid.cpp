#include "hjlab/grid.hpp"

#include <cmath>
#include <string>

namespace hjlab {

PeriodicGrid::PeriodicGrid(int dim, int points_per_axis) : dim_(dim), n_(points_per_axis) {
    if (dim != 1 && dim != 2)
        throw ConfigError("PeriodicGrid: dim must be 1 or 2, got " + std::to_string(dim));
    if (points_per_axis < 8)
        throw ConfigError("PeriodicGrid: need at least 8 points per axis, got " +
                          std::to_string(points_per_axis));
    h_ = 1.0 / n_;
    size_ = static_cast<std::size_t>(n_);
    if (dim_ == 2) size_ *= n_;
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::fabs(v));
    return m;
}

double ScalarField::mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
}

void ScalarField::require_finite(const char* label) const {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            throw NumericalError(std::string(label) + ": non-finite value at node " +
                                 std::to_string(i));
}

std::pair<Coord, Coord> gradient_upwind(const ScalarField& f, std::size_t node) {
    const double inv_h = 1.0 / f.grid.spacing();
    Coord pm{0.0, 0.0}, pp{0.0, 0.0};
    for (int k = 0; k < f.grid.dim(); ++k) {
        const double back = f[f.grid.shift(node, k, -1)];
        const double fwd = f[f.grid.shift(node, k, +1)];
        pm[k] = (f[node] - back) * inv_h;
        pp[k] = (fwd - f[node]) * inv_h;
    }
    return {pm, pp};
}

Coord gradient_centered(const ScalarField& f, std::size_t node) {
    const double inv_2h = 0.5 / f.grid.spacing();
    Coord g{0.0, 0.0};
    for (int k = 0; k < f.grid.dim(); ++k)
        g[k] = (f[f.grid.shift(node, k, +1)] - f[f.grid.shift(node, k, -1)]) * inv_2h;
    return g;
}

double sample_periodic(const ScalarField& f, const Coord& x) {
    const PeriodicGrid& g = f.grid;
    const double n = static_cast<double>(g.n());
    const double tx = x[0] * n;
    int i0 = static_cast<int>(std::floor(tx));
    const double fx = tx - i0;
    if (g.dim() == 1) {
        const double a = f[g.index(i0)];
        const double b = f[g.index(i0 + 1)];
        return a + (b - a) * fx;
    }
    double ty = x[1] * n;
    int j0 = static_cast<int>(std::floor(ty));
    const double fy = ty - j0;
    const double v00 = f[g.index(i0, j0)], v10 = f[g.index(i0 + 1, j0)];
    const double v01 = f[g.index(i0, j0 + 1)], v11 = f[g.index(i0 + 1, j0 + 1)];
    return (1 - fy) * (v00 + (v10 - v00) * fx) + fy * (v01 + (v11 - v01) * fx);
}

double laplacian_centered(const ScalarField& f, std::size_t node) {
    const double inv_h2 = 1.0 / (f.grid.spacing() * f.grid.spacing());
    double lap = 0.0;
    for (int k = 0; k < f.grid.dim(); ++k)
        lap += (f[f.grid.shift(node, k, +1)] - 2.0 * f[node] + f[f.grid.shift(node, k, -1)]) *
               inv_h2;
    return lap;
}

}  // namespace hjlab
