#pragma once

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "hjlab/errors.hpp"

namespace hjlab {

/// Point / covector on the torus; only the first `dim` entries are meaningful.
using Coord = std::array<double, 2>;

/// Uniform node-centered grid on T^n = [0,1)^n, n in {1,2}. Nodes sit at
/// x_i = i*h with h = 1/N; indexing is periodic (i and i+N are the same node).
class PeriodicGrid {
public:
    PeriodicGrid(int dim, int points_per_axis);

    int dim() const { return dim_; }
    int n() const { return n_; }
    double spacing() const { return h_; }
    std::size_t size() const { return size_; }

    int wrap(int i) const {
        i %= n_;
        return i < 0 ? i + n_ : i;
    }

    std::size_t index(int i, int j = 0) const {
        return static_cast<std::size_t>(wrap(i)) +
               (dim_ == 2 ? static_cast<std::size_t>(wrap(j)) * n_ : 0u);
    }

    /// Flat index of the node shifted `by` steps along `axis`, with wraparound.
    std::size_t shift(std::size_t flat, int axis, int by) const {
        int i = static_cast<int>(flat % n_);
        int j = static_cast<int>(flat / n_);
        if (axis == 0)
            i = wrap(i + by);
        else
            j = wrap(j + by);
        return static_cast<std::size_t>(i) + static_cast<std::size_t>(j) * (dim_ == 2 ? n_ : 1);
    }

    Coord node(std::size_t flat) const {
        Coord x{0.0, 0.0};
        x[0] = static_cast<double>(flat % n_) * h_;
        if (dim_ == 2) x[1] = static_cast<double>(flat / n_) * h_;
        return x;
    }

    bool operator==(const PeriodicGrid& o) const { return dim_ == o.dim_ && n_ == o.n_; }

private:
    int dim_;
    int n_;
    double h_;
    std::size_t size_;
};

/// Real-valued grid function; every entry must stay finite.
struct ScalarField {
    PeriodicGrid grid;
    std::vector<double> values;

    explicit ScalarField(const PeriodicGrid& g, double fill = 0.0)
        : grid(g), values(g.size(), fill) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    double max_abs() const;
    double mean() const;
    /// Throws NumericalError on the first NaN/Inf entry.
    void require_finite(const char* label) const;
};

/// One-sided difference pair at a node: first = backward (p-), second = forward (p+).
std::pair<Coord, Coord> gradient_upwind(const ScalarField& f, std::size_t node);

/// Centered gradient (average of the one-sided differences).
Coord gradient_centered(const ScalarField& f, std::size_t node);

/// Standard 2*dim+1 point centered Laplacian with periodic wrap.
double laplacian_centered(const ScalarField& f, std::size_t node);

/// Periodic multilinear interpolation of f at an arbitrary point of [0,1)^n.
double sample_periodic(const ScalarField& f, const Coord& x);

}  // namespace hjlab
