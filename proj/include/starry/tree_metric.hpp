#pragma once

#include <cstddef>
#include <vector>

#include "starry/excursion.hpp"
#include "starry/sparse_table.hpp"

namespace starry {

/*
 * Continuum-tree pseudometric of an excursion grid:
 *   d(i, j) = f(i) + f(j) - 2 min f[min(i,j) .. max(i,j)].
 * Grid points i and j are the same tree vertex exactly when d(i, j) == 0.
 * Holds its own copy of the grid, with values rounded to a dyadic lattice fine
 * enough (about 1e-15 relative) that every distance is computed exactly.
 * Immutable after construction.
 */
class TreeMetric {
public:
    explicit TreeMetric(ExcursionGrid grid);

    const ExcursionGrid& grid() const noexcept { return grid_; }
    std::size_t n_cells() const noexcept { return grid_.n_cells(); }

    double interval_min(std::size_t i, std::size_t j) const;
    /// Leftmost index attaining interval_min(i, j); the tree ancestor of i and j.
    std::size_t interval_argmin(std::size_t i, std::size_t j) const;
    double dist(std::size_t i, std::size_t j) const;
    bool is_equivalent(std::size_t i, std::size_t j) const;

    /// Strict interior local maxima of the excursion.
    std::vector<std::size_t> leaves() const;

    double operator()(std::size_t i, std::size_t j) const { return dist(i, j); }

private:
    void check(std::size_t i, std::size_t j) const;

    ExcursionGrid grid_;
    SparseTable<double> rmq_;
};

inline TreeMetric build_tree_metric(ExcursionGrid grid) { return TreeMetric(std::move(grid)); }

}  // namespace starry
