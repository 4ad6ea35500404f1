#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "starry/sparse_table.hpp"
#include "starry/tree_metric.hpp"

namespace starry {

/*
 * Tree-indexed Gaussian labels Z over an excursion grid. Conditionally on the
 * grid, Cov(z[i], z[j]) = interval_min(i, j). Also answers the cyclic label
 * distance
 *   D°(i, j) = z[i] + z[j] - 2 max(cmin(i, j), cmin(j, i))
 * where cmin(a, b) is the minimum of z over the contour arc running forward
 * from a to b, with 0 and n_cells identified.
 */
class SnakeLabels {
public:
    SnakeLabels(std::vector<double> z, std::uint64_t seed);

    std::size_t n_cells() const noexcept { return z_.size() - 1; }
    std::span<const double> z() const noexcept { return z_; }
    double operator[](std::size_t i) const noexcept { return z_[i]; }
    std::uint64_t seed() const noexcept { return seed_; }

    double cyclic_min(std::size_t a, std::size_t b) const;
    double d_circ(std::size_t i, std::size_t j) const;

private:
    std::vector<double> z_;
    std::uint64_t seed_;
    SparseTable<double> doubled_;  // z over [0, 2 n_cells], z[k] = z[k mod n_cells]
};

/// Contour walk over the grid keeping the ancestral line of the current point
/// as a stack of (height, label) pairs. Moving from i to i+1 the walk drops to
/// m = min(f[i], f[i+1]): entries above m are popped, the label at height m is
/// drawn from the Brownian bridge between the retained top and the lowest
/// popped entry, then the walk climbs to f[i+1] with an independent
/// Gaussian(0, f[i+1] - m) increment. Step i consumes Gaussians 2i and 2i+1 of
/// CounterRng(seed, kSnakeStream).
SnakeLabels simulate_labels(const TreeMetric& tm, std::uint64_t seed);

enum class SubsetStrategy { uniform_stride, include_extremes };

/// Chain-point subset of the grid: uniform stride floor(k n / m), or the
/// leftmost argmin/argmax of z in each of m/2 equal blocks topped up with
/// stride points. Returned sorted and duplicate-free.
std::vector<std::size_t> select_subset(const SnakeLabels& sl, std::size_t m, SubsetStrategy strategy);

/// D° on a finite subset together with its shortest-chain closure, an upper
/// bound on the map distance D restricted to chains through the subset.
class MapMetric {
public:
    MapMetric(std::vector<std::size_t> sample_indices, std::vector<double> d_circ,
              std::vector<double> d_map);

    std::size_t size() const noexcept { return indices_.size(); }
    std::span<const std::size_t> sample_indices() const noexcept { return indices_; }

    double d_circ_at(std::size_t a, std::size_t b) const noexcept { return circ_[a * size() + b]; }
    double d_map_at(std::size_t a, std::size_t b) const noexcept { return map_[a * size() + b]; }

    /// Position of a grid index within sample_indices, if present.
    std::ptrdiff_t position_of(std::size_t grid_index) const noexcept;
    /// d_map between two grid indices; throws SubsetError if either is not sampled.
    double d_map(std::size_t grid_i, std::size_t grid_j) const;

private:
    std::vector<std::size_t> indices_;
    std::vector<double> circ_;
    std::vector<double> map_;
};

/// Closure on an explicit sorted, duplicate-free index set.
MapMetric map_metric_on(const SnakeLabels& sl, std::vector<std::size_t> indices, unsigned threads = 1);

/// Throws InvalidArgument unless 2 <= m <= n_cells.
MapMetric map_metric(const SnakeLabels& sl, std::size_t m, SubsetStrategy strategy, unsigned threads = 1);

/// In-place min-plus closure of a symmetric m x m matrix. Floyd-Warshall
/// sweeps repeat until a sweep changes nothing, so the result satisfies the
/// triangle inequality exactly in floating point.
void shortest_chain_closure(std::vector<double>& d, std::size_t m, unsigned threads = 1);

struct PairMargin {
    std::size_t i = 0, j = 0;  // grid indices
    double d_circ = 0.0;
    double d_map = 0.0;
    double lca_bound = 0.0;    // z[i] + z[j] - 2 z[ancestor]
    double label_bound = 0.0;  // |z[i] - z[j]|
};

struct BoundsReport {
    std::size_t pairs = 0;
    std::size_t upper_violations = 0;     // d_map > d_circ
    std::size_t lca_negative = 0;         // d_map < lca_bound
    std::size_t label_negative = 0;       // d_map < label_bound
    double min_lca_margin = 0.0;
    double min_label_margin = 0.0;
    std::vector<PairMargin> margins;
};

/// Diagnostic comparison of d_map against D° above and two lower bounds below.
BoundsReport check_bounds(const SnakeLabels& sl, const TreeMetric& tm, const MapMetric& mm);

}  // namespace starry
