#include "starry/tree_metric.hpp"

#include <algorithm>
#include <cmath>

#include "starry/error.hpp"

namespace starry {

namespace {

// Round every value to a multiple of 2^(e-50), where 2^e bounds the maximum. Any
// distance, and any sum of two distances, is then exact in double precision, so
// the triangle and four-point inequalities hold without rounding slack.
ExcursionGrid snap_to_lattice(ExcursionGrid grid) {
    const auto v = grid.values();
    const double top = *std::max_element(v.begin(), v.end());
    if (top == 0.0) return grid;
    int e = 0;
    std::frexp(top, &e);
    const int shift = 50 - e;
    std::vector<double> snapped(v.begin(), v.end());
    bool changed = false;
    for (double& x : snapped) {
        const double y = std::ldexp(std::nearbyint(std::ldexp(x, shift)), -shift);
        changed = changed || y != x;
        x = y;
    }
    if (!changed) return grid;
    return ExcursionGrid(std::move(snapped), grid.provenance());
}

}  // namespace

TreeMetric::TreeMetric(ExcursionGrid grid)
    : grid_(snap_to_lattice(std::move(grid))), rmq_(grid_.values()) {}

void TreeMetric::check(std::size_t i, std::size_t j) const {
    if (i > n_cells() || j > n_cells()) throw InvalidArgument("tree metric index out of range");
}

std::size_t TreeMetric::interval_argmin(std::size_t i, std::size_t j) const {
    check(i, j);
    return rmq_.argmin(std::min(i, j), std::max(i, j));
}

double TreeMetric::interval_min(std::size_t i, std::size_t j) const {
    return grid_[interval_argmin(i, j)];
}

double TreeMetric::dist(std::size_t i, std::size_t j) const {
    const double m = interval_min(i, j);
    return grid_[i] + grid_[j] - 2.0 * m;
}

bool TreeMetric::is_equivalent(std::size_t i, std::size_t j) const { return dist(i, j) == 0.0; }

std::vector<std::size_t> TreeMetric::leaves() const {
    std::vector<std::size_t> out;
    const auto v = grid_.values();
    for (std::size_t i = 1; i < n_cells(); ++i) {
        if (v[i] > v[i - 1] && v[i] > v[i + 1]) out.push_back(i);
    }
    return out;
}

}  // namespace starry
