#include "starry/snake.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "starry/error.hpp"
#include "starry/parallel.hpp"
#include "starry/rng.hpp"

namespace starry {

namespace {

std::vector<double> doubled(std::span<const double> z) {
    const std::size_t n = z.size() - 1;
    std::vector<double> out(2 * n + 1);
    for (std::size_t k = 0; k <= 2 * n; ++k) out[k] = z[k % n];
    return out;
}

}  // namespace

SnakeLabels::SnakeLabels(std::vector<double> z, std::uint64_t seed) : z_(std::move(z)), seed_(seed) {
    if (z_.size() < 3) throw InvalidArgument("snake labels need n_cells >= 2");
    if (z_.back() != z_.front()) throw InvalidArgument("labels at 0 and n_cells must agree");
    const auto dz = doubled(z_);
    doubled_ = SparseTable<double>(std::span<const double>(dz));
}

double SnakeLabels::cyclic_min(std::size_t a, std::size_t b) const {
    const std::size_t n = n_cells();
    if (a > n || b > n) throw InvalidArgument("label index out of range");
    if (a <= b) return doubled_.min(a, b);
    return doubled_.min(a, n + b);
}

double SnakeLabels::d_circ(std::size_t i, std::size_t j) const {
    const double m = std::max(cyclic_min(i, j), cyclic_min(j, i));
    return z_[i] + z_[j] - 2.0 * m;
}

SnakeLabels simulate_labels(const TreeMetric& tm, std::uint64_t seed) {
    const auto f = tm.grid().values();
    const std::size_t n = tm.n_cells();
    const CounterRng rng(seed, kSnakeStream);

    struct Entry {
        double height;
        double label;
    };
    std::vector<Entry> stack{{f[0], 0.0}};
    std::vector<double> z(n + 1);
    z[0] = 0.0;

    for (std::size_t i = 0; i < n; ++i) {
        const double m = std::min(f[i], f[i + 1]);
        Entry popped{};
        bool any_popped = false;
        while (stack.back().height > m) {
            popped = stack.back();
            any_popped = true;
            stack.pop_back();
        }
        const Entry top = stack.back();
        if (top.height < m) {
            double label;
            const double g = rng.gaussian(2 * i);
            if (any_popped) {
                const double span = popped.height - top.height;
                const double lo = m - top.height;
                const double hi = popped.height - m;
                label = top.label + (lo / span) * (popped.label - top.label) + std::sqrt(lo * hi / span) * g;
            } else {
                label = top.label + std::sqrt(m - top.height) * g;
            }
            stack.push_back({m, label});
        }
        if (f[i + 1] > m) {
            const Entry base = stack.back();
            stack.push_back({f[i + 1], base.label + std::sqrt(f[i + 1] - m) * rng.gaussian(2 * i + 1)});
        }
        z[i + 1] = stack.back().label;
    }
    return SnakeLabels(std::move(z), seed);
}

std::vector<std::size_t> select_subset(const SnakeLabels& sl, std::size_t m, SubsetStrategy strategy) {
    const std::size_t n = sl.n_cells();
    if (m < 2 || m > n) throw InvalidArgument("subset size must satisfy 2 <= m <= n_cells");
    std::vector<std::size_t> stride(m);
    for (std::size_t k = 0; k < m; ++k) stride[k] = k * n / m;
    if (strategy == SubsetStrategy::uniform_stride) return stride;

    std::vector<std::size_t> out;
    const std::size_t blocks = std::max<std::size_t>(1, m / 2);
    const auto z = sl.z();
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t lo = b * n / blocks;
        const std::size_t hi = (b + 1) * n / blocks;
        if (lo >= hi) continue;
        const auto first = z.begin() + static_cast<std::ptrdiff_t>(lo);
        const auto last = z.begin() + static_cast<std::ptrdiff_t>(hi);
        out.push_back(static_cast<std::size_t>(std::min_element(first, last) - z.begin()));
        out.push_back(static_cast<std::size_t>(std::max_element(first, last) - z.begin()));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out.size() > m) out.resize(m);
    for (std::size_t k = 0; k < m && out.size() < m; ++k) {
        if (!std::binary_search(out.begin(), out.end(), stride[k])) {
            out.insert(std::lower_bound(out.begin(), out.end(), stride[k]), stride[k]);
        }
    }
    return out;
}

MapMetric::MapMetric(std::vector<std::size_t> sample_indices, std::vector<double> d_circ,
                     std::vector<double> d_map)
    : indices_(std::move(sample_indices)), circ_(std::move(d_circ)), map_(std::move(d_map)) {}

std::ptrdiff_t MapMetric::position_of(std::size_t grid_index) const noexcept {
    const auto it = std::lower_bound(indices_.begin(), indices_.end(), grid_index);
    if (it == indices_.end() || *it != grid_index) return -1;
    return it - indices_.begin();
}

double MapMetric::d_map(std::size_t grid_i, std::size_t grid_j) const {
    const auto a = position_of(grid_i);
    const auto b = position_of(grid_j);
    if (a < 0 || b < 0) throw SubsetError("grid index is not a chain point of this map metric");
    return d_map_at(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
}

void shortest_chain_closure(std::vector<double>& d, std::size_t m, unsigned threads) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t k = 0; k < m; ++k) {
            // row k and column k are fixed during stage k since d[k][k] == 0
            const double* row_k = d.data() + k * m;
            std::vector<char> touched(m, 0);
            parallel_for(m, threads, [&](std::size_t begin, std::size_t end) {
                for (std::size_t i = begin; i < end; ++i) {
                    double* row_i = d.data() + i * m;
                    const double dik = row_i[k];
                    for (std::size_t j = 0; j < m; ++j) {
                        const double via = dik + row_k[j];
                        if (via < row_i[j]) {
                            row_i[j] = via;
                            touched[i] = 1;
                        }
                    }
                }
            });
            changed = changed || std::any_of(touched.begin(), touched.end(), [](char c) { return c != 0; });
        }
    }
}

MapMetric map_metric_on(const SnakeLabels& sl, std::vector<std::size_t> indices, unsigned threads) {
    if (indices.size() < 2) throw InvalidArgument("map metric needs at least two chain points");
    if (!std::is_sorted(indices.begin(), indices.end()) ||
        std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
        throw InvalidArgument("chain points must be sorted and distinct");
    }
    if (indices.back() > sl.n_cells()) throw InvalidArgument("chain point out of range");
    const std::size_t m = indices.size();
    std::vector<double> circ(m * m);
    parallel_for(m, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t a = begin; a < end; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                circ[a * m + b] = a == b ? 0.0 : sl.d_circ(indices[a], indices[b]);
            }
        }
    });
    auto closed = circ;
    shortest_chain_closure(closed, m, threads);
    return MapMetric(std::move(indices), std::move(circ), std::move(closed));
}

MapMetric map_metric(const SnakeLabels& sl, std::size_t m, SubsetStrategy strategy, unsigned threads) {
    return map_metric_on(sl, select_subset(sl, m, strategy), threads);
}

BoundsReport check_bounds(const SnakeLabels& sl, const TreeMetric& tm, const MapMetric& mm) {
    if (sl.n_cells() != tm.n_cells()) throw InvalidArgument("labels and tree metric use different grids");
    BoundsReport report;
    report.min_lca_margin = std::numeric_limits<double>::infinity();
    report.min_label_margin = std::numeric_limits<double>::infinity();
    const auto idx = mm.sample_indices();
    for (std::size_t a = 0; a < mm.size(); ++a) {
        for (std::size_t b = a; b < mm.size(); ++b) {
            PairMargin pm;
            pm.i = idx[a];
            pm.j = idx[b];
            pm.d_circ = mm.d_circ_at(a, b);
            pm.d_map = mm.d_map_at(a, b);
            const std::size_t anc = tm.interval_argmin(pm.i, pm.j);
            pm.lca_bound = sl[pm.i] + sl[pm.j] - 2.0 * sl[anc];
            pm.label_bound = std::abs(sl[pm.i] - sl[pm.j]);
            ++report.pairs;
            if (pm.d_map > pm.d_circ) ++report.upper_violations;
            const double lca_margin = pm.d_map - pm.lca_bound;
            const double label_margin = pm.d_map - pm.label_bound;
            if (lca_margin < 0.0) ++report.lca_negative;
            if (label_margin < 0.0) ++report.label_negative;
            report.min_lca_margin = std::min(report.min_lca_margin, lca_margin);
            report.min_label_margin = std::min(report.min_label_margin, label_margin);
            report.margins.push_back(pm);
        }
    }
    return report;
}

}  // namespace starry
