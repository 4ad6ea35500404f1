#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace starry {

/*
 * Sparse table for O(1) range-argmin after O(N log N) preprocessing.
 * level[k][i] holds the leftmost argmin of data[i, i + 2^k).
 */
template <class T>
class SparseTable {
public:
    SparseTable() = default;

    explicit SparseTable(std::span<const T> data) : data_(data.begin(), data.end()) {
        const std::size_t n = data_.size();
        if (n == 0) return;
        levels_.emplace_back(n);
        for (std::size_t i = 0; i < n; ++i) levels_[0][i] = static_cast<std::uint32_t>(i);
        for (std::size_t width = 2; width <= n; width *= 2) {
            const auto& prev = levels_.back();
            std::vector<std::uint32_t> cur(n - width + 1);
            const std::size_t half = width / 2;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                cur[i] = pick(prev[i], prev[i + half]);
            }
            levels_.push_back(std::move(cur));
        }
    }

    std::size_t size() const noexcept { return data_.size(); }

    // requires lo <= hi < size()
    std::size_t argmin(std::size_t lo, std::size_t hi) const noexcept {
        const std::size_t k = std::bit_width(hi - lo + 1) - 1;
        return pick(levels_[k][lo], levels_[k][hi + 1 - (std::size_t{1} << k)]);
    }

    const T& min(std::size_t lo, std::size_t hi) const noexcept { return data_[argmin(lo, hi)]; }

private:
    // leftmost on ties
    std::uint32_t pick(std::uint32_t a, std::uint32_t b) const noexcept {
        if (data_[b] < data_[a]) return b;
        if (data_[a] < data_[b]) return a;
        return a < b ? a : b;
    }

    std::vector<T> data_;
    std::vector<std::vector<std::uint32_t>> levels_;
};

}  // namespace starry
