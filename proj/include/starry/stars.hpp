#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "starry/excursion.hpp"
#include "starry/metric.hpp"
#include "starry/snake.hpp"
#include "starry/tree_metric.hpp"

namespace starry {

/*
 * (a, eta)-approximate n-star: a center x0 and satellites x1..xn with
 *   rho <= d(x0, xi) <= (1 + eta) rho
 *   (a - eta) rho <= d(xi, xj) <= a rho        (i != j)
 * for some rho > 0, where a > 1 and 0 < eta < (a - 1) / 2.
 */
struct StarCertificate {
    MetricKind metric = MetricKind::tree;
    std::size_t center = 0;
    std::vector<std::size_t> satellites;
    double a = 0.0;
    double eta = 0.0;
    double rho = 0.0;
    std::vector<double> center_distances;         // d(x0, xi)
    std::vector<std::vector<double>> pair_distances;  // d(xi, xj), zero diagonal

    std::size_t n() const noexcept { return satellites.size(); }
};

/// Throws InvalidArgument unless a > 1 and 0 < eta < (a - 1) / 2.
void check_star_parameters(double a, double eta);

/// Checks every star inequality at one fixed rho.
std::optional<StarCertificate> verify_star_at(const Distance& d, std::size_t center,
                                              std::span<const std::size_t> satellites, double a,
                                              double eta, double rho,
                                              MetricKind kind = MetricKind::tree);

/// Tries rho = min d(x0, xi) first, then eight evenly spaced rho over
/// [max d(x0, xi) / (1 + eta), min d(x0, xi)]; the first rho that verifies wins.
/// Throws InvalidArgument for fewer than two satellites, repeated points or
/// out-of-range (a, eta).
std::optional<StarCertificate> verify_star(const Distance& d, std::size_t center,
                                           std::span<const std::size_t> satellites, double a,
                                           double eta, MetricKind kind = MetricKind::tree);

/// Window [s_idx, t_idx] on which the excursion tracks a scaled zig-zag:
/// tol = max |f(s) - f(s_idx) - sqrt(D) F_n((s - s_idx) / D)| / sqrt(D) over
/// grid points of the window, D the window length in t units.
struct WindowMatch {
    int n = 0;
    std::size_t s_idx = 0;
    std::size_t t_idx = 0;
    double tol = 0.0;

    std::size_t cells() const noexcept { return t_idx - s_idx; }
};

/// Matching threshold 2^{1-n}.
double window_tolerance(int n);

/// Achieved tol of one window (not early-terminated).
double window_deviation(const ExcursionGrid& grid, int n, std::size_t start, std::size_t cells);

/// Slides windows of each dyadic length (in cells, each >= 4n) with stride
/// length/4, keeps windows whose tol < 2^{1-n}, then greedily selects a
/// pairwise-disjoint subset by increasing right endpoint.
std::vector<WindowMatch> scan_windows(const ExcursionGrid& grid, int n,
                                      std::span<const std::size_t> window_lengths,
                                      unsigned threads = 1);

/// Same evaluation and selection on explicitly given (start, cells) windows.
std::vector<WindowMatch> scan_fixed_windows(const ExcursionGrid& grid, int n,
                                            std::span<const std::pair<std::size_t, std::size_t>> windows,
                                            unsigned threads = 1);

/// Dyadic lengths 2^lo .. 2^hi cells.
std::vector<std::size_t> dyadic_lengths(unsigned lo_exp, unsigned hi_exp);

/// Interval family A_n^k = [a(n,k), a(n,k) + 2^{-(n+k+2)}] with
/// a(n,k) = 3/4 - 2^{-(n+k+1)} (2^{k-1} + 1).
std::pair<double, double> ank_interval(int n, int k);

/// A_n^k for k = 1, 2, ... mapped to (start, cells) on a dyadic grid, while the
/// window still has at least 4n cells.
std::vector<std::pair<std::size_t, std::size_t>> ank_windows(int n, std::size_t n_cells);

/// Star constants for a zig-zag window of order n, with e = 2^{4-n}:
/// A_n = (2 + e)/(1 - e), eta_n = (1 + e)/(1 - e) - 1, rho_n = (1 - e)/2 sqrt(D).
struct ZigZagStarConstants {
    double a;
    double eta;
    double rho_unit;  // rho_n / sqrt(D)
};
ZigZagStarConstants zigzag_star_constants(int n);

/// Center at window fraction 1/(4n), satellites at (2p+1)/(2n), p = 0..n-2,
/// rounded to the nearest grid index; verified under the tree metric with
/// (A_n, eta_n), first at rho_n and then with the verify_star sweep.
/// Throws InvalidArgument for n < 6 and ResolutionError for windows under 4n cells.
std::optional<StarCertificate> star_from_window(const TreeMetric& tm, const WindowMatch& wm);

/// Key points of a zig-zag window for the map construction.
struct ZigZagSkeleton {
    std::vector<std::size_t> x;  // x[0] root side, x[1..n-1] branch points
    std::vector<std::size_t> y;  // y[0..n-1] leaves
    double branch_scale = 0.0;   // max_k sqrt(|f(L_k)|)
};

ZigZagSkeleton zigzag_skeleton(const TreeMetric& tm, const WindowMatch& wm);

/// Star in the map metric with center x_1 and satellites y_0..y_{n-2},
/// sweeping (a, eta) over the bracket given by the branch-scale bounds.
/// Returns nullopt when wm.tol >= 2^{1-n}. Throws SubsetError if a needed
/// index is not a chain point of mm.
std::optional<StarCertificate> map_star_from_window(const TreeMetric& tm, const SnakeLabels& sl,
                                                    const MapMetric& mm, const WindowMatch& wm);

/// Heuristic: for each center, rings [rho, (1 + eta) rho] over candidate rho,
/// greedy selection of mutually compatible satellites. Incomplete by design.
std::optional<StarCertificate> generic_star_search(const Distance& d, std::span<const std::size_t> points,
                                                   std::size_t n, double a, double eta,
                                                   MetricKind kind = MetricKind::other);

}  // namespace starry
