#include "starry/stars.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

#include "starry/error.hpp"
#include "starry/parallel.hpp"

namespace starry {

std::string_view to_string(MetricKind kind) noexcept {
    switch (kind) {
        case MetricKind::tree: return "tree";
        case MetricKind::map: return "map";
        case MetricKind::other: return "other";
    }
    return "other";
}

void check_star_parameters(double a, double eta) {
    if (!(a > 1.0)) throw InvalidArgument("star parameter a must exceed 1");
    if (!(eta > 0.0) || !(eta < (a - 1.0) / 2.0)) {
        throw InvalidArgument("star parameter eta must satisfy 0 < eta < (a - 1) / 2");
    }
}

namespace {

struct StarDistances {
    std::vector<double> center;
    std::vector<std::vector<double>> pairs;
};

StarDistances measure(const Distance& d, std::size_t center, std::span<const std::size_t> sats) {
    StarDistances out;
    const std::size_t n = sats.size();
    out.center.resize(n);
    out.pairs.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) out.center[i] = d(center, sats[i]);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            out.pairs[i][j] = out.pairs[j][i] = d(sats[i], sats[j]);
        }
    }
    return out;
}

bool holds(const StarDistances& sd, double a, double eta, double rho) {
    if (!(rho > 0.0)) return false;
    for (const double c : sd.center) {
        if (c < rho || c > (1.0 + eta) * rho) return false;
    }
    const std::size_t n = sd.center.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double p = sd.pairs[i][j];
            if (p < (a - eta) * rho || p > a * rho) return false;
        }
    }
    return true;
}

void check_points(std::size_t center, std::span<const std::size_t> sats) {
    if (sats.size() < 2) throw InvalidArgument("a star needs at least two satellites");
    std::set<std::size_t> seen{center};
    for (const auto s : sats) {
        if (!seen.insert(s).second) throw InvalidArgument("star points must be distinct");
    }
}

StarCertificate make_certificate(MetricKind kind, std::size_t center, std::span<const std::size_t> sats,
                                 double a, double eta, double rho, StarDistances sd) {
    StarCertificate cert;
    cert.metric = kind;
    cert.center = center;
    cert.satellites.assign(sats.begin(), sats.end());
    cert.a = a;
    cert.eta = eta;
    cert.rho = rho;
    cert.center_distances = std::move(sd.center);
    cert.pair_distances = std::move(sd.pairs);
    return cert;
}

}  // namespace

std::optional<StarCertificate> verify_star_at(const Distance& d, std::size_t center,
                                              std::span<const std::size_t> satellites, double a,
                                              double eta, double rho, MetricKind kind) {
    check_points(center, satellites);
    check_star_parameters(a, eta);
    auto sd = measure(d, center, satellites);
    if (!holds(sd, a, eta, rho)) return std::nullopt;
    return make_certificate(kind, center, satellites, a, eta, rho, std::move(sd));
}

std::optional<StarCertificate> verify_star(const Distance& d, std::size_t center,
                                           std::span<const std::size_t> satellites, double a,
                                           double eta, MetricKind kind) {
    check_points(center, satellites);
    check_star_parameters(a, eta);
    auto sd = measure(d, center, satellites);
    const auto [lo_it, hi_it] = std::minmax_element(sd.center.begin(), sd.center.end());
    const double min_c = *lo_it;
    const double lo = *hi_it / (1.0 + eta);

    std::vector<double> candidates{min_c};
    if (lo <= min_c) {
        constexpr int kSweep = 8;
        for (int k = 0; k < kSweep; ++k) {
            candidates.push_back(lo + (min_c - lo) * static_cast<double>(k) / (kSweep - 1));
        }
    }
    for (const double rho : candidates) {
        if (holds(sd, a, eta, rho)) {
            return make_certificate(kind, center, satellites, a, eta, rho, std::move(sd));
        }
    }
    return std::nullopt;
}

double window_tolerance(int n) { return std::ldexp(1.0, 1 - n); }

namespace {

// tol of a window, abandoning the scan once it reaches `cutoff`.
double deviation(std::span<const double> f, std::size_t n_cells, int n, std::size_t start,
                 std::size_t cells, double cutoff) {
    const double delta = static_cast<double>(cells) / static_cast<double>(n_cells);
    const double root = std::sqrt(delta);
    const double base = f[start];
    const double inv_cells = 1.0 / static_cast<double>(cells);
    double worst = 0.0;
    for (std::size_t j = 0; j <= cells; ++j) {
        const double x = static_cast<double>(j) * inv_cells;
        const double dev = std::abs(f[start + j] - base - root * zigzag_eval({n}, x)) / root;
        worst = std::max(worst, dev);
        if (worst >= cutoff) return worst;
    }
    return worst;
}

std::vector<WindowMatch> select_disjoint(std::vector<WindowMatch> matches) {
    std::sort(matches.begin(), matches.end(), [](const WindowMatch& l, const WindowMatch& r) {
        return l.t_idx != r.t_idx ? l.t_idx < r.t_idx : l.s_idx < r.s_idx;
    });
    std::vector<WindowMatch> out;
    for (const auto& m : matches) {
        if (out.empty() || m.s_idx > out.back().t_idx) out.push_back(m);
    }
    return out;
}

std::vector<WindowMatch> evaluate(const ExcursionGrid& grid, int n,
                                  std::span<const std::pair<std::size_t, std::size_t>> windows,
                                  unsigned threads) {
    const double threshold = window_tolerance(n);
    std::vector<double> tol(windows.size());
    const auto f = grid.values();
    parallel_for(windows.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t w = begin; w < end; ++w) {
            tol[w] = deviation(f, grid.n_cells(), n, windows[w].first, windows[w].second, threshold);
        }
    });
    std::vector<WindowMatch> matches;
    for (std::size_t w = 0; w < windows.size(); ++w) {
        if (tol[w] < threshold) {
            matches.push_back({n, windows[w].first, windows[w].first + windows[w].second, tol[w]});
        }
    }
    return select_disjoint(std::move(matches));
}

}  // namespace

double window_deviation(const ExcursionGrid& grid, int n, std::size_t start, std::size_t cells) {
    if (cells == 0 || start + cells > grid.n_cells()) throw InvalidArgument("window outside grid");
    return deviation(grid.values(), grid.n_cells(), n, start, cells, std::numeric_limits<double>::infinity());
}

std::vector<WindowMatch> scan_windows(const ExcursionGrid& grid, int n,
                                      std::span<const std::size_t> window_lengths, unsigned threads) {
    if (n < 2) throw InvalidArgument("scan_windows: n must be >= 2");
    std::vector<std::pair<std::size_t, std::size_t>> windows;
    for (const std::size_t len : window_lengths) {
        if (len > grid.n_cells()) throw InvalidArgument("scan_windows: window longer than grid");
        if (!std::has_single_bit(len)) throw InvalidArgument("scan_windows: window length must be dyadic");
        if (len < 4 * static_cast<std::size_t>(n)) {
            throw InvalidArgument("scan_windows: window length must be at least 4n cells");
        }
        const std::size_t stride = std::max<std::size_t>(1, len / 4);
        for (std::size_t s = 0; s + len <= grid.n_cells(); s += stride) windows.emplace_back(s, len);
    }
    return evaluate(grid, n, windows, threads);
}

std::vector<WindowMatch> scan_fixed_windows(const ExcursionGrid& grid, int n,
                                            std::span<const std::pair<std::size_t, std::size_t>> windows,
                                            unsigned threads) {
    if (n < 2) throw InvalidArgument("scan_fixed_windows: n must be >= 2");
    for (const auto& [s, len] : windows) {
        if (len == 0 || s + len > grid.n_cells()) throw InvalidArgument("scan_fixed_windows: window outside grid");
    }
    return evaluate(grid, n, windows, threads);
}

std::vector<std::size_t> dyadic_lengths(unsigned lo_exp, unsigned hi_exp) {
    std::vector<std::size_t> out;
    for (unsigned e = lo_exp; e <= hi_exp; ++e) out.push_back(std::size_t{1} << e);
    return out;
}

std::pair<double, double> ank_interval(int n, int k) {
    if (n < 1 || k < 1) throw InvalidArgument("A_n^k is defined for n, k >= 1");
    const double start = 0.75 - std::ldexp(std::ldexp(1.0, k - 1) + 1.0, -(n + k + 1));
    return {start, start + std::ldexp(1.0, -(n + k + 2))};
}

std::vector<std::pair<std::size_t, std::size_t>> ank_windows(int n, std::size_t n_cells) {
    if (!std::has_single_bit(n_cells)) throw InvalidArgument("ank_windows: grid must be dyadic");
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const double cells = static_cast<double>(n_cells);
    for (int k = 1;; ++k) {
        const auto [lo, hi] = ank_interval(n, k);
        const double len = (hi - lo) * cells;
        if (len < 4.0 * n) break;
        out.emplace_back(static_cast<std::size_t>(lo * cells), static_cast<std::size_t>(len));
    }
    return out;
}

ZigZagStarConstants zigzag_star_constants(int n) {
    const double e = std::ldexp(1.0, 4 - n);
    return {(2.0 + e) / (1.0 - e), (1.0 + e) / (1.0 - e) - 1.0, (1.0 - e) / 2.0};
}

namespace {

// s + round(cells * num / den), exact in integers
std::size_t window_point(const WindowMatch& wm, std::size_t num, std::size_t den) {
    return wm.s_idx + (wm.cells() * num * 2 + den) / (2 * den);
}

}  // namespace

std::optional<StarCertificate> star_from_window(const TreeMetric& tm, const WindowMatch& wm) {
    const int n = wm.n;
    if (n < 6) throw InvalidArgument("star_from_window needs zig-zag order n >= 6");
    if (wm.t_idx <= wm.s_idx || wm.t_idx > tm.n_cells()) throw InvalidArgument("window outside grid");
    if (wm.cells() < 4 * static_cast<std::size_t>(n)) {
        throw ResolutionError("window has fewer than 4n cells");
    }
    const auto nn = static_cast<std::size_t>(n);
    const std::size_t center = window_point(wm, 1, 4 * nn);
    std::vector<std::size_t> sats;
    for (std::size_t p = 0; p + 2 <= nn; ++p) sats.push_back(window_point(wm, 2 * p + 1, 2 * nn));

    const auto k = zigzag_star_constants(n);
    const double delta = static_cast<double>(wm.cells()) / static_cast<double>(tm.n_cells());
    const Distance d = [&tm](std::size_t i, std::size_t j) { return tm.dist(i, j); };
    if (auto cert = verify_star_at(d, center, sats, k.a, k.eta, k.rho_unit * std::sqrt(delta))) return cert;
    return verify_star(d, center, sats, k.a, k.eta);
}

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

std::size_t argmax_in(std::span<const double> f, std::size_t lo, std::size_t hi) {
    std::size_t best = lo;
    for (std::size_t j = lo + 1; j <= hi; ++j) {
        if (f[j] > f[best]) best = j;
    }
    return best;
}

}  // namespace

ZigZagSkeleton zigzag_skeleton(const TreeMetric& tm, const WindowMatch& wm) {
    const auto nn = static_cast<std::size_t>(wm.n);
    const std::size_t s = wm.s_idx;
    const std::size_t cells = wm.cells();
    if (wm.n < 2 || cells < 4 * nn || wm.t_idx > tm.n_cells()) {
        throw ResolutionError("window too coarse for a zig-zag skeleton");
    }
    const auto f = tm.grid().values();
    ZigZagSkeleton sk;
    sk.x.resize(nn);
    sk.y.resize(nn);

    // root side: the end sub-window whose minimum is larger
    const std::size_t head = s + cells / (2 * nn);
    const std::size_t tail = s + ceil_div((2 * nn - 1) * cells, 2 * nn);
    const std::size_t a1 = tm.interval_argmin(s, head);
    const std::size_t a2 = tm.interval_argmin(tail, wm.t_idx);
    sk.x[0] = f[a2] > f[a1] ? a2 : a1;
    for (std::size_t p = 1; p < nn; ++p) {
        const std::size_t lo = s + ceil_div((2 * p - 1) * cells, 2 * nn);
        const std::size_t hi = s + (2 * p + 1) * cells / (2 * nn);
        sk.x[p] = tm.interval_argmin(lo, hi);
    }
    for (std::size_t p = 0; p < nn; ++p) {
        const std::size_t lo = s + ceil_div(p * cells, nn);
        const std::size_t hi = s + (p + 1) * cells / nn;
        sk.y[p] = argmax_in(f, lo, hi);
    }
    double scale = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
        const std::size_t next = i + 1 < nn ? sk.x[i + 1] : sk.x[0];
        const double len = f[sk.y[i]] - std::max(f[sk.x[i]], f[next]);
        scale = std::max(scale, std::sqrt(std::max(0.0, len)));
    }
    sk.branch_scale = scale;
    return sk;
}

std::optional<StarCertificate> map_star_from_window(const TreeMetric& tm, const SnakeLabels& sl,
                                                    const MapMetric& mm, const WindowMatch& wm) {
    if (sl.n_cells() != tm.n_cells()) throw InvalidArgument("labels and tree metric use different grids");
    if (!(wm.tol < window_tolerance(wm.n))) return std::nullopt;
    const auto sk = zigzag_skeleton(tm, wm);
    const std::size_t center = sk.x[1];
    std::vector<std::size_t> sats(sk.y.begin(), sk.y.end() - 1);
    if (mm.position_of(center) < 0) throw SubsetError("star center is not a chain point");
    for (const auto y : sats) {
        if (mm.position_of(y) < 0) throw SubsetError("star satellite is not a chain point");
    }
    std::set<std::size_t> distinct(sats.begin(), sats.end());
    distinct.insert(center);
    if (distinct.size() != sats.size() + 1) return std::nullopt;

    const double e = std::ldexp(1.0, -wm.n);
    const double a_lo = std::max(1.0 + 1e-9, (2.0 - 16.0 * e) / (1.0 + 6.0 * e));
    const double a_hi = 1.0 - 6.0 * e > 0.0 ? (2.0 + 16.0 * e) / (1.0 - 6.0 * e) : 5.0;
    const double eta_lo = 1.0 - 6.0 * e > 0.0 ? (1.0 + 6.0 * e) / (1.0 - 6.0 * e) - 1.0 : 1e-3;

    std::vector<double> a_grid{2.0};
    constexpr int kSteps = 9;
    for (int k = 0; k < kSteps; ++k) a_grid.push_back(a_lo + (a_hi - a_lo) * k / (kSteps - 1));

    const Distance d = [&mm](std::size_t i, std::size_t j) { return mm.d_map(i, j); };
    constexpr int kEtaSteps = 8;
    for (int k = 0; k < kEtaSteps; ++k) {
        for (const double a : a_grid) {
            const double cap = (a - 1.0) / 2.0 * (1.0 - 1e-9);
            const double lo = std::min(eta_lo, cap);
            const double eta = lo + (cap - lo) * k / (kEtaSteps - 1);
            if (!(eta > 0.0) || !(eta < (a - 1.0) / 2.0)) continue;
            if (auto cert = verify_star(d, center, sats, a, eta, MetricKind::map)) return cert;
        }
    }
    return std::nullopt;
}

std::optional<StarCertificate> generic_star_search(const Distance& d, std::span<const std::size_t> points,
                                                   std::size_t n, double a, double eta, MetricKind kind) {
    check_star_parameters(a, eta);
    if (n < 2) throw InvalidArgument("generic_star_search: n must be >= 2");
    if (points.size() < n + 1) return std::nullopt;

    struct Near {
        double dist;
        std::size_t id;
    };
    for (const std::size_t c : points) {
        std::vector<Near> near;
        for (const std::size_t p : points) {
            if (p == c) continue;
            const double dc = d(c, p);
            if (dc > 0.0) near.push_back({dc, p});
        }
        if (near.size() < n) continue;
        std::sort(near.begin(), near.end(),
                  [](const Near& l, const Near& r) { return l.dist != r.dist ? l.dist < r.dist : l.id < r.id; });
        std::vector<double> rhos;
        for (const auto& q : near) {
            rhos.push_back(q.dist);
            rhos.push_back(q.dist / (1.0 + eta));
        }
        std::sort(rhos.begin(), rhos.end());
        rhos.erase(std::unique(rhos.begin(), rhos.end()), rhos.end());

        for (const double rho : rhos) {
            std::vector<std::size_t> chosen;
            for (const auto& q : near) {
                if (q.dist < rho) continue;
                if (q.dist > (1.0 + eta) * rho) break;
                bool ok = true;
                for (const auto other : chosen) {
                    const double pd = d(q.id, other);
                    if (pd < (a - eta) * rho || pd > a * rho) {
                        ok = false;
                        break;
                    }
                }
                if (ok) chosen.push_back(q.id);
                if (chosen.size() == n) break;
            }
            if (chosen.size() == n) {
                if (auto cert = verify_star_at(d, c, chosen, a, eta, rho, kind)) return cert;
            }
        }
    }
    return std::nullopt;
}

}  // namespace starry
