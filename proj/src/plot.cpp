#include "starry/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <vector>

namespace starry {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 300.0;
constexpr double kMargin = 20.0;
constexpr std::size_t kMaxVertices = 4096;

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string plot_excursion(const ExcursionGrid& grid, const std::optional<StarOverlay>& overlay) {
    const std::size_t n = grid.n_cells();
    const auto f = grid.values();
    const double top = std::max(*std::max_element(f.begin(), f.end()), 1e-300);
    auto px = [&](std::size_t i) { return kMargin + kWidth * grid.t(i); };
    auto py = [&](double v) { return kMargin + kHeight * (1.0 - v / top); };

    std::vector<std::size_t> vertices;
    if (n + 1 <= kMaxVertices) {
        for (std::size_t i = 0; i <= n; ++i) vertices.push_back(i);
    } else {
        const std::size_t buckets = kMaxVertices / 2;
        for (std::size_t b = 0; b < buckets; ++b) {
            const std::size_t lo = b * (n + 1) / buckets;
            const std::size_t hi = (b + 1) * (n + 1) / buckets;
            const auto first = f.begin() + static_cast<std::ptrdiff_t>(lo);
            const auto last = f.begin() + static_cast<std::ptrdiff_t>(hi);
            const auto lo_it = static_cast<std::size_t>(std::min_element(first, last) - f.begin());
            const auto hi_it = static_cast<std::size_t>(std::max_element(first, last) - f.begin());
            vertices.push_back(std::min(lo_it, hi_it));
            if (lo_it != hi_it) vertices.push_back(std::max(lo_it, hi_it));
        }
        if (vertices.back() != n) vertices.push_back(n);
    }

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth + 2 * kMargin) << "\" height=\""
        << fixed(kHeight + 2 * kMargin) << "\" viewBox=\"0 0 " << fixed(kWidth + 2 * kMargin) << ' '
        << fixed(kHeight + 2 * kMargin) << "\">\n"
        << "<title>" << grid.provenance().describe() << ", n_cells=" << n << "</title>\n"
        << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (overlay && overlay->window) {
        const auto& w = *overlay->window;
        svg << "<rect class=\"window\" x=\"" << fixed(px(w.s_idx)) << "\" y=\"" << fixed(kMargin) << "\" width=\""
            << fixed(px(w.t_idx) - px(w.s_idx)) << "\" height=\"" << fixed(kHeight)
            << "\" fill=\"#ffe9a8\" stroke=\"none\"/>\n";
    }
    svg << "<polyline class=\"excursion\" fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
    for (std::size_t k = 0; k < vertices.size(); ++k) {
        const std::size_t i = vertices[k];
        svg << (k ? " " : "") << fixed(px(i)) << ',' << fixed(py(f[i]));
    }
    svg << "\"/>\n";
    if (overlay) {
        const auto& s = overlay->star;
        for (const auto i : s.satellites) {
            svg << "<circle class=\"satellite\" cx=\"" << fixed(px(i)) << "\" cy=\"" << fixed(py(f[i]))
                << "\" r=\"3\" fill=\"blue\"/>\n";
        }
        svg << "<circle class=\"center\" cx=\"" << fixed(px(s.center)) << "\" cy=\"" << fixed(py(f[s.center]))
            << "\" r=\"4\" fill=\"red\"/>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace starry
