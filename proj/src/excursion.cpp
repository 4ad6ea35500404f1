#include "starry/excursion.hpp"

#include <algorithm>
#include <cmath>

#include "starry/error.hpp"
#include "starry/rng.hpp"

namespace starry {

std::string Provenance::describe() const {
    switch (kind) {
        case Kind::brownian: return "brownian(seed=" + std::to_string(parameter) + ")";
        case Kind::zigzag: return "zigzag(n=" + std::to_string(parameter) + ")";
        case Kind::example51: return "example51";
        case Kind::file: return "file";
        case Kind::function: return "function";
    }
    return "unknown";
}

ExcursionGrid::ExcursionGrid(std::vector<double> values, Provenance provenance)
    : values_(std::move(values)), provenance_(provenance) {
    if (values_.size() < 3) throw InvalidArgument("excursion grid needs n_cells >= 2");
    if (values_.front() != 0.0) throw InvalidExcursion("excursion must start at 0", 0);
    if (values_.back() != 0.0) throw InvalidExcursion("excursion must end at 0", values_.size() - 1);
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
            throw InvalidExcursion("excursion value must be finite and nonnegative", i);
        }
    }
}

std::vector<double> sample_wiener(std::size_t n_cells, std::uint64_t seed) {
    if (n_cells < 2) throw InvalidArgument("sample_wiener: n_cells must be >= 2");
    const CounterRng rng(seed, kWienerStream);
    const double sd = std::sqrt(1.0 / static_cast<double>(n_cells));
    std::vector<double> w(n_cells + 1);
    w[0] = 0.0;
    for (std::size_t i = 0; i < n_cells; ++i) w[i + 1] = w[i] + sd * rng.gaussian(i);
    return w;
}

std::vector<double> bridge_from_wiener(std::span<const double> w) {
    if (w.size() < 2) throw InvalidArgument("bridge_from_wiener: need at least two samples");
    if (w[0] != 0.0) throw InvalidArgument("bridge_from_wiener: w[0] must be 0");
    const std::size_t n = w.size() - 1;
    const double end = w[n];
    std::vector<double> b(w.size());
    for (std::size_t i = 0; i <= n; ++i) {
        b[i] = w[i] - (static_cast<double>(i) / static_cast<double>(n)) * end;
    }
    b[n] = 0.0;
    return b;
}

ExcursionGrid vervaat_excursion(std::span<const double> bridge, Provenance provenance) {
    if (bridge.size() < 3) throw InvalidArgument("vervaat_excursion: n_cells must be >= 2");
    const std::size_t n = bridge.size() - 1;
    if (bridge[0] != 0.0 || bridge[n] != 0.0) {
        throw InvalidArgument("vervaat_excursion: bridge must vanish at both ends");
    }
    // first index attaining the minimum; b[n] == b[0] so scanning [0, n) suffices
    const std::size_t i_min = static_cast<std::size_t>(
        std::min_element(bridge.begin(), bridge.begin() + static_cast<std::ptrdiff_t>(n)) -
        bridge.begin());
    const double lift = bridge[i_min];
    std::vector<double> ex(n + 1);
    for (std::size_t j = 0; j <= n; ++j) ex[j] = bridge[(j + i_min) % n] - lift;
    return ExcursionGrid(std::move(ex), provenance);
}

ExcursionGrid brownian_excursion(std::size_t n_cells, std::uint64_t seed) {
    const auto w = sample_wiener(n_cells, seed);
    const auto b = bridge_from_wiener(w);
    return vervaat_excursion(b, {Provenance::Kind::brownian, seed});
}

double zigzag_eval(ZigZagParams p, double x) {
    if (p.n < 1) throw InvalidArgument("zigzag_eval: n must be >= 1");
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("zigzag_eval: x must lie in [0, 1]");
    const double n = p.n;
    const double y = 2.0 * n * x;  // breakpoints sit at the integers 1 .. 2n-1
    if (y < 1.0) return y;
    if (y >= 2.0 * n - 1.0) return 2.0 * n - y;
    const auto j = static_cast<long>(std::floor(y));
    if (j % 2 == 1) {
        // (2k+1)/(2n) <= x < (k+1)/n, value -n x + (2k+3)/2
        const double k = static_cast<double>((j - 1) / 2);
        return (2.0 * k + 3.0 - y) / 2.0;
    }
    // (k+1)/n <= x < (2k+3)/(2n), value n x - k - 1/2
    const double k = static_cast<double>((j - 2) / 2);
    return (y - 2.0 * k - 1.0) / 2.0;
}

double triangle_wave(double teeth, double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double u = teeth * x;
    const double frac = u - std::floor(u);
    return (frac < 0.5 ? 2.0 * frac : 2.0 * (1.0 - frac)) / teeth;
}

double Example51::a(int n) const { return 0.5 - std::ldexp(1.0, -(n + 1)); }

double Example51::b(int n) const { return a(n) + std::ldexp(1.0, -(n + 3)); }

double Example51::g1(double x) const {
    double removed = 0.0;
    for (int k = 1; k <= n_max; ++k) {
        const double lo = a(k);
        if (x <= lo) break;
        removed += std::min(x, b(k)) - lo;
    }
    return x - removed;
}

double Example51::g(double x) const {
    if (x < 0.5) return g1(x);
    const double half = g1(0.5);
    return -2.0 * half * x + 2.0 * half;
}

double Example51::s(double x) const {
    for (int k = 1; k <= n_max; ++k) {
        const double lo = a(k);
        const double hi = b(k);
        if (x < lo) break;
        if (x <= hi) {
            const double len = hi - lo;
            const double teeth = std::pow(static_cast<double>(k + 1), k);
            return len * triangle_wave(teeth, (x - lo) / len);
        }
    }
    return 0.0;
}

double example51_eval(double x, int n_max) {
    if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("example51_eval: x must lie in [0, 1]");
    if (n_max < 1) throw InvalidArgument("example51_eval: n_max must be >= 1");
    return Example51{n_max}(x);
}

ExcursionGrid grid_from_function(const RealFunction& f, std::size_t n_cells, Provenance provenance) {
    if (n_cells < 2) throw InvalidArgument("grid_from_function: n_cells must be >= 2");
    std::vector<double> values(n_cells + 1);
    for (std::size_t i = 0; i <= n_cells; ++i) {
        values[i] = f(static_cast<double>(i) / static_cast<double>(n_cells));
    }
    for (const std::size_t end : {std::size_t{0}, n_cells}) {
        if (std::abs(values[end]) >= 1e-12) {
            throw InvalidExcursion("excursion endpoint is not zero", end);
        }
        values[end] = 0.0;
    }
    for (std::size_t i = 1; i < n_cells; ++i) {
        if (!(values[i] >= 0.0)) throw InvalidExcursion("negative excursion sample", i);
    }
    return ExcursionGrid(std::move(values), provenance);
}

ExcursionGrid zigzag_grid(int n, std::size_t n_cells) {
    return grid_from_function([n](double x) { return zigzag_eval({n}, x); }, n_cells,
                              {Provenance::Kind::zigzag, static_cast<std::uint64_t>(n)});
}

ExcursionGrid example51_grid(std::size_t n_cells, int n_max) {
    return grid_from_function([n_max](double x) { return example51_eval(x, n_max); }, n_cells,
                              {Provenance::Kind::example51, 0});
}

}  // namespace starry
