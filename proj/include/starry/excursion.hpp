#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace starry {

struct Provenance {
    enum class Kind { brownian, zigzag, example51, file, function };

    Kind kind = Kind::function;
    std::uint64_t parameter = 0;  // seed for brownian, n for zigzag

    std::string describe() const;
};

/// Nonnegative path sampled at t_i = i / n_cells, zero at both ends.
class ExcursionGrid {
public:
    /// Validates the excursion invariants; throws InvalidExcursion or InvalidArgument.
    ExcursionGrid(std::vector<double> values, Provenance provenance);

    std::size_t n_cells() const noexcept { return values_.size() - 1; }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double t(std::size_t i) const noexcept {
        return static_cast<double>(i) / static_cast<double>(n_cells());
    }
    const Provenance& provenance() const noexcept { return provenance_; }

private:
    std::vector<double> values_;
    Provenance provenance_;
};

/// Wiener path W[0..n_cells] with W[0] = 0 and Gaussian(0, 1/n_cells)
/// increments; increment i uses CounterRng(seed, kWienerStream).gaussian(i).
std::vector<double> sample_wiener(std::size_t n_cells, std::uint64_t seed);

/// B[i] = w[i] - (i / n_cells) * w[n_cells].
std::vector<double> bridge_from_wiener(std::span<const double> w);

/// Cyclic shift of a bridge at its first minimum, lifted so the minimum is 0.
ExcursionGrid vervaat_excursion(std::span<const double> bridge, Provenance provenance = {});

/// sample_wiener -> bridge_from_wiener -> vervaat_excursion.
ExcursionGrid brownian_excursion(std::size_t n_cells, std::uint64_t seed);

struct ZigZagParams {
    int n = 1;  // number of peaks
};

/// The zig-zag excursion F_n: peaks of height 1 at (2k+1)/(2n), valleys of
/// height 1/2 at (k+1)/n.
double zigzag_eval(ZigZagParams p, double x);

/// Triangle wave with slope 2 and `teeth` maxima on [0, 1], zero at both ends.
double triangle_wave(double teeth, double x);

struct Example51 {
    int n_max = 20;

    double a(int n) const;  // 1/2 - 2^{-(n+1)}
    double b(int n) const;  // a(n) + 2^{-(n+3)}

    /// Total length of the first n_max intervals [a_k, b_k] meeting [0, x],
    /// subtracted from x.
    double g1(double x) const;
    double g(double x) const;
    double s(double x) const;
    double operator()(double x) const { return g(x) + s(x); }
};

/// g(x) + s(x) truncated after n_max intervals.
double example51_eval(double x, int n_max = 20);

using RealFunction = std::function<double(double)>;

/// Samples f at t_i = i / n_cells. Endpoint samples within 1e-12 of zero are clamped.
ExcursionGrid grid_from_function(const RealFunction& f, std::size_t n_cells,
                                 Provenance provenance = {});

ExcursionGrid zigzag_grid(int n, std::size_t n_cells);
ExcursionGrid example51_grid(std::size_t n_cells, int n_max = 20);

}  // namespace starry
