#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "starry/metric.hpp"
#include "starry/stars.hpp"

namespace starry {

/// Greedy cover of B(center, R) = {p : d(center, p) <= R} by balls of radius
/// r/2 (diameter <= r) centered at still-uncovered points, each time taking
/// the ball that covers the most uncovered points (ties: earliest in
/// `points`). Chosen centers are pairwise more than r/2 apart, so the count
/// lies between the minimal diameter-r cover and the minimal diameter-r/2 cover.
std::size_t covering_number(std::span<const std::size_t> points, const Distance& d, std::size_t center,
                            double R, double r);

/// Same greedy with ball radius r/2 over B(center, r).
std::size_t half_radius_cover(std::span<const std::size_t> points, const Distance& d, std::size_t center,
                              double r);

struct ScalePair {
    double R = 0.0;
    double r = 0.0;
};

struct CoverSample {
    std::size_t center = 0;
    double R = 0.0;
    double r = 0.0;
    std::size_t N = 0;

    /// log N / log(R / r)
    double exponent() const;
};

struct PairSummary {
    ScalePair scale;
    std::size_t sup_N = 0;
    std::size_t argsup_center = 0;
    double exponent = 0.0;  // log sup_N / log(R / r)
};

struct AssouadReport {
    std::vector<CoverSample> samples;  // pair-major, then center order
    std::vector<PairSummary> pairs;    // in the order given
    double fitted_alpha = 0.0;
    double fitted_C = 1.0;
    /// The second half of the per-pair exponents never decreases, rises overall
    /// and ends at the maximum: evidence that no single exponent bounds the covers.
    bool nonconvergent = false;
};

/// Sup over `centers` of covering_number for every scale pair, then a
/// least-squares fit log N = log C + alpha log(R/r) for C followed by
/// fitted_alpha = max over pairs of (log N - log C) / log(R/r), floored at 0.
/// When all ratios coincide the fit is degenerate and C = 1.
/// Needs at least 10 pairs, 0 < r < R each, and max R / min r >= 100.
AssouadReport assouad_estimate(std::span<const std::size_t> points, const Distance& d,
                               std::span<const ScalePair> scale_pairs,
                               std::span<const std::size_t> centers, unsigned threads = 1);

struct CounterexamplePoint {
    int n = 1;
    int m = 1;
};

/// Countable space on N x N:
///   0               if (n, m) == (n', m')
///   0               if n == n', min(m, m') == 1 and max(m, m') > n
///   0               if n == n' and min(m, m') > n
///   2^{-n}          if n == n' otherwise
///   2 sum_{k=min(n,n')}^{max(n,n')} k^{-2}   if n != n'
double counterexample_distance(CounterexamplePoint p, CounterexamplePoint q);

/// All (n, m) with 1 <= n <= n_max and 1 <= m <= m_max, n-major.
std::vector<CounterexamplePoint> counterexample_points(int n_max, int m_max);

/// Distinct quotient representatives (n, m), 1 <= m <= n <= n_max.
std::vector<CounterexamplePoint> counterexample_quotient(int n_max);

/// Distance oracle over indices into `pts`; keeps a reference.
Distance counterexample_oracle(const std::vector<CounterexamplePoint>& pts);

/// Increasing gauge Psi of a quasisymmetric map.
class QSProfile {
public:
    static QSProfile linear();
    static QSProfile power(double exponent);
    /// Piecewise linear through (t, psi) knots sorted by t, constant beyond the ends.
    static QSProfile table(std::vector<std::pair<double, double>> knots);
    /// Parses "linear", "power:<p>" or "table:t1=v1,t2=v2,...".
    static QSProfile parse(const std::string& spec);

    double operator()(double t) const { return fn_(t); }
    const std::string& name() const noexcept { return name_; }

private:
    QSProfile(std::string name, std::function<double(double)> fn) : name_(std::move(name)), fn_(std::move(fn)) {}

    std::string name_;
    std::function<double(double)> fn_;
};

struct QSVerdict {
    bool contradicts = false;
    std::size_t n = 0;
    double threshold = 0.0;  // C (4 psi(1) psi(1 + eta))^s
    double psi1 = 0.0;
    double psi1eta = 0.0;
    double eta = 0.0;
    double C = 0.0;
    double s = 0.0;
    std::size_t required_n = 0;  // floor(threshold) + 1

    std::string label() const { return contradicts ? "CONTRADICTS" : "INSUFFICIENT"; }
};

/// A star with n > C (4 psi(1) psi(1 + eta))^s satellites rules out any
/// psi-quasisymmetric image satisfying the Assouad bound N <= C (R/r)^s.
/// Throws InvalidProfile when psi is not positive and nondecreasing on {1, 1 + eta}.
QSVerdict qs_obstruction(const StarCertificate& star, const QSProfile& psi, double c, double s);
QSVerdict qs_obstruction(std::size_t n, double eta, const QSProfile& psi, double c, double s);

using Rational = boost::multiprecision::cpp_rational;

/// Exact threshold C (4 psi1 psi1eta)^s for rational inputs.
Rational qs_threshold_exact(const Rational& psi1, const Rational& psi1eta, const Rational& c, unsigned s);
/// n > threshold, decided exactly.
bool qs_contradicts_exact(std::size_t n, const Rational& threshold);

struct DoublingProbe {
    std::size_t max_count = 0;
    std::size_t center = 0;
    double r = 0.0;
};

/// Random (center, r) draws, r taken among the distinct positive distances
/// from the center; records the largest half_radius_cover.
DoublingProbe doubling_probe(std::span<const std::size_t> points, const Distance& d, std::size_t trials,
                             std::uint64_t seed = 0);

}  // namespace starry
