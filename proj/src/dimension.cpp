#include "starry/dimension.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "starry/error.hpp"
#include "starry/parallel.hpp"
#include "starry/rng.hpp"

namespace starry {

namespace {

std::size_t greedy_cover(const std::vector<std::size_t>& ball, const Distance& d, double radius) {
    const std::size_t b = ball.size();
    if (b == 0) return 0;
    std::vector<std::vector<std::uint32_t>> nbr(b);
    for (std::size_t u = 0; u < b; ++u) {
        for (std::size_t v = u + 1; v < b; ++v) {
            if (d(ball[u], ball[v]) <= radius) {
                nbr[u].push_back(static_cast<std::uint32_t>(v));
                nbr[v].push_back(static_cast<std::uint32_t>(u));
            }
        }
    }
    std::vector<std::size_t> gain(b);
    for (std::size_t u = 0; u < b; ++u) gain[u] = nbr[u].size() + 1;
    std::vector<char> covered(b, 0);
    std::size_t remaining = b;
    std::size_t count = 0;

    auto cover = [&](std::size_t v) {
        if (covered[v]) return;
        covered[v] = 1;
        --remaining;
        --gain[v];
        for (const auto w : nbr[v]) --gain[w];
    };
    while (remaining > 0) {
        std::size_t best = b;
        for (std::size_t u = 0; u < b; ++u) {
            if (!covered[u] && (best == b || gain[u] > gain[best])) best = u;
        }
        ++count;
        cover(best);
        for (const auto w : nbr[best]) cover(w);
    }
    return count;
}

std::vector<std::size_t> ball_of(std::span<const std::size_t> points, const Distance& d, std::size_t center,
                                 double R) {
    std::vector<std::size_t> ball;
    for (const auto p : points) {
        if (d(center, p) <= R) ball.push_back(p);
    }
    return ball;
}

}  // namespace

std::size_t covering_number(std::span<const std::size_t> points, const Distance& d, std::size_t center,
                            double R, double r) {
    if (!(r > 0.0) || !(r < R)) throw InvalidArgument("covering_number needs 0 < r < R");
    if (points.empty()) throw InvalidArgument("covering_number needs a nonempty point set");
    return std::max<std::size_t>(1, greedy_cover(ball_of(points, d, center, R), d, r / 2.0));
}

std::size_t half_radius_cover(std::span<const std::size_t> points, const Distance& d, std::size_t center,
                              double r) {
    if (points.empty()) throw InvalidArgument("half_radius_cover needs a nonempty point set");
    return std::max<std::size_t>(1, greedy_cover(ball_of(points, d, center, r), d, r / 2.0));
}

double CoverSample::exponent() const { return std::log(static_cast<double>(N)) / std::log(R / r); }

AssouadReport assouad_estimate(std::span<const std::size_t> points, const Distance& d,
                               std::span<const ScalePair> scale_pairs,
                               std::span<const std::size_t> centers, unsigned threads) {
    if (scale_pairs.size() < 10) throw InvalidArgument("assouad_estimate needs at least 10 scale pairs");
    if (points.empty() || centers.empty()) throw InvalidArgument("assouad_estimate needs points and centers");
    double max_R = 0.0;
    double min_r = std::numeric_limits<double>::infinity();
    for (const auto& sp : scale_pairs) {
        if (!(sp.r > 0.0) || !(sp.r < sp.R)) throw InvalidArgument("scale pairs need 0 < r < R");
        max_R = std::max(max_R, sp.R);
        min_r = std::min(min_r, sp.r);
    }
    if (max_R / min_r < 100.0) throw InvalidArgument("scale pairs must span at least two decades");

    AssouadReport report;
    const std::size_t per_pair = centers.size();
    report.samples.resize(scale_pairs.size() * per_pair);
    parallel_for(report.samples.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            const auto& sp = scale_pairs[k / per_pair];
            const std::size_t c = centers[k % per_pair];
            report.samples[k] = {c, sp.R, sp.r, covering_number(points, d, c, sp.R, sp.r)};
        }
    });

    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t p = 0; p < scale_pairs.size(); ++p) {
        PairSummary summary;
        summary.scale = scale_pairs[p];
        for (std::size_t c = 0; c < per_pair; ++c) {
            const auto& s = report.samples[p * per_pair + c];
            if (s.N > summary.sup_N) {
                summary.sup_N = s.N;
                summary.argsup_center = s.center;
            }
        }
        const double x = std::log(summary.scale.R / summary.scale.r);
        const double y = std::log(static_cast<double>(summary.sup_N));
        summary.exponent = y / x;
        xs.push_back(x);
        ys.push_back(y);
        report.pairs.push_back(summary);
    }

    const double k = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    double log_c = 0.0;
    if (sxx > 1e-12 * k) log_c = my - (sxy / sxx) * mx;
    report.fitted_C = std::exp(log_c);
    double alpha = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) alpha = std::max(alpha, (ys[i] - log_c) / xs[i]);
    report.fitted_alpha = alpha;

    const std::size_t total = report.pairs.size();
    const std::size_t from = total / 2;
    // a truncated space can tie at its last scale, so growth is nondecreasing with net rise
    bool growing = total >= 2;
    for (std::size_t i = from + 1; i < total; ++i) {
        if (report.pairs[i].exponent < report.pairs[i - 1].exponent) growing = false;
    }
    growing = growing && report.pairs.back().exponent > report.pairs[from].exponent;
    double max_exp = 0.0;
    for (const auto& p : report.pairs) max_exp = std::max(max_exp, p.exponent);
    report.nonconvergent = growing && report.pairs.back().exponent >= max_exp && max_exp > 0.0;
    return report;
}

double counterexample_distance(CounterexamplePoint p, CounterexamplePoint q) {
    if (p.n < 1 || p.m < 1 || q.n < 1 || q.m < 1) throw InvalidArgument("counterexample points are in N x N");
    if (p.n == q.n) {
        const int n = p.n;
        const int lo = std::min(p.m, q.m);
        const int hi = std::max(p.m, q.m);
        if (lo == hi) return 0.0;
        if (lo == 1 && hi > n) return 0.0;
        if (lo > n) return 0.0;
        return std::ldexp(1.0, -n);
    }
    long double sum = 0.0L;
    const int lo = std::min(p.n, q.n);
    const int hi = std::max(p.n, q.n);
    for (int k = hi; k >= lo; --k) sum += 1.0L / (static_cast<long double>(k) * k);
    return static_cast<double>(2.0L * sum);
}

std::vector<CounterexamplePoint> counterexample_points(int n_max, int m_max) {
    std::vector<CounterexamplePoint> out;
    for (int n = 1; n <= n_max; ++n) {
        for (int m = 1; m <= m_max; ++m) out.push_back({n, m});
    }
    return out;
}

std::vector<CounterexamplePoint> counterexample_quotient(int n_max) {
    std::vector<CounterexamplePoint> out;
    for (int n = 1; n <= n_max; ++n) {
        for (int m = 1; m <= n; ++m) out.push_back({n, m});
    }
    return out;
}

Distance counterexample_oracle(const std::vector<CounterexamplePoint>& pts) {
    return [&pts](std::size_t i, std::size_t j) { return counterexample_distance(pts.at(i), pts.at(j)); };
}

QSProfile QSProfile::linear() {
    return QSProfile("linear", [](double t) { return t; });
}

QSProfile QSProfile::power(double exponent) {
    if (!(exponent > 0.0)) throw InvalidProfile("power profile needs a positive exponent");
    std::ostringstream name;
    name << "power:" << exponent;
    return QSProfile(name.str(), [exponent](double t) { return std::pow(t, exponent); });
}

QSProfile QSProfile::table(std::vector<std::pair<double, double>> knots) {
    if (knots.empty()) throw InvalidProfile("table profile needs at least one knot");
    std::sort(knots.begin(), knots.end());
    std::ostringstream name;
    name << "table:";
    for (std::size_t i = 0; i < knots.size(); ++i) {
        name << (i ? "," : "") << knots[i].first << '=' << knots[i].second;
    }
    return QSProfile(name.str(), [knots = std::move(knots)](double t) {
        if (t <= knots.front().first) return knots.front().second;
        if (t >= knots.back().first) return knots.back().second;
        const auto hi = std::upper_bound(knots.begin(), knots.end(), std::make_pair(t, -HUGE_VAL));
        const auto lo = hi - 1;
        const double w = (t - lo->first) / (hi->first - lo->first);
        return lo->second + w * (hi->second - lo->second);
    });
}

QSProfile QSProfile::parse(const std::string& spec) {
    auto number = [](const std::string& text) {
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (text.empty() || end != text.c_str() + text.size()) throw InvalidProfile("bad number in profile: " + text);
        return v;
    };
    if (spec == "linear") return linear();
    if (spec.rfind("power:", 0) == 0) return power(number(spec.substr(6)));
    if (spec.rfind("table:", 0) == 0) {
        std::vector<std::pair<double, double>> knots;
        std::stringstream in(spec.substr(6));
        std::string item;
        while (std::getline(in, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos) throw InvalidProfile("table knots are t=value pairs");
            knots.emplace_back(number(item.substr(0, eq)), number(item.substr(eq + 1)));
        }
        return table(std::move(knots));
    }
    throw InvalidProfile("unknown profile: " + spec);
}

QSVerdict qs_obstruction(std::size_t n, double eta, const QSProfile& psi, double c, double s) {
    if (!(c > 0.0)) throw InvalidArgument("qs_obstruction needs C > 0");
    if (!(s >= 0.0)) throw InvalidArgument("qs_obstruction needs s >= 0");
    QSVerdict v;
    v.n = n;
    v.eta = eta;
    v.C = c;
    v.s = s;
    v.psi1 = psi(1.0);
    v.psi1eta = psi(1.0 + eta);
    if (!(v.psi1 > 0.0) || !(v.psi1eta >= v.psi1) || !std::isfinite(v.psi1eta)) {
        throw InvalidProfile("profile must be positive and nondecreasing on {1, 1 + eta}");
    }
    v.threshold = c * std::pow(4.0 * v.psi1 * v.psi1eta, s);
    v.contradicts = static_cast<double>(n) > v.threshold;
    v.required_n = static_cast<std::size_t>(std::floor(v.threshold)) + 1;
    return v;
}

QSVerdict qs_obstruction(const StarCertificate& star, const QSProfile& psi, double c, double s) {
    return qs_obstruction(star.n(), star.eta, psi, c, s);
}

Rational qs_threshold_exact(const Rational& psi1, const Rational& psi1eta, const Rational& c, unsigned s) {
    if (psi1 <= 0 || psi1eta < psi1) throw InvalidProfile("profile must be positive and nondecreasing");
    Rational base = 4 * psi1 * psi1eta;
    Rational out = c;
    for (unsigned i = 0; i < s; ++i) out *= base;
    return out;
}

bool qs_contradicts_exact(std::size_t n, const Rational& threshold) { return Rational(n) > threshold; }

DoublingProbe doubling_probe(std::span<const std::size_t> points, const Distance& d, std::size_t trials,
                             std::uint64_t seed) {
    if (trials < 1) throw InvalidArgument("doubling_probe needs at least one trial");
    if (points.empty()) throw InvalidArgument("doubling_probe needs points");
    const CounterRng rng(seed, kProbeStream);
    DoublingProbe best;
    best.max_count = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::size_t c = points[rng.bits(2 * t) % points.size()];
        std::set<double> radii;
        for (const auto p : points) {
            const double r = d(c, p);
            if (r > 0.0) radii.insert(r);
        }
        double r = 0.0;
        std::size_t count = 1;
        if (!radii.empty()) {
            auto it = radii.begin();
            std::advance(it, static_cast<std::ptrdiff_t>(rng.bits(2 * t + 1) % radii.size()));
            r = *it;
            count = half_radius_cover(points, d, c, r);
        }
        if (count > best.max_count) best = {count, c, r};
    }
    return best;
}

}  // namespace starry
