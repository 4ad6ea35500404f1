#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "starry/dimension.hpp"
#include "starry/error.hpp"
#include "starry/stars.hpp"

using namespace starry;

namespace {

std::vector<std::size_t> iota_points(std::size_t n) {
    std::vector<std::size_t> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    return p;
}

Distance line_metric(std::size_t npts) {
    const double h = 1.0 / static_cast<double>(npts - 1);
    return [h](std::size_t i, std::size_t j) {
        return std::abs(static_cast<double>(i) - static_cast<double>(j)) * h;
    };
}

// Minimal number of diameter-r sets covering sorted reals: sweep left to right.
std::size_t interval_cover_oracle(const std::vector<double>& xs, double r) {
    std::size_t count = 0;
    std::size_t i = 0;
    while (i < xs.size()) {
        ++count;
        const double start = xs[i];
        while (i < xs.size() && xs[i] - start <= r) ++i;
    }
    return count;
}

}  // namespace

TEST(Counterexample, DistanceExamples) {
    EXPECT_EQ(counterexample_distance({3, 1}, {3, 2}), 0.125);
    EXPECT_EQ(counterexample_distance({3, 5}, {3, 1}), 0.0);
    EXPECT_NEAR(counterexample_distance({2, 1}, {4, 7}), 2.0 * (0.25 + 1.0 / 9 + 1.0 / 16), 1e-15);
    EXPECT_NEAR(counterexample_distance({2, 1}, {4, 7}), 0.8472222222222222, 1e-15);
    EXPECT_EQ(counterexample_distance({4, 6}, {4, 9}), 0.0);
    EXPECT_EQ(counterexample_distance({4, 4}, {4, 9}), 0.0625);
}

TEST(Counterexample, PseudometricExhaustive) {
    const auto pts = counterexample_points(8, 8);
    for (const auto& p : pts) {
        ASSERT_EQ(counterexample_distance(p, p), 0.0);
        for (const auto& q : pts) {
            const double pq = counterexample_distance(p, q);
            ASSERT_EQ(pq, counterexample_distance(q, p));
            ASSERT_GE(pq, 0.0);
            for (const auto& r : pts) {
                ASSERT_LE(pq, counterexample_distance(p, r) + counterexample_distance(r, q) + 1e-12)
                    << p.n << ',' << p.m << ' ' << q.n << ',' << q.m << ' ' << r.n << ',' << r.m;
            }
        }
    }
}

TEST(Counterexample, QuotientRepresentatives) {
    const auto q = counterexample_quotient(5);
    EXPECT_EQ(q.size(), 15u);
    for (std::size_t a = 0; a < q.size(); ++a)
        for (std::size_t b = a + 1; b < q.size(); ++b) EXPECT_GT(counterexample_distance(q[a], q[b]), 0.0);
}

TEST(Covering, CounterexampleBallOfRowFive) {
    const auto pts = counterexample_points(8, 10);
    const auto d = counterexample_oracle(pts);
    const auto ids = iota_points(pts.size());
    std::size_t center = 0;
    while (!(pts[center].n == 5 && pts[center].m == 1)) ++center;
    EXPECT_EQ(covering_number(ids, d, center, std::ldexp(1.0, -5), std::ldexp(1.0, -6)), 5u);
}

TEST(Covering, LineMatchesIntervalOracleBand) {
    const std::size_t npts = 1024;
    const auto d = line_metric(npts);
    const auto ids = iota_points(npts);
    const double R = 0.25, r = 1.0 / 32;
    std::vector<double> ball;
    for (std::size_t i = 0; i < npts; ++i)
        if (d(0, i) <= R) ball.push_back(d(0, i));
    const std::size_t exact = interval_cover_oracle(ball, r);
    EXPECT_EQ(exact, 8u);
    const std::size_t greedy = covering_number(ids, d, 0, R, r);
    EXPECT_GE(greedy, 8u);
    EXPECT_LE(greedy, 17u);
    EXPECT_GE(greedy, exact);
    EXPECT_LE(greedy, interval_cover_oracle(ball, r / 2));
}

TEST(Covering, ScaleAboveBallDiameterIsOne) {
    // B(0, 0.5) = {0, 0.01, 0.02}, diameter 0.02 <= r
    const std::vector<double> xs{0.0, 0.01, 0.02, 1.0};
    const Distance d = [&](std::size_t i, std::size_t j) { return std::abs(xs[i] - xs[j]); };
    const auto ids = iota_points(xs.size());
    EXPECT_EQ(covering_number(ids, d, 0, 0.5, 0.1), 1u);
    EXPECT_EQ(covering_number(ids, d, 1, 0.5, 0.02), 1u);
}

TEST(Covering, Errors) {
    const auto d = line_metric(11);
    const auto ids = iota_points(11);
    EXPECT_THROW(covering_number(ids, d, 0, 0.1, 0.1), InvalidArgument);
    EXPECT_THROW(covering_number(ids, d, 0, 0.1, 0.0), InvalidArgument);
    EXPECT_THROW(covering_number(std::vector<std::size_t>{}, d, 0, 0.2, 0.1), InvalidArgument);
}

TEST(Covering, MonotoneInRadii) {
    const std::size_t npts = 400;
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::pair<double, double>> xy(npts);
    for (auto& p : xy) p = {u(gen), u(gen)};
    const Distance d = [&](std::size_t i, std::size_t j) {
        return std::hypot(xy[i].first - xy[j].first, xy[i].second - xy[j].second);
    };
    const auto ids = iota_points(npts);
    std::uniform_int_distribution<std::size_t> pick(0, npts - 1);
    for (int t = 0; t < 200; ++t) {
        const auto c = pick(gen);
        const double R = 0.2 + 0.5 * u(gen);
        const double r1 = 0.01 + 0.1 * u(gen);
        const double r2 = r1 * (1.0 + u(gen));
        EXPECT_GE(covering_number(ids, d, c, R, r1), covering_number(ids, d, c, R, r2));
        EXPECT_LE(covering_number(ids, d, c, R, r1), covering_number(ids, d, c, R * 1.5, r1));
    }
}

TEST(Assouad, SinglePointIsZero) {
    const Distance d = [](std::size_t, std::size_t) { return 0.0; };
    const std::vector<std::size_t> pts{0};
    std::vector<ScalePair> pairs;
    for (int k = 0; k < 12; ++k) pairs.push_back({1.0, std::ldexp(1.0, -(k + 2))});
    const auto rep = assouad_estimate(pts, d, pairs, pts);
    EXPECT_EQ(rep.fitted_alpha, 0.0);
    for (const auto& s : rep.samples) EXPECT_EQ(s.N, 1u);
}

TEST(Assouad, LineIsOneDimensional) {
    const std::size_t npts = 4096;
    const auto d = line_metric(npts);
    const auto ids = iota_points(npts);
    std::vector<ScalePair> pairs;
    for (double R : {0.5, 0.25})
        for (int e = 2; e <= 8; ++e) pairs.push_back({R, R / std::ldexp(1.0, e)});
    std::vector<std::size_t> centers;
    for (std::size_t k = 0; k < 16; ++k) centers.push_back(k * (npts - 1) / 15);
    const auto rep = assouad_estimate(ids, d, pairs, centers, 4);
    EXPECT_GE(rep.fitted_alpha, 0.8);
    EXPECT_LE(rep.fitted_alpha, 1.3);
    EXPECT_TRUE(std::isfinite(rep.fitted_alpha));
    EXPECT_EQ(rep.samples.size(), pairs.size() * centers.size());
    EXPECT_FALSE(rep.nonconvergent);
}

TEST(Assouad, CounterexampleExponentsGrow) {
    const int nmax = 24;
    const auto pts = counterexample_points(nmax, nmax + 1);
    const auto d = counterexample_oracle(pts);
    const auto ids = iota_points(pts.size());
    std::vector<std::size_t> centers;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts[i].m == 1) centers.push_back(i);
    std::vector<ScalePair> pairs;
    for (int n = 1; n <= nmax; ++n) pairs.push_back({std::ldexp(1.0, -n), std::ldexp(1.0, -n - 1)});
    const auto rep = assouad_estimate(ids, d, pairs, centers);
    ASSERT_EQ(rep.pairs.size(), static_cast<std::size_t>(nmax));
    // the ball of radius 2^{-n} around (n+1, 1) also holds a whole row of n+1
    // points 2^{-n-1} apart, so the sup is n+1 except at the truncation edge.
    // Rows stay out of each other's balls once 2^{-n} < 2 (1/23^2 + 1/24^2).
    for (int n = 8; n < nmax; ++n) {
        EXPECT_EQ(rep.pairs[n - 1].sup_N, static_cast<std::size_t>(n + 1));
        EXPECT_NEAR(rep.pairs[n - 1].exponent, std::log2(n + 1), 1e-12);
    }
    EXPECT_EQ(rep.pairs[nmax - 1].sup_N, static_cast<std::size_t>(nmax));
    EXPECT_TRUE(rep.nonconvergent);
    EXPECT_EQ(rep.fitted_C, 1.0);
    EXPECT_TRUE(std::isfinite(rep.fitted_alpha));
}

TEST(Assouad, PreconditionErrors) {
    const auto d = line_metric(64);
    const auto ids = iota_points(64);
    std::vector<ScalePair> few(9, {0.5, 0.001});
    EXPECT_THROW(assouad_estimate(ids, d, few, ids), InvalidArgument);
    std::vector<ScalePair> narrow(12, {0.5, 0.25});
    EXPECT_THROW(assouad_estimate(ids, d, narrow, ids), InvalidArgument);
    std::vector<ScalePair> bad(12, {0.5, 0.001});
    bad[3] = {0.1, 0.2};
    EXPECT_THROW(assouad_estimate(ids, d, bad, ids), InvalidArgument);
}

TEST(QSObstruction, LinearExample) {
    const auto v = qs_obstruction(45, 2.0 / 3.0, QSProfile::linear(), 1.0, 2.0);
    EXPECT_NEAR(v.threshold, 400.0 / 9.0, 1e-12);
    EXPECT_TRUE(v.contradicts);
    EXPECT_EQ(v.label(), "CONTRADICTS");
    EXPECT_EQ(v.psi1, 1.0);
    EXPECT_NEAR(v.psi1eta, 5.0 / 3.0, 1e-15);
    const auto w = qs_obstruction(44, 2.0 / 3.0, QSProfile::linear(), 1.0, 2.0);
    EXPECT_FALSE(w.contradicts);
    EXPECT_EQ(w.label(), "INSUFFICIENT");
    EXPECT_EQ(w.required_n, 45u);
}

TEST(QSObstruction, ExactThreshold) {
    const Rational t = qs_threshold_exact(1, Rational(5, 3), 1, 2);
    EXPECT_EQ(t, Rational(400, 9));
    EXPECT_TRUE(qs_contradicts_exact(45, t));
    EXPECT_FALSE(qs_contradicts_exact(44, t));
    EXPECT_FALSE(qs_contradicts_exact(4, Rational(4)));
}

TEST(QSObstruction, ZeroExponentThresholdIsC) {
    const auto v = qs_obstruction(4, 0.3, QSProfile::power(2.0), 3.0, 0.0);
    EXPECT_EQ(v.threshold, 3.0);
    EXPECT_TRUE(v.contradicts);
    EXPECT_FALSE(qs_obstruction(3, 0.3, QSProfile::power(2.0), 3.0, 0.0).contradicts);
}

TEST(QSObstruction, ScaleFree) {
    StarCertificate star;
    star.satellites = {1, 2, 3, 4, 5, 6, 7};
    star.a = 2.0;
    star.eta = 0.25;
    star.rho = 1.0;
    const auto psi = QSProfile::parse("power:1.5");
    const auto base = qs_obstruction(star, psi, 0.5, 1.0);
    for (double lambda : {1e-6, 0.3, 7.0, 1e9}) {
        StarCertificate scaled = star;
        scaled.rho *= lambda;
        const auto v = qs_obstruction(scaled, psi, 0.5, 1.0);
        EXPECT_EQ(v.threshold, base.threshold);
        EXPECT_EQ(v.contradicts, base.contradicts);
        EXPECT_EQ(v.required_n, base.required_n);
    }
}

TEST(QSProfile, ParseAndValidate) {
    EXPECT_EQ(QSProfile::parse("linear")(2.5), 2.5);
    EXPECT_DOUBLE_EQ(QSProfile::parse("power:2")(3.0), 9.0);
    const auto tab = QSProfile::parse("table:0.5=1,1=2,2=6");
    EXPECT_DOUBLE_EQ(tab(1.5), 4.0);
    EXPECT_DOUBLE_EQ(tab(10.0), 6.0);
    EXPECT_THROW(QSProfile::parse("cubic"), InvalidProfile);
    EXPECT_THROW(qs_obstruction(10, 0.5, QSProfile::table({{1.0, 2.0}, {1.5, 1.0}}), 1.0, 1.0), InvalidProfile);
    EXPECT_THROW(qs_obstruction(10, 0.5, QSProfile::table({{1.0, 0.0}, {1.5, 1.0}}), 1.0, 1.0), InvalidProfile);
}

TEST(Doubling, SinglePoint) {
    const Distance d = [](std::size_t, std::size_t) { return 0.0; };
    const std::vector<std::size_t> pts{0};
    EXPECT_EQ(doubling_probe(pts, d, 5).max_count, 1u);
}

TEST(Doubling, LineIsBounded) {
    for (std::size_t npts : {65u, 257u, 1025u}) {
        const auto d = line_metric(npts);
        const auto ids = iota_points(npts);
        EXPECT_LE(doubling_probe(ids, d, 300, 1).max_count, 3u) << npts;
    }
}

TEST(Doubling, CounterexampleReachesRowSize) {
    const int nmax = 24;
    const auto pts = counterexample_points(nmax, nmax + 1);
    const auto d = counterexample_oracle(pts);
    const auto ids = iota_points(pts.size());
    std::size_t center = 0;
    while (!(pts[center].n == nmax && pts[center].m == 1)) ++center;
    EXPECT_EQ(half_radius_cover(ids, d, center, std::ldexp(1.0, -nmax)), static_cast<std::size_t>(nmax));
    EXPECT_GE(doubling_probe(ids, d, 4000, 7).max_count, static_cast<std::size_t>(nmax));
}
