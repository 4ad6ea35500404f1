#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "starry/dimension.hpp"
#include "starry/error.hpp"
#include "starry/excursion.hpp"
#include "starry/io.hpp"
#include "starry/plot.hpp"
#include "starry/snake.hpp"
#include "starry/stars.hpp"

using namespace starry;

namespace {

ExcursionGrid read_string(const std::string& text) {
    std::istringstream in(text);
    return io::read_excursion_csv(in);
}

std::vector<std::pair<double, double>> polyline_points(const std::string& svg) {
    // plain search: std::regex recurses per character and overflows on long attributes
    const auto tag = svg.find("class=\"excursion\"");
    if (tag == std::string::npos) return {};
    const auto open = svg.find("points=\"", tag);
    if (open == std::string::npos) return {};
    const auto begin = open + 8;
    const auto end = svg.find('"', begin);
    std::vector<std::pair<double, double>> out;
    std::istringstream in(svg.substr(begin, end - begin));
    std::string tok;
    while (in >> tok) {
        const auto comma = tok.find(',');
        out.emplace_back(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
    }
    return out;
}

}  // namespace

TEST(ExcursionCsv, RoundTripIsBitExact) {
    const auto g = brownian_excursion(512, 17);
    std::ostringstream out;
    io::write_excursion_csv(out, g);
    const auto back = read_string(out.str());
    ASSERT_EQ(back.n_cells(), g.n_cells());
    for (std::size_t i = 0; i <= g.n_cells(); ++i) ASSERT_EQ(back[i], g[i]);
    std::ostringstream again;
    io::write_excursion_csv(again, back);
    EXPECT_EQ(again.str(), out.str());
}

TEST(ExcursionCsv, ZigZagRows) {
    std::ostringstream out;
    io::write_excursion_csv(out, zigzag_grid(4, 16));
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "t,f");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 17u);
    EXPECT_NE(out.str().find("0.125,1\n"), std::string::npos);
    EXPECT_NE(out.str().find("0.25,0.5\n"), std::string::npos);
}

TEST(ExcursionCsv, Errors) {
    EXPECT_THROW(read_string(""), InputError);
    EXPECT_THROW(read_string("x,y\n0,0\n0.5,1\n1,0\n"), InputError);
    EXPECT_THROW(read_string("t,f\n0,0\n1,0\n"), InputError);
    EXPECT_THROW(read_string("t,f\n0,0\n0.5,abc\n1,0\n"), InputError);
    EXPECT_THROW(read_string("t,f\n0,0\n0.4,1\n1,0\n"), InputError);
    EXPECT_THROW(read_string("t,f\n0,0\n0.5,-1\n1,0\n"), InputError);
    EXPECT_THROW(read_string("t,f\n0,0.1\n0.5,1\n1,0\n"), InputError);
    EXPECT_THROW(read_string("t,f\n0,0,3\n0.5,1\n1,0\n"), InputError);
    EXPECT_NO_THROW(read_string("t,f\n0,0\n0.5,1\n1,0\n"));
    EXPECT_NO_THROW(read_string("t,f\r\n0,0\r\n0.5,1\r\n1,0\r\n"));
}

TEST(MapCsv, HeaderAndPairs) {
    const SnakeLabels sl({0, 1, 0.5, 2, 0}, 0);
    const auto mm = map_metric(sl, 4, SubsetStrategy::uniform_stride);
    std::ostringstream out;
    io::write_map_csv(out, mm);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "i,j,d_circ,d_map");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 6u);
}

TEST(StarReport, SchemaAndSummary) {
    StarCertificate c;
    c.center = 1;
    c.satellites = {2, 6, 10};
    c.a = 2.0;
    c.eta = 0.25;
    c.rho = 0.5;
    c.center_distances = {0.5, 0.5, 0.5};
    c.pair_distances = {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
    const auto j = io::star_report(c, [](std::size_t i) { return static_cast<double>(i) / 16.0; });
    EXPECT_EQ(j.at("metric"), "tree");
    EXPECT_EQ(j.at("n"), 3);
    EXPECT_EQ(j.at("center_t"), 1.0 / 16);
    EXPECT_EQ(j.at("satellite_ts").size(), 3u);
    EXPECT_EQ(j.at("distances").at("pairs").size(), 3u);
    EXPECT_EQ(j.at("distances").at("center").size(), 3u);
    const auto s = io::read_star_summary(j);
    EXPECT_EQ(s.n, 3u);
    EXPECT_EQ(s.eta, 0.25);
    nlohmann::json doc;
    doc["stars"] = {j, nlohmann::json{{"n", 45}, {"eta", 2.0 / 3.0}, {"a", 3.0}}};
    EXPECT_EQ(io::read_star_summary(doc).n, 45u);
    EXPECT_THROW(io::read_star_summary(nlohmann::json{{"stars", nlohmann::json::array()}}), InputError);
    EXPECT_THROW(io::read_star_summary(nlohmann::json{{"foo", 1}}), InputError);
}

TEST(VerdictJson, Fields) {
    const auto v = qs_obstruction(45, 2.0 / 3.0, QSProfile::linear(), 1.0, 2.0);
    const auto j = io::verdict_json(v);
    EXPECT_EQ(j.at("verdict"), "CONTRADICTS");
    EXPECT_EQ(j.at("n"), 45);
    EXPECT_NEAR(j.at("threshold").get<double>(), 400.0 / 9.0, 1e-12);
    for (const char* key : {"psi1", "psi1eta", "C", "s"}) EXPECT_TRUE(j.contains(key)) << key;
}

TEST(PointsCsv, ReadsRowsAndRejectsRagged) {
    std::istringstream good("x,y\n0,1\n2,3\n");
    const auto pts = io::read_points_csv(good);
    ASSERT_EQ(pts.size(), 2u);
    EXPECT_EQ(pts[1], (std::vector<double>{2, 3}));
    std::istringstream ragged("x,y\n0,1\n2\n");
    EXPECT_THROW(io::read_points_csv(ragged), InputError);
    std::istringstream empty("");
    EXPECT_THROW(io::read_points_csv(empty), InputError);
}

TEST(FormatReal, RoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456789.123456789}) EXPECT_EQ(std::stod(io::format_real(v)), v);
}

TEST(Plot, ZigZagFourPeaksAtOddEighths) {
    const auto svg = plot_excursion(zigzag_grid(4, 16));
    const auto pts = polyline_points(svg);
    ASSERT_EQ(pts.size(), 17u);
    double top = 1e9;
    for (const auto& p : pts) top = std::min(top, p.second);
    std::vector<double> peak_t;
    for (const auto& p : pts)
        if (p.second == top) peak_t.push_back((p.first - 20.0) / 800.0);
    EXPECT_EQ(peak_t, (std::vector<double>{0.125, 0.375, 0.625, 0.875}));
    EXPECT_EQ(svg.find("satellite"), std::string::npos);
    EXPECT_EQ(svg.rfind("</svg>"), svg.size() - 7);
}

TEST(Plot, OverlayAndDecimation) {
    const auto g = brownian_excursion(1 << 14, 3);
    StarOverlay ov;
    ov.star.center = 100;
    ov.star.satellites = {200, 300};
    ov.window = WindowMatch{6, 64, 512, 0.01};
    const auto svg = plot_excursion(g, ov);
    EXPECT_NE(svg.find("class=\"window\""), std::string::npos);
    EXPECT_NE(svg.find("class=\"center\""), std::string::npos);
    EXPECT_LE(polyline_points(svg).size(), 4098u);
    EXPECT_EQ(svg, plot_excursion(g, ov));
    // balanced tags
    auto count = [&](const std::string& needle) {
        std::size_t n = 0;
        for (auto pos = svg.find(needle); pos != std::string::npos; pos = svg.find(needle, pos + 1)) ++n;
        return n;
    };
    EXPECT_EQ(count("<svg "), 1u);
    EXPECT_EQ(count("</svg>"), 1u);
    EXPECT_EQ(count("<title>"), count("</title>"));
}
