#include "starry/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "starry/error.hpp"

namespace starry::io {

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_excursion_csv(std::ostream& out, const ExcursionGrid& grid) {
    out << "t,f\n";
    for (std::size_t i = 0; i <= grid.n_cells(); ++i) {
        out << format_real(grid.t(i)) << ',' << format_real(grid[i]) << '\n';
    }
}

namespace {

std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t lead = 0;
    while (lead < s.size() && (s[lead] == ' ' || s[lead] == '\t')) ++lead;
    return s.substr(lead);
}

double parse_real(const std::string& text, std::size_t line) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) {
        throw InputError("line " + std::to_string(line) + ": not a number: '" + t + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream in(line);
    std::string cell;
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    return cells;
}

}  // namespace

ExcursionGrid read_excursion_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trim(line) != "t,f") throw InputError("excursion CSV must start with header t,f");
    std::vector<double> ts;
    std::vector<double> fs;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != 2) throw InputError("line " + std::to_string(lineno) + ": expected two columns");
        ts.push_back(parse_real(cells[0], lineno));
        fs.push_back(parse_real(cells[1], lineno));
    }
    if (ts.size() < 3) throw InputError("excursion CSV needs at least three rows");
    const std::size_t n = ts.size() - 1;
    for (std::size_t i = 0; i <= n; ++i) {
        const double expected = static_cast<double>(i) / static_cast<double>(n);
        if (std::abs(ts[i] - expected) > 1e-9) {
            throw InputError("row " + std::to_string(i) + ": t is not on the uniform grid i/n_cells");
        }
    }
    try {
        return ExcursionGrid(std::move(fs), {Provenance::Kind::file, 0});
    } catch (const InvalidExcursion& e) {
        throw InputError(std::string("not an excursion: ") + e.what());
    }
}

void write_map_csv(std::ostream& out, const MapMetric& mm) {
    out << "i,j,d_circ,d_map\n";
    const auto idx = mm.sample_indices();
    for (std::size_t a = 0; a < mm.size(); ++a) {
        for (std::size_t b = a + 1; b < mm.size(); ++b) {
            out << idx[a] << ',' << idx[b] << ',' << format_real(mm.d_circ_at(a, b)) << ','
                << format_real(mm.d_map_at(a, b)) << '\n';
        }
    }
}

void write_assouad_csv(std::ostream& out, const AssouadReport& report,
                       const std::function<std::string(std::size_t)>& center_label) {
    out << "center,R,r,N,exponent\n";
    for (const auto& s : report.samples) {
        out << center_label(s.center) << ',' << format_real(s.R) << ',' << format_real(s.r) << ',' << s.N << ','
            << format_real(s.exponent()) << '\n';
    }
}

nlohmann::json star_report(const StarCertificate& cert, const std::function<double(std::size_t)>& time_of) {
    nlohmann::json j;
    j["metric"] = std::string(to_string(cert.metric));
    j["n"] = cert.n();
    j["center_t"] = time_of(cert.center);
    auto ts = nlohmann::json::array();
    for (const auto s : cert.satellites) ts.push_back(time_of(s));
    j["satellite_ts"] = ts;
    j["a"] = cert.a;
    j["eta"] = cert.eta;
    j["rho"] = cert.rho;
    j["distances"] = {{"center", cert.center_distances}, {"pairs", cert.pair_distances}};
    return j;
}

StarSummary read_star_summary(const nlohmann::json& doc) {
    auto one = [](const nlohmann::json& s) {
        if (!s.is_object() || !s.contains("n") || !s.contains("eta")) {
            throw InputError("star report needs fields n and eta");
        }
        StarSummary out;
        out.n = s.at("n").get<std::size_t>();
        out.eta = s.at("eta").get<double>();
        out.a = s.value("a", 0.0);
        return out;
    };
    try {
        if (doc.is_object() && doc.contains("stars")) {
            const auto& stars = doc.at("stars");
            if (!stars.is_array() || stars.empty()) throw InputError("star file holds no certificates");
            StarSummary best = one(stars.front());
            for (const auto& s : stars) {
                const auto cand = one(s);
                if (cand.n > best.n) best = cand;
            }
            return best;
        }
        return one(doc);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed star report: ") + e.what());
    }
}

nlohmann::json verdict_json(const QSVerdict& v) {
    return {{"verdict", v.label()}, {"n", v.n},      {"threshold", v.threshold}, {"psi1", v.psi1},
            {"psi1eta", v.psi1eta}, {"C", v.C},      {"s", v.s}};
}

std::vector<std::vector<double>> read_points_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InputError("points CSV is empty");
    const std::size_t dim = split(trim(line)).size();
    std::vector<std::vector<double>> pts;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != dim) throw InputError("line " + std::to_string(lineno) + ": wrong column count");
        std::vector<double> p;
        for (const auto& c : cells) p.push_back(parse_real(c, lineno));
        pts.push_back(std::move(p));
    }
    if (pts.empty()) throw InputError("points CSV has no rows");
    return pts;
}

}  // namespace starry::io
