#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "starry/dimension.hpp"
#include "starry/excursion.hpp"
#include "starry/snake.hpp"
#include "starry/stars.hpp"

namespace starry::io {

/// Shortest round-trip decimal form (%.17g).
std::string format_real(double v);

/// CSV with header `t,f` and n_cells + 1 rows in increasing t.
void write_excursion_csv(std::ostream& out, const ExcursionGrid& grid);
/// Throws InputError on malformed files and on paths that are not excursions.
ExcursionGrid read_excursion_csv(std::istream& in);

/// Rows `i,j,d_circ,d_map` over sample pairs a < b.
void write_map_csv(std::ostream& out, const MapMetric& mm);

/// Rows `center,R,r,N,exponent`.
void write_assouad_csv(std::ostream& out, const AssouadReport& report,
                       const std::function<std::string(std::size_t)>& center_label);

/// {metric, n, center_t, satellite_ts[], a, eta, rho, distances{center[], pairs[][]}}
nlohmann::json star_report(const StarCertificate& cert, const std::function<double(std::size_t)>& time_of);

/// Star count and eta from a report object, or from the largest-n entry of
/// an object holding a `stars` array. Throws InputError if none is usable.
struct StarSummary {
    std::size_t n = 0;
    double eta = 0.0;
    double a = 0.0;
};
StarSummary read_star_summary(const nlohmann::json& doc);

/// {verdict, n, threshold, psi1, psi1eta, C, s}
nlohmann::json verdict_json(const QSVerdict& v);

/// Reads a points CSV: a header row of column names, then one point per row.
std::vector<std::vector<double>> read_points_csv(std::istream& in);

}  // namespace starry::io
