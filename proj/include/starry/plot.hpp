#pragma once

#include <optional>
#include <string>

#include "starry/excursion.hpp"
#include "starry/stars.hpp"

namespace starry {

struct StarOverlay {
    StarCertificate star;
    std::optional<WindowMatch> window;
};

/// SVG polyline of (t, f(t)) scaled to the plot box, tallest sample at the top
/// edge. Grids above 4096 cells are reduced to per-bucket min and max in index
/// order. Optional star overlay: window band, red center, blue satellites.
std::string plot_excursion(const ExcursionGrid& grid, const std::optional<StarOverlay>& overlay = std::nullopt);

}  // namespace starry
