#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lamlab/geodesics.hpp"
#include "lamlab/profiles.hpp"

namespace lamlab {

// Geometry of the modified tube used for the connected-sum diagram.
struct TubeSketch {
    double R = 1, K = 4;
    double bump_inner = 0, bump_outer = 0;
    double k_end = 0;   // |phi - pi/2| where k~ returns to 1
    double a1 = 0;      // zone-A half-width in phi
};

struct FigureData {
    std::vector<std::vector<GeodesicState>> paths;
    std::vector<std::string> labels;
    double r_lo = -1, r_hi = 1;
    std::optional<WarpProfile> profile;
    std::optional<TubeSketch> tube;
    double zone_R = 0;  // > 0 marks the zone-A rectangle |r| <= pi R/2
    std::string title;
};

std::vector<int> figure_ids();
// Writes an SVG; throws MissingData when the figure needs data that is absent.
void emit_figure(int which, const FigureData& d, const std::string& path);
std::string figure_svg(int which, const FigureData& d);

}  // namespace lamlab
