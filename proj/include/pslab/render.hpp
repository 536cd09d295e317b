#pragma once

#include <string>
#include <vector>

#include "pslab/contour.hpp"

namespace pslab {

/// Minimal SVG writer for polylines in the complex plane (y axis pointing up).
class SvgCanvas {
public:
    SvgCanvas(double x_min, double x_max, double y_min, double y_max, int width_px = 640);

    void polyline(const std::vector<Cx>& pts, const std::string& color, double stroke_px = 1.5,
                  bool dashed = false);
    void label(Cx at, const std::string& text, const std::string& color);
    std::string str() const;

private:
    double x_min_, x_max_, y_min_, y_max_;
    int w_, h_;
    std::vector<std::string> items_;

    std::string px(Cx z) const;
};

/// Color for the k-th of several levels.
std::string level_color(std::size_t k);

std::string levels_svg(const std::vector<LevelSet>& sets, const GridSpec& view);

}  // namespace pslab
