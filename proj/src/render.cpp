#include "pslab/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace pslab {

SvgCanvas::SvgCanvas(double x_min, double x_max, double y_min, double y_max, int width_px)
    : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), w_(width_px) {
    require(x_max > x_min && y_max > y_min && width_px > 0, "bad SVG view box");
    h_ = std::max(1, static_cast<int>(std::lround(width_px * (y_max - y_min) / (x_max - x_min))));
}

std::string SvgCanvas::px(Cx z) const {
    const double x = (z.real() - x_min_) / (x_max_ - x_min_) * w_;
    const double y = (y_max_ - z.imag()) / (y_max_ - y_min_) * h_;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f,%.3f", x, y);
    return buf;
}

void SvgCanvas::polyline(const std::vector<Cx>& pts, const std::string& color, double stroke_px, bool dashed) {
    if (pts.size() < 2) return;
    std::string s = "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" + fmt_num(stroke_px) + "\"";
    if (dashed) s += " stroke-dasharray=\"6,4\"";
    s += " points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) {
        if (k) s += ' ';
        s += px(pts[k]);
    }
    s += "\"/>";
    items_.push_back(std::move(s));
}

void SvgCanvas::label(Cx at, const std::string& text, const std::string& color) {
    const std::string p = px(at);
    const auto comma = p.find(',');
    items_.push_back("<text x=\"" + p.substr(0, comma) + "\" y=\"" + p.substr(comma + 1) +
                     "\" font-family=\"monospace\" font-size=\"12\" fill=\"" + color + "\">" + text + "</text>");
}

std::string SvgCanvas::str() const {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w_) + "\" height=\"" +
                    std::to_string(h_) + "\" viewBox=\"0 0 " + std::to_string(w_) + " " + std::to_string(h_) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (const auto& it : items_) s += it + "\n";
    s += "</svg>\n";
    return s;
}

std::string level_color(std::size_t k) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
    return palette[k % (sizeof palette / sizeof palette[0])];
}

std::string levels_svg(const std::vector<LevelSet>& sets, const GridSpec& view) {
    SvgCanvas c(view.x_min, view.x_max, view.y_min, view.y_max);
    for (std::size_t k = 0; k < sets.size(); ++k) {
        for (const auto& pl : sets[k].polylines) c.polyline(pl, level_color(k));
        c.label({view.x_min + 0.02 * (view.x_max - view.x_min), view.y_max - (0.05 + 0.05 * k) * (view.y_max - view.y_min)},
                "eps=" + fmt_num(sets[k].epsilon), level_color(k));
    }
    return c.str();
}

}  // namespace pslab
