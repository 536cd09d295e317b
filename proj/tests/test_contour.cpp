#include <cmath>

#include <gtest/gtest.h>

#include "gen.hpp"
#include "pslab/contour.hpp"

using namespace pslab;

namespace {

double shoelace(const std::vector<Cx>& p) {
    double a = 0;
    for (std::size_t k = 0; k + 1 < p.size(); ++k) a += p[k].real() * p[k + 1].imag() - p[k + 1].real() * p[k].imag();
    return 0.5 * std::abs(a);
}

// Linear interpolation of the field along the grid edge holding z, or NaN if z is not on an edge.
double edge_value(const ScalarField& f, Cx z) {
    const GridSpec& g = f.grid;
    const double fx = (z.real() - g.x_min) / g.dx(), fy = (z.imag() - g.y_min) / g.dy();
    const double rx = std::round(fx), ry = std::round(fy);
    if (std::abs(fy - ry) < 1e-9) {
        const auto j = static_cast<std::size_t>(ry);
        const auto i = std::min(static_cast<std::size_t>(std::floor(fx)), g.nx - 2);
        const double t = fx - static_cast<double>(i);
        return (1 - t) * f.at(i, j) + t * f.at(i + 1, j);
    }
    if (std::abs(fx - rx) < 1e-9) {
        const auto i = static_cast<std::size_t>(rx);
        const auto j = std::min(static_cast<std::size_t>(std::floor(fy)), g.ny - 2);
        const double t = fy - static_cast<double>(j);
        return (1 - t) * f.at(i, j) + t * f.at(i, j + 1);
    }
    return NAN;
}

}  // namespace

TEST(Contour, CircleIsOneClosedCurve) {
    const GridSpec g = parse_grid("-1:1:-1:1:41:41");
    const ScalarField f = compute_field([](Cx z) { return std::abs(z); }, g);
    const LevelSet ls = extract_level(f, 0.5);
    ASSERT_EQ(ls.polylines.size(), 1u);
    EXPECT_TRUE(ls.is_closed(0));
    for (Cx v : ls.polylines[0]) EXPECT_NEAR(std::abs(v), 0.5, 2e-3);
    EXPECT_NEAR(shoelace(ls.polylines[0]), M_PI * 0.25, 0.01);
}

TEST(Contour, TwoComponents) {
    const GridSpec g = parse_grid("-2:2:-1:1:81:41");
    const ScalarField f =
        compute_field([](Cx z) { return std::min(std::abs(z - 1.0), std::abs(z + 1.0)); }, g);
    const LevelSet ls = extract_level(f, 0.3);
    ASSERT_EQ(ls.polylines.size(), 2u);
    EXPECT_TRUE(ls.is_closed(0));
    EXPECT_TRUE(ls.is_closed(1));
}

TEST(Contour, OpenCurveEndsOnGridBoundary) {
    const GridSpec g = parse_grid("0:1:0:1:11:11");
    const ScalarField f = compute_field([](Cx z) { return z.real() + 0.1; }, g);
    const LevelSet ls = extract_level(f, 0.55);
    ASSERT_EQ(ls.polylines.size(), 1u);
    EXPECT_FALSE(ls.is_closed(0));
    const auto& p = ls.polylines[0];
    EXPECT_EQ(p.size(), 11u);
    EXPECT_NEAR(std::min(p.front().imag(), p.back().imag()), 0.0, 1e-15);
    EXPECT_NEAR(std::max(p.front().imag(), p.back().imag()), 1.0, 1e-15);
    for (Cx v : p) EXPECT_NEAR(v.real(), 0.45, 1e-14);
}

TEST(Contour, EmptyAndInvalidLevels) {
    const GridSpec g = parse_grid("0:1:0:1:5:5");
    const ScalarField f = compute_field([](Cx z) { return 1.0 + std::abs(z); }, g);
    EXPECT_TRUE(extract_level(f, 0.5).polylines.empty());
    EXPECT_TRUE(extract_level(f, 10.0).polylines.empty());
    EXPECT_THROW(extract_level(f, 0.0), Error);
    EXPECT_THROW(extract_level(f, -1.0), Error);
}

TEST(Contour, SaddleUsesCenterValue) {
    const GridSpec g = parse_grid("0:1:0:1:2:2");
    ScalarField f{g, {0.0, 1.0, 1.0, 0.0}};  // low at (0,0) and (1,1), center average 0.5
    // Below the center: the two low corners are cut off separately.
    const LevelSet lo = extract_level(f, 0.4);
    ASSERT_EQ(lo.polylines.size(), 2u);
    for (const auto& p : lo.polylines) {
        ASSERT_EQ(p.size(), 2u);
        const Cx mid = 0.5 * (p[0] + p[1]);
        EXPECT_TRUE(std::abs(mid) < 0.5 || std::abs(mid - Cx(1, 1)) < 0.5);
    }
    // Above it the low corners connect through the cell and the high corners are cut off.
    const LevelSet hi = extract_level(f, 0.6);
    ASSERT_EQ(hi.polylines.size(), 2u);
    for (const auto& p : hi.polylines) {
        const Cx mid = 0.5 * (p[0] + p[1]);
        EXPECT_TRUE(std::abs(mid - Cx(1, 0)) < 0.5 || std::abs(mid - Cx(0, 1)) < 0.5);
    }
}

TEST(ContourProperties, VerticesInterpolateToLevel) {
    gen::for_all(31, 30, [](gen::Gen& gn) {
        // Random bumps: a smooth field with several components and saddles.
        std::vector<std::pair<Cx, double>> bumps;
        for (int k = 0; k < 5; ++k) bumps.emplace_back(gn.point(1.0), gn.real(0.1, 0.5));
        const GridSpec g = parse_grid("-1:1:-1:1:37:29");
        const ScalarField f = compute_field(
            [&](Cx z) {
                double s = 0;
                for (auto [c, w] : bumps) s += std::exp(-std::norm(z - c) / (w * w));
                return s;
            },
            g);
        const double eps = gn.real(0.05, 0.9) * f.max_value();
        const LevelSet ls = extract_level(f, eps);
        for (std::size_t k = 0; k < ls.polylines.size(); ++k) {
            const auto& p = ls.polylines[k];
            ASSERT_GE(p.size(), 2u);
            for (std::size_t m = 0; m < p.size(); ++m) {
                EXPECT_NEAR(edge_value(f, p[m]), eps, 1e-12);
                if (m > 0) {
                    EXPECT_LE(std::abs(p[m].real() - p[m - 1].real()), g.dx() * (1 + 1e-12));
                    EXPECT_LE(std::abs(p[m].imag() - p[m - 1].imag()), g.dy() * (1 + 1e-12));
                }
            }
            // Curves that do not close must end on the grid boundary.
            if (!ls.is_closed(k)) {
                for (Cx e : {p.front(), p.back()}) {
                    const bool on_edge = std::abs(e.real() - g.x_min) < 1e-12 || std::abs(e.real() - g.x_max) < 1e-12 ||
                                         std::abs(e.imag() - g.y_min) < 1e-12 || std::abs(e.imag() - g.y_max) < 1e-12;
                    EXPECT_TRUE(on_edge);
                }
            }
        }
    });
}

TEST(Contour, JsonShape) {
    LevelSet ls{0.25, {{Cx(0, 0), Cx(1, 0.5)}}};
    const json j = levelsets_to_json({ls});
    EXPECT_EQ(j["levels"][0]["epsilon"], 0.25);
    EXPECT_EQ(j["levels"][0]["polylines"][0][1][1], 0.5);
}
