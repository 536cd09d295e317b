#include <cstring>

#include <gtest/gtest.h>

#include "pslab/field.hpp"
#include "pslab/render.hpp"
#include "pslab/sampling.hpp"

using namespace pslab;

TEST(Grid, ParseAndEndpoints) {
    const GridSpec g = parse_grid("-1:2:-0.5:0.5:7:3");
    EXPECT_EQ(g.nx, 7u);
    EXPECT_EQ(g.ny, 3u);
    EXPECT_EQ(g.x(0), -1.0);
    EXPECT_EQ(g.x(6), 2.0);
    EXPECT_EQ(g.y(2), 0.5);
    EXPECT_DOUBLE_EQ(g.x(2), 0.0);
}

TEST(Grid, RejectsMalformed) {
    for (const char* s : {"1:2:3:4:5", "2:1:0:1:4:4", "0:1:0:1:1:4", "0:1:0:1:4:x", "0:1:0:1:4.5:4", "a:1:0:1:4:4",
                          "0:1:0:nan:4:4"}) {
        try {
            parse_grid(s);
            ADD_FAILURE() << s;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::invalid_input) << s;
        }
    }
}

TEST(Field, DiagonalMatrixIsDistanceToSpectrum) {
    const std::vector<Cx> d{0.0, 1.0};
    const GridSpec g = parse_grid("-1:2:-1:1:31:21");
    const ScalarField f = compute_field(CMatrix::diagonal(d), g);
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            const Cx z = g.node(i, j);
            EXPECT_NEAR(f.at(i, j), std::min(std::abs(z), std::abs(z - 1.0)), 1e-14);
        }
}

TEST(Field, ParallelMatchesSerialBitwise) {
    Lcg64 rng(17);
    const CMatrix a = random_gaussian_matrix(12, 12, rng);
    const GridSpec g = parse_grid("-3:3:-3:3:33:29");
    const ScalarField p = compute_field(a, g);
    const ScalarField s = reference::compute_field(a, g);
    ASSERT_EQ(p.values.size(), s.values.size());
    EXPECT_EQ(std::memcmp(p.values.data(), s.values.data(), p.values.size() * sizeof(double)), 0);

    const auto zs = sample_points(100, Box{-2, 2, -2, 2}, rng);
    const auto pp = psi_at(a, zs);
    const auto ps = reference::psi_at(a, zs);
    EXPECT_EQ(std::memcmp(pp.data(), ps.data(), pp.size() * sizeof(double)), 0);
}

TEST(Field, PointFunctionAndCsv) {
    const GridSpec g = parse_grid("0:1:0:1:2:2");
    const ScalarField f = compute_field([](Cx z) { return z.real() + 10 * z.imag(); }, g);
    EXPECT_EQ(f.max_value(), 11.0);
    EXPECT_EQ(field_to_csv(f), "x,y,psi\n0,0,0\n1,0,1\n0,1,10\n1,1,11\n");
}

TEST(Field, ExceptionsInsideParallelLoopPropagate) {
    const GridSpec g = parse_grid("0:1:0:1:8:8");
    EXPECT_THROW(compute_field([](Cx z) -> double {
                     if (z.real() > 0.5) fail(ErrorKind::construction, "boom");
                     return 0.0;
                 }, g),
                 Error);
}

TEST(Render, SvgHasOnePolylinePerCurve) {
    LevelSet a{0.1, {{Cx(0, 0), Cx(1, 0), Cx(1, 1)}}};
    LevelSet b{0.2, {{Cx(0, 0), Cx(0, 1)}, {Cx(0.5, 0.5), Cx(0.6, 0.6)}}};
    const std::string s = levels_svg({a, b}, parse_grid("0:1:0:1:2:2"));
    std::size_t count = 0;
    for (std::size_t p = s.find("<polyline"); p != std::string::npos; p = s.find("<polyline", p + 1)) ++count;
    EXPECT_EQ(count, 3u);
    EXPECT_NE(s.find("<svg"), std::string::npos);
    EXPECT_NE(s.find("</svg>"), std::string::npos);
}
