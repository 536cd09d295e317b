#include <cmath>

#include <gtest/gtest.h>

#include "gen.hpp"
#include "pslab/models.hpp"

using namespace pslab;

namespace {

OperatorModel toeplitz(std::vector<Cx> c, bool adjoint = false) {
    return {AnalyticToeplitz{PowerSeries(std::move(c)), adjoint}};
}

OperatorModel diag(std::vector<Cx> v) {
    DiagonalNormal d;
    d.values = std::move(v);
    return {d};
}

// Brute-force Psi for the analytic Toeplitz operator with symbol w + w^2/2: zero if
// phi(w) = z has a root in the open disc (roots from the quadratic formula), else the
// distance from z to the densely sampled boundary curve.
double quadratic_symbol_psi(Cx z) {
    const Cx s = std::sqrt(Cx(1.0) + 2.0 * z);
    for (Cx w : {Cx(-1.0) + s, Cx(-1.0) - s})
        if (std::abs(w) < 1.0) return 0.0;
    double best = INFINITY;
    const int m = 400000;
    for (int k = 0; k < m; ++k) {
        const Cx w = std::polar(1.0, 2 * M_PI * k / m);
        best = std::min(best, std::abs(w + 0.5 * w * w - z));
    }
    return best;
}

}  // namespace

TEST(Sections, ShiftsAreJordanBlocks) {
    EXPECT_EQ(section(OperatorModel::forward_shift(), 6), jordan_block(6));
    EXPECT_EQ(section(OperatorModel::backward_shift(), 6), jordan_block(6).adjoint());
}

TEST(Sections, WeightsRepeat) {
    const OperatorModel m{UnilateralShift{ShiftDirection::forward, {Cx(2), Cx(0, 1)}}};
    const CMatrix s = section(m, 5);
    EXPECT_EQ(s(1, 0), Cx(2));
    EXPECT_EQ(s(2, 1), Cx(0, 1));
    EXPECT_EQ(s(3, 2), Cx(2));
    EXPECT_EQ(s(4, 3), Cx(0, 1));
}

TEST(Sections, BilateralWindow) {
    const OperatorModel m{BilateralShift{Cx(0.5)}};
    const CMatrix s = section(m, 3);
    ASSERT_EQ(s.rows(), 7u);
    // Column 3 is e_0, which maps to s e_1 (row 4).
    EXPECT_EQ(s(4, 3), Cx(0.5));
    EXPECT_EQ(s(3, 2), Cx(1.0));
    const CMatrix r = rect_section(m, 3, Cx(0.2));
    EXPECT_EQ(r.rows(), 8u);
    EXPECT_EQ(r.cols(), 7u);
    EXPECT_EQ(r(0, 0), Cx(-0.2));
}

TEST(Sections, RectShapesAndDefects) {
    const auto fwd = OperatorModel::forward_shift(), bwd = OperatorModel::backward_shift();
    EXPECT_EQ(rect_section(fwd, 10).rows(), 11u);
    EXPECT_EQ(rect_section(bwd, 10).rows(), 10u);
    EXPECT_NEAR(qt_defect(fwd, 10), 1.0, 1e-15);
    EXPECT_EQ(qt_defect(bwd, 10), 0.0);
    // Forward shift: square section is nilpotent, rectangular one an isometry.
    EXPECT_LT(psi_eval(section(fwd, 32), 0.0), 1e-15);
    EXPECT_NEAR(sigma_min(rect_section(fwd, 32, 0.0)), 1.0, 1e-14);
}

TEST(Sections, DirectSumInterleaves) {
    const OperatorModel m{DirectSum{{diag({Cx(1)}), diag({Cx(2)})}}};
    const CMatrix s = section(m, 4);
    EXPECT_EQ(s, CMatrix::diagonal(std::vector<Cx>{1, 2, 1, 2}));
    const OperatorModel m2{DirectSum{{OperatorModel::forward_shift(), diag({Cx(5)})}}};
    const CMatrix s2 = section(m2, 6);
    EXPECT_EQ(s2(2, 0), Cx(1.0));
    EXPECT_EQ(s2(1, 1), Cx(5.0));
    EXPECT_EQ(band(m2).lower, 2u);
}

TEST(Classification, QuasitriangularStandard) {
    EXPECT_FALSE(qt_standard(OperatorModel::forward_shift()));
    EXPECT_TRUE(qt_standard(OperatorModel::backward_shift()));
    EXPECT_FALSE(qt_standard({BilateralShift{}}));
    EXPECT_FALSE(qt_standard(toeplitz({0, 1, 0.5})));
    EXPECT_TRUE(qt_standard(toeplitz({0, 1, 0.5}, true)));
    EXPECT_TRUE(qt_standard(diag({1, 2})));
    EXPECT_TRUE(qt_standard(toeplitz({3})));
}

TEST(Oracle, Shifts) {
    const auto fwd = OperatorModel::forward_shift();
    EXPECT_EQ(*psi_oracle(fwd, 0.5).value, 0.0);
    EXPECT_NEAR(*psi_oracle(fwd, Cx(0, 2)).value, 1.0, 1e-15);
    EXPECT_NEAR(*psi_oracle({BilateralShift{}}, 0.25).value, 0.75, 1e-15);
    EXPECT_FALSE(psi_oracle({BilateralShift{Cx(2)}}, 0.25).value.has_value());
    const OperatorModel weighted{UnilateralShift{ShiftDirection::forward, {Cx(0.5)}}};
    EXPECT_FALSE(psi_oracle(weighted, 2.0).value.has_value());
}

TEST(Oracle, ToeplitzAgainstBruteForce) {
    const auto m = toeplitz({0, 1, 0.5});
    for (Cx z : {Cx(0.1, 0.1), Cx(2.5, 0), Cx(-0.6, 0.9), Cx(0, 2), Cx(1.2, -1.0), Cx(-1.5, 0.1)}) {
        const OracleValue v = psi_oracle(m, z);
        ASSERT_TRUE(v.value.has_value());
        if (v.ambiguous) continue;
        EXPECT_NEAR(*v.value, quadratic_symbol_psi(z), 1e-8) << z;
    }
    // The adjoint variant has the conjugate picture.
    const auto ma = toeplitz({0, 1, 0.5}, true);
    EXPECT_NEAR(*psi_oracle(ma, Cx(1.2, 1.0)).value, quadratic_symbol_psi(Cx(1.2, -1.0)), 1e-8);
}

TEST(Oracle, DiagonalAndDiscNet) {
    EXPECT_NEAR(*psi_oracle(diag({0, Cx(1, 1)}), Cx(1, 0)).value, 1.0, 1e-15);
    DiagonalNormal d;
    d.disc_net = std::make_pair(Cx(0.5, 0), 0.25);
    const OperatorModel m{d};
    EXPECT_NEAR(*psi_oracle(m, Cx(1.0, 0)).value, 0.25, 1e-15);
    EXPECT_EQ(*psi_oracle(m, Cx(0.6, 0)).value, 0.0);
    for (std::size_t k = 0; k < 200; ++k) EXPECT_LE(std::abs(d.eigenvalue(k) - Cx(0.5)), 0.25 + 1e-15);
}

TEST(Oracle, WindingNumber) {
    std::vector<Cx> c;
    for (int k = 0; k < 64; ++k) c.push_back(std::polar(1.0, 2 * M_PI * k / 64));
    EXPECT_EQ(winding_number(c, 0.0), 1);
    EXPECT_EQ(winding_number(c, 2.0), 0);
    std::vector<Cx> twice;
    for (int k = 0; k < 128; ++k) twice.push_back(std::polar(1.0, 4 * M_PI * k / 128));
    EXPECT_EQ(winding_number(twice, Cx(0.1, 0.2)), 2);
}

TEST(ModelJson, RoundTripAllVariants) {
    DiagonalNormal net;
    net.disc_net = std::make_pair(Cx(0.1, 0.2), 0.3);
    const std::vector<OperatorModel> ms{
        OperatorModel::forward_shift(),
        {UnilateralShift{ShiftDirection::backward, {Cx(1), Cx(0, 1)}}},
        {BilateralShift{Cx(0.5, 0.5)}},
        toeplitz({0, 1, Cx(0.5, 0.25)}, true),
        diag({1, Cx(2, 3)}),
        {net},
        {DirectSum{{OperatorModel::backward_shift(), diag({Cx(1)})}}},
    };
    for (const auto& m : ms) {
        const json j = model_to_json(m);
        EXPECT_EQ(model_to_json(model_from_json(json::parse(j.dump()))), j);
        EXPECT_EQ(section(model_from_json(j), 5), section(m, 5)) << j.dump();
    }
}

TEST(ModelJson, Rejections) {
    auto kind = [](const char* text) {
        try {
            model_from_json(json::parse(text));
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::io;  // sentinel: no throw
    };
    EXPECT_EQ(kind(R"({"variant":"mystery"})"), ErrorKind::unsupported_model);
    EXPECT_EQ(kind(R"({"variant":"direct_sum","children":[{"variant":"bilateral_shift"}]})"),
              ErrorKind::unsupported_model);
    EXPECT_EQ(kind(R"({"variant":"unilateral_shift","direction":"up"})"), ErrorKind::invalid_input);
    EXPECT_EQ(kind(R"({"nope":1})"), ErrorKind::invalid_input);
}

TEST(ModelProperties, SectionNormBelowBound) {
    gen::for_all(301, 30, [](gen::Gen& g) {
        std::vector<Cx> w(g.size(1, 4));
        for (auto& x : w) x = g.real(0.1, 2.0) * g.unit();
        const OperatorModel m{UnilateralShift{g.rng.uniform() < 0.5 ? ShiftDirection::forward : ShiftDirection::backward, w}};
        const std::size_t n = g.size(2, 40);
        EXPECT_LE(op_norm(section(m, n)), norm_bound(m) + 1e-12);
        // Extra rows can only lengthen (T - z)h, so the window's j dominates the square section's.
        const Cx z = g.point(2.5);
        EXPECT_GE(sigma_min(rect_section(m, n, z)), psi_eval(section(m, n), z) - 1e-12);
    });
}
