#include <cmath>
#include <cstring>

#include <gtest/gtest.h>

#include "pslab/studies.hpp"

using namespace pslab;

namespace {

bool same_table(const ConvergenceTable& a, const ConvergenceTable& b) {
    if (a.rows.size() != b.rows.size() || a.nodes != b.nodes || a.excluded != b.excluded) return false;
    for (std::size_t k = 0; k < a.rows.size(); ++k) {
        if (std::memcmp(&a.rows[k].sup_error, &b.rows[k].sup_error, sizeof(double)) != 0) return false;
        if (a.rows[k].argmax != b.rows[k].argmax) return false;
    }
    return true;
}

}  // namespace

TEST(Convergence, BackwardShiftDecreases) {
    ConvergenceOptions o;
    o.annulus = std::make_pair(1.05, 2.0);
    const auto t = convergence_study(OperatorModel::backward_shift(), parse_grid("-2:2:-2:2:15:15"), {8, 16, 32, 64}, o);
    EXPECT_EQ(t.reference, "psi_oracle");
    EXPECT_TRUE(t.quasitriangular);
    EXPECT_FALSE(t.negative_control);
    EXPECT_TRUE(t.nonincreasing);
    ASSERT_EQ(t.rows.size(), 4u);
    EXPECT_LT(t.rows.back().sup_error, t.rows.front().sup_error);
    // Errors are measured on the annulus only.
    for (const auto& r : t.rows) {
        EXPECT_GE(std::abs(r.argmax), 1.05 - 1e-12);
        EXPECT_LE(std::abs(r.argmax), 2.0 + 1e-12);
    }
}

TEST(Convergence, ForwardShiftIsNegativeControl) {
    const auto t = convergence_study(OperatorModel::forward_shift(), parse_grid("-0.5:0.5:-0.5:0.5:5:5"), {8, 16, 32});
    EXPECT_EQ(t.reference, "rect_section");
    EXPECT_TRUE(t.negative_control);
    EXPECT_FALSE(t.pass);
    // At z = 0 the square section is nilpotent while j_T(0) = 1: the gap never closes.
    for (const auto& r : t.rows) EXPECT_GE(r.sup_error, 0.99);
    const json j = convergence_to_json(t);
    EXPECT_TRUE(j["negative_control"].get<bool>());
}

TEST(Convergence, ParallelMatchesSerial) {
    ConvergenceOptions o;
    o.annulus = std::make_pair(1.05, 2.0);
    const GridSpec g = parse_grid("-2:2:-2:2:11:11");
    const auto p = convergence_study(OperatorModel::backward_shift(), g, {8, 16}, o);
    const auto s = reference::convergence_study(OperatorModel::backward_shift(), g, {8, 16}, o);
    EXPECT_TRUE(same_table(p, s));
    const auto pf = convergence_study(OperatorModel::forward_shift(), g, {8, 16});
    const auto sf = reference::convergence_study(OperatorModel::forward_shift(), g, {8, 16});
    EXPECT_TRUE(same_table(pf, sf));
}

TEST(Convergence, FiniteDiagonalIsExactOnceCovered) {
    DiagonalNormal d;
    d.values = {Cx(0.5), Cx(-0.5, 0.5), Cx(0, -1)};
    const auto t = convergence_study({d}, parse_grid("-2:2:-2:2:9:9"), {3, 6, 12});
    for (const auto& r : t.rows) EXPECT_LT(r.sup_error, 1e-14);
    EXPECT_TRUE(t.pass);
}

TEST(Convergence, CsvHeader) {
    ConvergenceTable t;
    t.rows = {{16, 0.25, Cx(1, 0)}};
    EXPECT_EQ(convergence_to_csv(t), "n,sup_error\n16,0.25\n");
}

TEST(Support, JordanCosineAndMonotone) {
    const auto t = support_convergence(OperatorModel::backward_shift(), {0.0, 1.0}, {5, 10, 20, 40});
    EXPECT_TRUE(t.pass);
    for (const auto& r : t.rows)
        EXPECT_NEAR(r.rho, std::cos(M_PI / static_cast<double>(r.n + 1)), 1e-12) << r.n;
    EXPECT_NE(support_to_csv(t).find("theta,n,rho\n"), std::string::npos);
}

TEST(Join, NormalSummandInsideSpectrum) {
    // K inside the closed unit disc, which is the spectrum of the backward shift.
    const std::vector<Cx> k{Cx(0.2, 0.1), Cx(-0.5, 0), Cx(0, 0.9)};
    std::vector<Cx> zs;
    for (int a = 0; a < 16; ++a) zs.push_back(std::polar(1.3 + 0.05 * a, 0.4 * a));
    const auto r = join_check(OperatorModel::backward_shift(), k, zs, 24);
    EXPECT_TRUE(r.pass) << r.max_violation;
    EXPECT_EQ(r.samples, zs.size());
}
