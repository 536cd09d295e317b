#include <gtest/gtest.h>

#include "pslab/checks.hpp"
#include "pslab/sampling.hpp"

using namespace pslab;

namespace {

// Closed form for J_2: sigma_min(J_2 - z)^2 = |z|^2 + 1/2 - sqrt(1/4 + |z|^2).
double psi_j2(Cx z) { return std::sqrt(std::norm(z) + 0.5 - std::sqrt(0.25 + std::norm(z))); }

}  // namespace

TEST(Report, RecordClampsAndCapsWitnesses) {
    PropertyReport r("x", 1e-9);
    r.record(-5.0, json{{"k", 0}});
    EXPECT_EQ(r.max_violation, 0.0);
    for (int k = 0; k < 25; ++k) r.record(1e-6, json{{"k", k}});
    r.finalize();
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.samples, 26u);
    EXPECT_LE(r.witnesses.size(), 10u);
    EXPECT_EQ(r.max_violation, 1e-6);
    const json j = report_to_json(r);
    EXPECT_EQ(j["name"], "x");
    EXPECT_EQ(j["pass"], false);
}

TEST(Report, BelowToleranceStillPasses) {
    PropertyReport r("x", 1e-9);
    r.record(5e-10, json::object());
    r.finalize();
    EXPECT_TRUE(r.pass);
}

TEST(Checks, ScalarZeroHasNoViolation) {
    // Psi = |z| exactly; every inequality is tight or slack with zero violation.
    const CMatrix a(1, 1);
    Lcg64 rng(1);
    const auto pairs = sample_pairs(100, Box{-2, 2, -2, 2}, rng);
    const auto r = check_lip1(a, pairs);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.max_violation, 0.0);
    EXPECT_EQ(r.samples, 100u);
}

TEST(Checks, RatioRequiresCAboveNorm) {
    const CMatrix j = jordan_block(4);
    const std::vector<std::pair<Cx, Cx>> pairs{{Cx(2), Cx(0, 2)}};
    try {
        check_ratio(j, pairs, 0.5);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::precondition);
    }
}

TEST(Checks, RatioIsSymmetricInThePair) {
    Lcg64 rng(4);
    const CMatrix a = random_gaussian_matrix(6, 6, rng);
    const double c = 1.1 * op_norm(a);
    auto pairs = sample_annulus_pairs(50, c, 3 * c, rng);
    auto swapped = pairs;
    for (auto& [z, w] : swapped) std::swap(z, w);
    const auto r1 = check_ratio(a, pairs, c), r2 = check_ratio(a, swapped, c);
    EXPECT_TRUE(r1.pass);
    EXPECT_EQ(r1.samples, r2.samples);
    EXPECT_EQ(r1.max_violation, r2.max_violation);
}

TEST(Checks, RatioInequalityHoldsOnClosedForm) {
    // Independent evaluation of both orders of the ratio bound through the J_2 closed form.
    ASSERT_NEAR(op_norm(jordan_block(2)), 1.0, 1e-15);
    const double c = 1.2;
    Lcg64 rng(8);
    for (auto [z, w] : sample_annulus_pairs(200, c, 3.6, rng)) {
        const double pz = psi_j2(z), pw = psi_j2(w);
        const double d = std::abs(z - w);
        const double qz = pz / std::abs(z), qw = pw / std::abs(w);
        EXPECT_LE(qw, qz * (1 + d / (std::abs(w) * pz)) + 1e-12);
        EXPECT_LE(qz, qw * (1 + d / (std::abs(z) * pw)) + 1e-12);
        EXPECT_LE(std::abs(qz - qw), d / (c * c) + 1e-12);
        EXPECT_NEAR(psi_eval(jordan_block(2), z), pz, 1e-13);
    }
}

TEST(Checks, BandMetricsOnNormalMatrix) {
    Lcg64 rng(5);
    auto [a, eig] = random_normal_matrix(6, Box{-1, 1, -1, 1}, rng);
    const auto r = check_band(a, sample_annulus(100, 2.0, 5.0, rng));
    EXPECT_TRUE(r.pass);
    EXPECT_NEAR(r.metrics.at("norm"), op_norm(a), 1e-15);
}

TEST(Checks, SubharmonicExcludesDiscsAroundEigenvalues) {
    const std::vector<Cx> d{0.0, Cx(1, 1)};
    const CMatrix a = CMatrix::diagonal(d);
    const std::vector<Disc> discs{{Cx(0.05, 0), 0.2, 64}, {Cx(3, 3), 0.5, 64}};
    const auto r = check_subharmonic(a, discs);
    EXPECT_EQ(r.excluded, 1u);
    EXPECT_EQ(r.samples, 1u);
    EXPECT_TRUE(r.pass);
}

TEST(Checks, SemiconvexOnJordanBlock) {
    Lcg64 rng(6);
    const auto r = check_semiconvex(jordan_block(6), sample_segments(100, Box{-2, 2, -2, 2}, 0.5, rng));
    EXPECT_TRUE(r.pass);
    EXPECT_GT(r.samples, 0u);
}

TEST(Suite, DeterministicAndRejectsUnknown) {
    Lcg64 g(9);
    const CMatrix a = random_gaussian_matrix(5, 5, g);
    const std::vector<std::string> props{"lip1", "band", "ratio", "semiconvex", "subharmonic"};
    Lcg64 r1(123), r2(123);
    const auto a1 = run_property_suite(a, props, 40, r1);
    const auto a2 = run_property_suite(a, props, 40, r2);
    ASSERT_EQ(a1.size(), 5u);
    for (std::size_t k = 0; k < a1.size(); ++k) {
        EXPECT_EQ(report_to_json(a1[k]).dump(), report_to_json(a2[k]).dump());
        EXPECT_TRUE(a1[k].pass) << a1[k].name;
    }
    Lcg64 r3(1);
    EXPECT_THROW(run_property_suite(a, {"nope"}, 10, r3), Error);
}
