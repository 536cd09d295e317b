#include <cmath>

#include <gtest/gtest.h>

#include "gen.hpp"
#include "pslab/matfun.hpp"

using namespace pslab;

TEST(Toeplitz, EqualsPolynomialInJordanBlock) {
    gen::for_all(501, 10, [](gen::Gen& g) {
        const std::size_t n = g.size(1, 12);
        std::vector<Cx> c(std::max(n, g.size(1, 15)));
        for (auto& x : c) x = g.point(1.0);
        const PowerSeries q(c);
        CMatrix want(n, n);
        CMatrix jk = CMatrix::identity(n);
        const CMatrix j = jordan_block(n);
        for (std::size_t k = 0; k < c.size(); ++k) {
            want += c[k] * jk;
            jk = jk * j;
        }
        EXPECT_LT((toeplitz_of_series(q, n) - want).max_abs(), 1e-14);
    });
}

TEST(Toeplitz, SMatrix) {
    const CMatrix j = jordan_block(7);
    EXPECT_EQ(s_matrix(7), Cx(4) * j - Cx(4) * (j * j));
}

TEST(Sqrt, SquaringOracle) {
    for (std::size_t n : {10u, 50u}) {
        const Cx tau = 1.2;
        const CMatrix q = sqrt_shifted(tau, n);
        const CMatrix resid = q * q - (tau * CMatrix::identity(n) - s_matrix(n));
        const double fq = q.frobenius_norm();
        EXPECT_LE(resid.frobenius_norm(), 1e-8 * fq * fq) << n;
    }
}

TEST(Sqrt, TauOneIsExactlyIMinus2J) {
    for (std::size_t n : {5u, 50u, 200u}) {
        const CMatrix want = CMatrix::identity(n) - Cx(2) * jordan_block(n);
        EXPECT_LT((sqrt_shifted(1.0, n) - want).max_abs(), 1e-14);
        EXPECT_LE(op_norm(want), 3.0);
    }
}

TEST(Ladder, Parse) {
    EXPECT_EQ(parse_ladder("40:120:20"), (std::vector<std::size_t>{40, 60, 80, 100, 120}));
    EXPECT_EQ(parse_ladder("16:256"), (std::vector<std::size_t>{16, 32, 64, 128, 256}));
    EXPECT_EQ(parse_ladder("64:500"), (std::vector<std::size_t>{64, 128, 256}));
    for (const char* bad : {"", "5", "10:5", "0:8", "1:2:3:4", "a:5", "4:8:0", "4:8:-1"})
        EXPECT_THROW(parse_ladder(bad), Error) << bad;
}

TEST(Scan, RadiusValidation) {
    try {
        oscillation_scan(0.6, 1e6, {10});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
    }
    EXPECT_THROW(oscillation_scan(0.0, 1e6, {10}), Error);
}

TEST(Scan, SmallLadderShapes) {
    const auto r = oscillation_scan(0.3, 1e3, {10, 20, 30});
    ASSERT_EQ(r.per_n.size(), 3u);
    ASSERT_EQ(r.contrast.size(), 3u);
    EXPECT_EQ(r.lemma.size(), kTauSamples);
    for (const auto& [n, norm] : r.contrast) EXPECT_LE(norm, 3.0);
    EXPECT_LT(r.per_n[0].min_norm, r.per_n[2].min_norm);
    // Every tau on the circle is at distance r from 1.
    for (const auto& row : r.per_n) EXPECT_NEAR(std::abs(row.argmin_tau - 1.0), 0.3, 1e-12);
    const std::string csv = scan_to_csv(r);
    EXPECT_EQ(csv.rfind("N,min_norm,argmin_tau_re,argmin_tau_im,N_star_flag\n", 0), 0u);
    // min over the 64 samples is no larger than any single sample.
    const CMatrix one = sqrt_shifted(1.0 + 0.3 * std::polar(1.0, 0.0), 20);
    EXPECT_LE(r.per_n[1].min_norm, op_norm(one) * (1 + 1e-12));
}

TEST(Lemma, CoefficientsEventuallyExceedThreshold) {
    const auto rows = lemma_scan(0.075, 1e3, 150);
    ASSERT_EQ(rows.size(), kTauSamples);
    for (const auto& r : rows) {
        EXPECT_NEAR(std::abs(r.t - 0.25), 0.075, 1e-15);
        ASSERT_TRUE(r.first_n.has_value());
        EXPECT_LE(*r.first_n, 150u);
        EXPECT_GT(r.max_coeff, 1e3);
    }
}

TEST(Multiplier, OneIsIdentityAndSqrtBounded) {
    const auto one = multiplier_growth(named_series("one", 64), {8, 64});
    for (const auto& r : one) EXPECT_NEAR(r.norm, 1.0, 1e-14);
    const auto rows = multiplier_growth(named_series("sqrt1mz", 256), parse_ladder("16:256"));
    double prev = 0;
    for (const auto& r : rows) {
        EXPECT_EQ(r.method, "svd");
        EXPECT_LE(r.norm, std::sqrt(2.0) + 0.01);
        EXPECT_GE(r.norm, prev - 1e-12);
        prev = r.norm;
    }
    EXPECT_THROW(multiplier_growth(named_series("one", 8), {16}), Error);
}

TEST(Multiplier, PowerIterationAgreesWithSvd) {
    // Above the dense limit the norm comes from power iteration; compare with a dense SVD at the
    // same size computed here.
    const std::size_t n = kDenseNormLimit + 64;
    const auto q = named_series("log1mz", n);
    const auto rows = multiplier_growth(q, {n});
    ASSERT_EQ(rows[0].method, "power");
    const double dense = op_norm(toeplitz_of_series(q, n));
    EXPECT_LE(rows[0].norm, dense * (1 + 1e-12));
    EXPECT_NEAR(rows[0].norm, dense, 1e-6 * dense);
}
