#include <cstring>
#include <filesystem>

#include <gtest/gtest.h>

#include "gen.hpp"
#include "pslab/matrix_io.hpp"
#include "pslab/sampling.hpp"

using namespace pslab;

TEST(MatrixJson, RoundTrip) {
    CMatrix a(2, 3, {Cx(1, 2), Cx(0.1, -0.3), Cx(1e-300, 5e300), Cx(-0.0, 0), Cx(3), Cx(0, 1)});
    const CMatrix b = matrix_from_json(json::parse(matrix_to_json(a).dump()));
    EXPECT_EQ(a, b);
}

TEST(MatrixJson, RejectsBadShapes) {
    EXPECT_THROW(matrix_from_json(json::parse(R"({"rows":2,"cols":2,"data":[[1,0]]})")), Error);
    EXPECT_THROW(matrix_from_json(json::parse(R"({"rows":0,"cols":0,"data":[]})")), Error);
    EXPECT_THROW(matrix_from_json(json::parse(R"({"rows":1,"cols":1,"data":[["x",0]]})")), Error);
    EXPECT_THROW(matrix_from_json(json::parse(R"([1,2,3])")), Error);
}

TEST(Files, MissingInputNamesPath) {
    try {
        read_json_file("/nonexistent/dir/in.json");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
        EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/in.json"), std::string::npos);
    }
}

TEST(Files, MalformedJsonIsInvalidInput) {
    const auto p = std::filesystem::temp_directory_path() / "pslab_test_bad.json";
    write_text_file(p, "{not json");
    try {
        read_json_file(p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
    }
    std::filesystem::remove(p);
}

TEST(Files, UnwritableIsIo) {
    try {
        write_text_file("/proc/pslab_cannot_write/x.txt", "x");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::io);
    }
}

TEST(FmtNum, ShortAndExact) {
    EXPECT_EQ(fmt_num(0.1), "0.1");
    EXPECT_EQ(fmt_num(1.0), "1");
    EXPECT_EQ(fmt_num(-2.5e-7), "-2.5e-07");
}

TEST(FmtNum, RoundTripsRandomBits) {
    gen::for_all(7, 2000, [](gen::Gen& g) {
        std::uint64_t bits = g.rng.next();
        double v;
        std::memcpy(&v, &bits, sizeof v);
        if (!std::isfinite(v)) return;
        const double back = std::strtod(fmt_num(v).c_str(), nullptr);
        EXPECT_EQ(std::memcmp(&back, &v, sizeof v), 0) << fmt_num(v);
    });
}

TEST(Lcg, DeterministicAndInRange) {
    Lcg64 a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        EXPECT_EQ(u, b.uniform());
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(Lcg, NormalMoments) {
    Lcg64 r(1);
    const int n = 200000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        s += x;
        s2 += x * x;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(Sampling, AnnulusAndBox) {
    Lcg64 r(2);
    for (Cx z : sample_annulus(500, 0.5, 2.0, r)) {
        EXPECT_GE(std::abs(z), 0.5 - 1e-15);
        EXPECT_LE(std::abs(z), 2.0 + 1e-15);
    }
    for (auto [z, w] : sample_annulus_pairs(200, 1.0, 3.0, r)) {
        EXPECT_GE(std::abs(z), 1.0 - 1e-15);
        EXPECT_GE(std::abs(w), 1.0 - 1e-15);
    }
    for (Cx z : sample_points(500, Box{-1, 2, 3, 4}, r)) {
        EXPECT_TRUE(z.real() >= -1 && z.real() <= 2 && z.imag() >= 3 && z.imag() <= 4);
    }
}

TEST(Sampling, NormalMatrixHasGivenEigenvalues) {
    Lcg64 r(3);
    auto [a, eig] = random_normal_matrix(6, Box{-1, 1, -1, 1}, r);
    // Normality: A A^* = A^* A.
    EXPECT_LT((a * a.adjoint() - a.adjoint() * a).max_abs(), 1e-13);
    double tr = 0;
    Cx trace{}, sum{};
    for (std::size_t i = 0; i < 6; ++i) trace += a(i, i);
    for (Cx l : eig) sum += l;
    tr = std::abs(trace - sum);
    EXPECT_LT(tr, 1e-13);
}
