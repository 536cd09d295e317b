#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pslab/linalg.hpp"

namespace pslab {

/// 64-bit LCG, x <- a x + c mod 2^64 with Knuth's MMIX constants.
/// Only the high bits are used for doubles; the low bits of a power-of-two LCG are weak.
class Lcg64 {
public:
    static constexpr std::uint64_t multiplier = 6364136223846793005ULL;
    static constexpr std::uint64_t increment = 1442695040888963407ULL;

    explicit Lcg64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() noexcept {
        state_ = state_ * multiplier + increment;
        return state_;
    }
    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Box-Muller (cached second variate).
    double normal() noexcept;
    Cx complex_normal() noexcept { return {normal(), normal()}; }

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct Box {
    double x_min, x_max, y_min, y_max;
};

struct Segment {
    Cx mu;
    Cx eta;
};

struct Disc {
    Cx center;
    double radius;
    int samples;
};

CMatrix random_gaussian_matrix(std::size_t rows, std::size_t cols, Lcg64& rng);
/// Q factor of a complex Gaussian matrix (Haar-distributed up to the phase convention).
CMatrix random_unitary(std::size_t n, Lcg64& rng);
/// U diag(d) U^* with d uniform in box; returns the matrix and its eigenvalues.
std::pair<CMatrix, std::vector<Cx>> random_normal_matrix(std::size_t n, const Box& box, Lcg64& rng);

std::vector<Cx> sample_points(std::size_t count, const Box& box, Lcg64& rng);
std::vector<std::pair<Cx, Cx>> sample_pairs(std::size_t count, const Box& box, Lcg64& rng);
/// Pairs with both points on the annulus r_min <= |z| <= r_max.
std::vector<std::pair<Cx, Cx>> sample_annulus_pairs(std::size_t count, double r_min, double r_max,
                                                    Lcg64& rng);
std::vector<Cx> sample_annulus(std::size_t count, double r_min, double r_max, Lcg64& rng);
std::vector<Segment> sample_segments(std::size_t count, const Box& box, double max_half_length,
                                     Lcg64& rng);
std::vector<Disc> sample_discs(std::size_t count, const Box& box, double max_radius, int samples,
                               Lcg64& rng);

}  // namespace pslab
