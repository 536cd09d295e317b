#include "pslab/sampling.hpp"

#include <cmath>
#include <numbers>

namespace pslab {

double Lcg64::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
}

CMatrix random_gaussian_matrix(std::size_t rows, std::size_t cols, Lcg64& rng) {
    CMatrix a(rows, cols);
    for (auto& v : a.data()) v = rng.complex_normal();
    return a;
}

CMatrix random_unitary(std::size_t n, Lcg64& rng) {
    return orthonormalize_columns(random_gaussian_matrix(n, n, rng));
}

std::pair<CMatrix, std::vector<Cx>> random_normal_matrix(std::size_t n, const Box& box, Lcg64& rng) {
    std::vector<Cx> d(n);
    for (auto& v : d) v = {rng.uniform(box.x_min, box.x_max), rng.uniform(box.y_min, box.y_max)};
    const CMatrix u = random_unitary(n, rng);
    return {u * CMatrix::diagonal(d) * u.adjoint(), d};
}

std::vector<Cx> sample_points(std::size_t count, const Box& box, Lcg64& rng) {
    std::vector<Cx> pts(count);
    for (auto& z : pts) z = {rng.uniform(box.x_min, box.x_max), rng.uniform(box.y_min, box.y_max)};
    return pts;
}

std::vector<std::pair<Cx, Cx>> sample_pairs(std::size_t count, const Box& box, Lcg64& rng) {
    std::vector<std::pair<Cx, Cx>> out(count);
    for (auto& [a, b] : out) {
        a = {rng.uniform(box.x_min, box.x_max), rng.uniform(box.y_min, box.y_max)};
        b = {rng.uniform(box.x_min, box.x_max), rng.uniform(box.y_min, box.y_max)};
    }
    return out;
}

std::vector<Cx> sample_annulus(std::size_t count, double r_min, double r_max, Lcg64& rng) {
    std::vector<Cx> pts(count);
    for (auto& z : pts) {
        const double r = rng.uniform(r_min, r_max);
        z = std::polar(r, rng.uniform(0.0, 2.0 * std::numbers::pi));
    }
    return pts;
}

std::vector<std::pair<Cx, Cx>> sample_annulus_pairs(std::size_t count, double r_min, double r_max,
                                                    Lcg64& rng) {
    std::vector<std::pair<Cx, Cx>> out(count);
    for (auto& [a, b] : out) {
        const auto two = sample_annulus(2, r_min, r_max, rng);
        a = two[0];
        b = two[1];
    }
    return out;
}

std::vector<Segment> sample_segments(std::size_t count, const Box& box, double max_half_length,
                                     Lcg64& rng) {
    std::vector<Segment> out(count);
    for (auto& s : out) {
        s.mu = {rng.uniform(box.x_min, box.x_max), rng.uniform(box.y_min, box.y_max)};
        s.eta = std::polar(rng.uniform(0.0, max_half_length), rng.uniform(0.0, 2.0 * std::numbers::pi));
    }
    return out;
}

std::vector<Disc> sample_discs(std::size_t count, const Box& box, double max_radius, int samples,
                               Lcg64& rng) {
    std::vector<Disc> out(count);
    for (auto& d : out) {
        d.center = {rng.uniform(box.x_min, box.x_max), rng.uniform(box.y_min, box.y_max)};
        d.radius = rng.uniform(0.0, max_radius);
        d.samples = samples;
    }
    return out;
}

}  // namespace pslab
