#include "pslab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pslab/field.hpp"
#include "pslab/parallel.hpp"

namespace pslab {

namespace {

constexpr std::size_t kMaxWitnesses = 10;

json pt(Cx z) { return cx_to_json(z); }

}  // namespace

void PropertyReport::record(double violation, const json& witness) {
    ++samples;
    const double v = std::max(0.0, violation);
    if (v > max_violation || std::isnan(violation)) max_violation = std::isnan(violation) ? INFINITY : v;
    if ((v > tolerance || std::isnan(violation)) && witnesses.size() < kMaxWitnesses) {
        json w = witness;
        w["violation"] = v;
        witnesses.push_back(std::move(w));
    }
}

void PropertyReport::finalize() { pass = max_violation <= tolerance; }

json report_to_json(const PropertyReport& r) {
    json j{{"name", r.name},
           {"samples", r.samples},
           {"excluded", r.excluded},
           {"max_violation", r.max_violation},
           {"tolerance", r.tolerance},
           {"pass", r.pass},
           {"witnesses", r.witnesses}};
    json m = json::object();
    for (const auto& [k, v] : r.metrics) m[k] = v;
    j["metrics"] = std::move(m);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

PropertyReport check_lip1(const CMatrix& a, const std::vector<std::pair<Cx, Cx>>& pairs) {
    require(!pairs.empty(), "check_lip1 needs at least one pair");
    PropertyReport rep("lip1", kLipTol);
    std::vector<Cx> pts;
    for (const auto& [z, w] : pairs) {
        pts.push_back(z);
        pts.push_back(w);
    }
    const auto psi = psi_at(a, pts);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [z, w] = pairs[k];
        const double lhs = std::abs(psi[2 * k] - psi[2 * k + 1]);
        rep.record(lhs - std::abs(z - w), {{"z", pt(z)}, {"w", pt(w)}});
    }
    rep.finalize();
    return rep;
}

PropertyReport check_band(const CMatrix& a, const std::vector<Cx>& zs) {
    require(!zs.empty(), "check_band needs at least one point");
    PropertyReport rep("band", kBandTol);
    const double norm = op_norm(a);
    const auto psi = psi_at(a, zs);
    std::vector<double> rho(zs.size());
    parallel_for(zs.size(), [&](std::size_t k) { rho[k] = support_function(a, std::arg(zs[k])); });
    double max_gap = 0.0;
    for (std::size_t k = 0; k < zs.size(); ++k) {
        const double r = std::abs(zs[k]);
        const double p = rho[k];
        if (!(r > p)) {
            ++rep.excluded;
            continue;
        }
        const double lower = r - p;
        const double upper = std::sqrt(std::max(0.0, r * r - 2.0 * p * r + norm * norm));
        const double gap_bound = (norm * norm - p * p) / (2.0 * (r - p));
        const double v_lower = lower - psi[k];
        const double v_upper = psi[k] - upper;
        const double v_gap = std::abs((r - psi[k]) - p) - gap_bound;
        max_gap = std::max(max_gap, upper - lower);
        rep.record(std::max({v_lower, v_upper, v_gap}),
                   {{"z", pt(zs[k])}, {"psi", psi[k]}, {"rho", p}, {"lower", lower}, {"upper", upper}});
    }
    rep.metrics["norm"] = norm;
    rep.metrics["max_band_width"] = max_gap;
    if (rep.excluded > 0) rep.note = "samples with |z| <= rho_theta excluded (precondition)";
    rep.finalize();
    return rep;
}

PropertyReport check_ratio(const CMatrix& a, const std::vector<std::pair<Cx, Cx>>& pairs, double c) {
    require(!pairs.empty(), "check_ratio needs at least one pair");
    const double norm = op_norm(a);
    if (!(c > norm)) fail(ErrorKind::precondition, "check_ratio requires c > ||A||");
    PropertyReport rep("ratio", kRatioTol);
    const double eta = norm / (c * c);
    std::vector<Cx> pts;
    for (const auto& [z, w] : pairs) {
        pts.push_back(z);
        pts.push_back(w);
    }
    const auto psi = psi_at(a, pts);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [z, w] = pairs[k];
        const double pz = psi[2 * k], pw = psi[2 * k + 1];
        if (std::abs(z) < c || std::abs(w) < c || pz <= 0.0 || pw <= 0.0) {
            ++rep.excluded;
            continue;
        }
        const double qz = pz / std::abs(z), qw = pw / std::abs(w);
        const double d = std::abs(z - w);
        const double eps_zw = norm * d / (std::abs(w) * pz);
        const double eps_wz = norm * d / (std::abs(z) * pw);
        const double v1 = qw - qz * (1.0 + eps_zw);
        const double v2 = qz - qw * (1.0 + eps_wz);
        const double v3 = std::abs(qz - qw) - eta * d;
        rep.record(std::max({v1, v2, v3}), {{"z", pt(z)}, {"w", pt(w)}});
    }
    rep.metrics["norm"] = norm;
    rep.metrics["c"] = c;
    rep.metrics["eta"] = eta;
    if (rep.excluded > 0) rep.note = "pairs with |z| < c excluded (precondition)";
    rep.finalize();
    return rep;
}

PropertyReport check_semiconvex(const CMatrix& a, const std::vector<Segment>& segments) {
    require(!segments.empty(), "check_semiconvex needs at least one segment");
    PropertyReport rep("semiconvex", kSemiconvexTol);
    constexpr int kSamples = 33;
    constexpr int kHalf = 16;
    std::vector<Cx> pts;
    pts.reserve(segments.size() * kSamples);
    for (const auto& s : segments)
        for (int k = 0; k < kSamples; ++k)
            pts.push_back(s.mu + s.eta * (static_cast<double>(k - kHalf) / kHalf));
    const auto psi = psi_at(a, pts);

    for (std::size_t s = 0; s < segments.size(); ++s) {
        const double* p = psi.data() + s * kSamples;
        const double min_psi = *std::min_element(p, p + kSamples);
        if (!(min_psi > kSpectrumMargin)) {
            ++rep.excluded;
            continue;
        }
        const double cc = 2.0 / (min_psi * min_psi * min_psi);
        const double eta2 = std::norm(segments[s].eta);
        auto u = [&](int k) { return 1.0 / p[k]; };
        // Endpoints around the midpoint, then 17 interior triples of half-width eta/2.
        double worst = 2.0 * u(kHalf) - u(0) - u(kSamples - 1) - cc * eta2;
        for (int m = 8; m <= 24; ++m) {
            const double lhs = 2.0 * u(m) - u(m - 8) - u(m + 8);
            worst = std::max(worst, lhs - cc * eta2 / 4.0);
        }
        rep.record(worst, {{"mu", pt(segments[s].mu)}, {"eta", pt(segments[s].eta)}, {"C", cc}});
    }
    if (rep.excluded > 0) rep.note = "segments within 1e-6 of the spectrum excluded";
    rep.finalize();
    return rep;
}

PropertyReport check_subharmonic(const CMatrix& a, const std::vector<Disc>& discs) {
    require(!discs.empty(), "check_subharmonic needs at least one disc");
    PropertyReport rep("subharmonic", kSubharmonicTol);
    double worst_excess = 0.0;
    // Ring sampling alone can miss an eigenvalue strictly inside the disc, where -log Psi = +inf.
    const std::vector<Cx> spectrum = eigenvalues(a);
    for (const auto& d : discs) {
        require(d.samples >= 3 && d.radius >= 0.0, "disc needs radius >= 0 and >= 3 samples");
        const auto m = static_cast<std::size_t>(d.samples);
        // Boundary first, then 5 interior rings, then the center.
        std::vector<Cx> pts;
        for (int ring = 6; ring >= 1; --ring)
            for (std::size_t k = 0; k < m; ++k)
                pts.push_back(d.center + std::polar(d.radius * ring / 6.0,
                                                    2.0 * std::numbers::pi * static_cast<double>(k) /
                                                        static_cast<double>(m)));
        pts.push_back(d.center);
        const auto psi = psi_at(a, pts);
        const bool hits_spectrum = std::any_of(spectrum.begin(), spectrum.end(), [&](Cx lam) {
            return std::abs(lam - d.center) <= d.radius + kSpectrumMargin;
        });
        if (hits_spectrum || !(*std::min_element(psi.begin(), psi.end()) > kSpectrumMargin)) {
            ++rep.excluded;
            continue;
        }
        double mean = 0.0, second = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double f = -std::log(psi[k]);
            const double fp = -std::log(psi[(k + 1) % m]);
            const double fm = -std::log(psi[(k + m - 1) % m]);
            mean += f;
            second = std::max(second, std::abs(fp - 2.0 * f + fm));
        }
        mean /= static_cast<double>(m);
        const double center = -std::log(psi.back());
        const double allowance = d.radius * d.radius * second;
        worst_excess = std::max(worst_excess, allowance);
        // Effective tolerance is 1e-6 + allowance.
        rep.record(center - mean - allowance,
                   {{"center", pt(d.center)}, {"radius", d.radius}, {"m", d.samples}, {"allowance", allowance}});
    }
    rep.metrics["max_quadrature_allowance"] = worst_excess;
    if (rep.excluded > 0) rep.note = "discs within 1e-6 of the spectrum excluded";
    rep.finalize();
    return rep;
}

std::vector<PropertyReport> run_property_suite(const CMatrix& a, const std::vector<std::string>& props,
                                               std::size_t samples, Lcg64& rng) {
    require(a.is_square(), "property checks need a square matrix");
    const double norm = std::max(op_norm(a), 1e-3);
    const double s = 1.5 * norm + 0.5;
    const Box box{-s, s, -s, s};
    std::vector<PropertyReport> out;
    for (const auto& p : props) {
        // Each prop draws its own samples in the order listed, so the list order is part of the seed.
        if (p == "lip1") {
            out.push_back(check_lip1(a, sample_pairs(samples, box, rng)));
        } else if (p == "band") {
            out.push_back(check_band(a, sample_annulus(samples, 0.5 * norm, 10.0 * norm, rng)));
        } else if (p == "ratio") {
            const double c = 1.1 * norm;
            out.push_back(check_ratio(a, sample_annulus_pairs(samples, c, 3.0 * c, rng), c));
        } else if (p == "semiconvex") {
            out.push_back(check_semiconvex(a, sample_segments(samples, box, 0.25 * s, rng)));
        } else if (p == "subharmonic") {
            out.push_back(check_subharmonic(a, sample_discs(samples, box, 0.1 * s, 64, rng)));
        } else {
            fail(ErrorKind::invalid_input, "unknown property '" + p + "'");
        }
    }
    return out;
}

}  // namespace pslab
