#include "pslab/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "pslab/field.hpp"
#include "pslab/parallel.hpp"
#include "pslab/sampling.hpp"

namespace pslab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Disc as ellipse so that mixed inputs interpolate.
std::pair<double, double> axes(const DomainSpec& d) {
    if (d.kind == DomainKind::disc) return {d.radius, d.radius};
    return {d.a, d.b};
}

double signed_area(const std::vector<Cx>& c) {
    double s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        const Cx a = c[k], b = c[(k + 1) % c.size()];
        s += a.real() * b.imag() - b.real() * a.imag();
    }
    return 0.5 * s;
}

template <class F>
void stage_wrap(const std::string& stage, F&& f) {
    try {
        f();
    } catch (const StageError&) {
        throw;
    } catch (const Error& e) {
        throw StageError(stage, e.kind(), e.what());
    }
}

}  // namespace

ShapeProblem problem_from_json(const json& j) {
    require(j.is_object(), "shape problem must be a JSON object");
    require(j.contains("domains") && j["domains"].is_array() && j["domains"].size() >= 2,
            "shape problem needs at least two domains");
    require(j.contains("eps1") && j["eps1"].is_number(), "shape problem needs numeric eps1");
    ShapeProblem p;
    for (const auto& d : j["domains"]) p.domains.push_back(domain_from_json(d));
    p.eps1 = j["eps1"].get<double>();
    require(std::isfinite(p.eps1) && p.eps1 > 0.0, "eps1 must be positive");
    return p;
}

double boundary_gap(const DomainSpec& outer, const DomainSpec& inner, std::size_t samples) {
    double d = INFINITY;
    for (Cx z : inner.boundary_samples(samples)) d = std::min(d, outer.boundary_distance(z));
    for (Cx z : outer.boundary_samples(samples)) d = std::min(d, inner.boundary_distance(z));
    return d;
}

void check_nesting(const std::vector<DomainSpec>& domains, std::size_t samples) {
    for (std::size_t j = 1; j < domains.size(); ++j) {
        const DomainSpec& outer = domains[j - 1];
        const DomainSpec& inner = domains[j];
        for (Cx z : inner.boundary_samples(samples))
            if (!outer.contains(z))
                fail(ErrorKind::nesting, "domain " + std::to_string(j) + " is not inside domain " + std::to_string(j - 1));
        if (!(boundary_gap(outer, inner, samples) > 1e-12))
            fail(ErrorKind::nesting, "domains " + std::to_string(j - 1) + " and " + std::to_string(j) +
                                         " touch; nesting must be strict");
    }
}

std::vector<DomainSpec> plan_domains(const ShapeProblem& p, const ShapeOptions& opts) {
    require(p.domains.size() >= 2, "need G_0 and at least one inner domain");
    for (const auto& d : p.domains) {
        if (d.kind == DomainKind::custom)
            fail(ErrorKind::invalid_input, "construction supports disc and ellipse domains only");
        d.validate();
    }
    check_nesting(p.domains, opts.boundary_samples);
    const double w = opts.interpolation;
    std::vector<DomainSpec> omegas;
    for (std::size_t j = 1; j < p.domains.size(); ++j) {
        const DomainSpec& g0 = p.domains[j - 1];
        const DomainSpec& g1 = p.domains[j];
        const auto [a0, b0] = axes(g0);
        const auto [a1, b1] = axes(g1);
        const Cx c = (1.0 - w) * g0.center + w * g1.center;
        DomainSpec om = (g0.kind == DomainKind::disc && g1.kind == DomainKind::disc)
                            ? DomainSpec::disc((1.0 - w) * a0 + w * a1, c)
                            : DomainSpec::ellipse((1.0 - w) * a0 + w * a1, (1.0 - w) * b0 + w * b1, c);
        om.validate();
        omegas.push_back(om);
    }
    std::vector<DomainSpec> chain;
    for (std::size_t j = 0; j < omegas.size(); ++j) {
        chain.push_back(p.domains[j]);
        chain.push_back(omegas[j]);
    }
    chain.push_back(p.domains.back());
    check_nesting(chain, opts.boundary_samples);

    const double achieved = boundary_gap(p.domains[0], omegas[0], opts.boundary_samples);
    if (!(p.eps1 < achieved)) {
        char rounded[32];
        std::snprintf(rounded, sizeof rounded, "%.6g", achieved);
        throw InfeasibleEpsilon("eps1 = " + fmt_num(p.eps1) + " is not below dist(bd G_0, bd Omega_1) = " + rounded +
                                    " (" + fmt_num(achieved) + ")",
                                achieved);
    }
    return omegas;
}

std::vector<Cx> closure_samples(const DomainSpec& g, const ShapeOptions& opts) {
    std::vector<Cx> pts = g.boundary_samples(opts.boundary_samples);
    // Radial-angular grid: sqrt(n) radii by sqrt(n) angles, angles offset by a seeded shift.
    Lcg64 rng(opts.seed);
    const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(opts.interior_samples))));
    const Cx c = g.conjugate ? std::conj(g.center) : g.center;
    std::size_t added = 0;
    for (std::size_t i = 0; i < side && added < opts.interior_samples; ++i) {
        const double s = (static_cast<double>(i) + 0.5) / static_cast<double>(side);
        const double shift = rng.uniform();
        for (std::size_t j = 0; j < side && added < opts.interior_samples; ++j, ++added) {
            const double t = kTwoPi * (static_cast<double>(j) + shift) / static_cast<double>(side);
            Cx bp;
            if (g.kind == DomainKind::custom) {
                const auto& b = pts;
                bp = b[static_cast<std::size_t>(t / kTwoPi * static_cast<double>(b.size())) % b.size()];
            } else {
                bp = g.boundary(t).first;
            }
            pts.push_back(c + s * (bp - c));
        }
    }
    pts.push_back(c);
    return pts;
}

std::vector<Cx> exterior_ring(const DomainSpec& g, double offset, std::size_t samples) {
    const auto b = g.boundary_samples(samples);
    const std::size_t m = b.size();
    const double orient = signed_area(b) >= 0.0 ? 1.0 : -1.0;
    std::vector<Cx> ring(m);
    for (std::size_t k = 0; k < m; ++k) {
        const Cx tangent = b[(k + 1) % m] - b[(k + m - 1) % m];
        // Outward normal of a counterclockwise curve is the tangent turned clockwise.
        const Cx normal = Cx{0.0, -orient} * tangent / std::abs(tangent);
        ring[k] = b[k] + offset * normal;
    }
    return ring;
}

double psi_blocks(const std::vector<CMatrix>& blocks, Cx z) {
    double best = INFINITY;
    for (const auto& b : blocks) best = std::min(best, psi_eval(b, z));
    return best;
}

BlockChoice choose_block(const DomainSpec& omega, const std::vector<Cx>& inner, double eps,
                         const std::vector<Cx>& outer, std::size_t cap) {
    require(std::isfinite(eps) && eps > 0.0, "eps must be positive");
    require(!inner.empty(), "choose_block needs inner samples");
    DomainSpec built = omega;
    built.conjugate = !omega.conjugate;
    double last_inner = INFINITY, last_outer = -INFINITY;
    std::size_t last_n = 0;
    for (std::size_t n = 8; n <= cap; n *= 2) {
        NilpotentBlock blk = nilpotent_block(built, n);
        const auto pin = psi_at(blk.matrix, inner);
        const double max_inner = *std::max_element(pin.begin(), pin.end());
        double min_outer = INFINITY;
        if (!outer.empty()) {
            const auto pout = psi_at(blk.matrix, outer);
            min_outer = *std::min_element(pout.begin(), pout.end());
        }
        last_inner = max_inner;
        last_outer = min_outer;
        last_n = n;
        if (max_inner <= 0.5 * eps && min_outer > eps) return {n, std::move(blk), max_inner, min_outer};
    }
    fail(ErrorKind::construction, "no block size up to cap " + std::to_string(cap) + " works for eps=" + fmt_num(eps) +
                                      " (N=" + std::to_string(last_n) + ": max inner Psi " + fmt_num(last_inner) +
                                      " vs eps/2, min outer Psi " + fmt_num(last_outer) + ")");
}

double choose_epsilon(const std::vector<CMatrix>& prev_blocks, const std::vector<Cx>& samples, double eps_prev,
                      double delta) {
    require(!prev_blocks.empty(), "choose_epsilon needs previous blocks");
    require(!samples.empty(), "choose_epsilon needs samples");
    require(eps_prev > 0.0 && delta > 0.0, "eps_prev and delta must be positive");
    // A sample on the spectrum gives an infinite resolvent; nudge it along the curve instead.
    std::vector<Cx> pts = samples;
    double r = 0.0;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        double psi = psi_blocks(prev_blocks, pts[k]);
        for (int retry = 0; retry < 8 && !(psi > 0.0); ++retry) {
            const Cx next = pts[(k + 1) % pts.size()];
            pts[k] = 0.5 * (pts[k] + next);
            psi = psi_blocks(prev_blocks, pts[k]);
        }
        if (!(psi > 0.0)) fail(ErrorKind::construction, "resolvent sample stuck on the spectrum");
        r = std::max(r, 1.0 / psi);
    }
    return 0.5 * std::min({eps_prev, delta, 1.0 / r});
}

std::vector<InclusionLevel> inclusion_levels(const std::vector<DomainSpec>& g, const std::vector<double>& eps,
                                             double ring_offset, const ShapeOptions& opts) {
    require(g.size() == eps.size() + 1, "need one more domain than eps values");
    std::vector<InclusionLevel> levels;
    for (std::size_t k = 1; k < g.size(); ++k) {
        InclusionLevel lv;
        lv.eps = eps[k - 1];
        lv.outside = g[k - 1].boundary_samples(opts.boundary_samples);
        const auto ring = exterior_ring(g[k - 1], ring_offset, opts.boundary_samples);
        lv.outside.insert(lv.outside.end(), ring.begin(), ring.end());
        lv.inside = closure_samples(g[k], opts);
        levels.push_back(std::move(lv));
    }
    return levels;
}

PropertyReport verify_inclusions(const std::vector<CMatrix>& blocks, const std::vector<InclusionLevel>& levels) {
    require(!blocks.empty(), "verify_inclusions needs at least one block");
    PropertyReport rep("inclusions", 0.0);
    constexpr double kRel = 1e-9;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const InclusionLevel& lv = levels[k];
        const double floor = kRel * lv.eps;
        const auto pout = evaluate_at([&](Cx z) { return psi_blocks(blocks, z); }, lv.outside);
        const auto pin = evaluate_at([&](Cx z) { return psi_blocks(blocks, z); }, lv.inside);
        double margin_out = INFINITY, margin_in = INFINITY;
        for (std::size_t i = 0; i < pout.size(); ++i) {
            margin_out = std::min(margin_out, pout[i] - lv.eps);
            rep.record(lv.eps + floor - pout[i],
                       {{"level", k + 1}, {"side", "outside"}, {"z", cx_to_json(lv.outside[i])}, {"psi", pout[i]}});
        }
        for (std::size_t i = 0; i < pin.size(); ++i) {
            margin_in = std::min(margin_in, lv.eps - pin[i]);
            rep.record(pin[i] - (lv.eps - floor),
                       {{"level", k + 1}, {"side", "inside"}, {"z", cx_to_json(lv.inside[i])}, {"psi", pin[i]}});
        }
        double spacing = 0.0;
        for (std::size_t i = 0; i + 1 < lv.outside.size(); ++i)
            spacing = std::max(spacing, std::abs(lv.outside[i + 1] - lv.outside[i]));
        const std::string tag = std::to_string(k + 1);
        rep.metrics["eps_" + tag] = lv.eps;
        rep.metrics["margin_outside_" + tag] = margin_out;
        rep.metrics["margin_inside_" + tag] = margin_in;
        rep.metrics["sample_spacing_" + tag] = spacing;
    }
    rep.finalize();
    bool positive = true;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const std::string tag = std::to_string(k + 1);
        positive = positive && rep.metrics["margin_outside_" + tag] > 0.0 && rep.metrics["margin_inside_" + tag] > 0.0;
    }
    rep.pass = rep.pass && positive;
    return rep;
}

ShapeResult construct(const ShapeProblem& p, const ShapeOptions& opts) {
    ShapeResult r;
    stage_wrap("plan", [&] { r.omegas = plan_domains(p, opts); });
    const std::size_t m = r.omegas.size();

    stage_wrap("delta", [&] {
        r.delta = INFINITY;
        for (const auto& om : r.omegas)
            for (const auto& g : p.domains) r.delta = std::min(r.delta, boundary_gap(g, om, opts.boundary_samples));
        if (!(r.delta > 0.0)) fail(ErrorKind::nesting, "delta is zero");
    });

    std::vector<CMatrix> mats;
    for (std::size_t k = 1; k <= m; ++k) {
        const std::string tag = std::to_string(k);
        double eps_k = p.eps1;
        if (k > 1) {
            stage_wrap("epsilon " + tag, [&] {
                std::vector<Cx> s = p.domains[k - 1].boundary_samples(opts.boundary_samples);
                const auto ring = exterior_ring(p.domains[k - 1], 0.5 * r.delta, opts.boundary_samples);
                s.insert(s.end(), ring.begin(), ring.end());
                eps_k = choose_epsilon(mats, s, r.eps.back(), r.delta);
            });
        }
        r.eps.push_back(eps_k);
        stage_wrap("block " + tag, [&] {
            std::vector<Cx> outer;
            if (k == 1) {
                outer = p.domains[0].boundary_samples(opts.boundary_samples);
                const auto ring = exterior_ring(p.domains[0], 0.5 * r.delta, opts.boundary_samples);
                outer.insert(outer.end(), ring.begin(), ring.end());
            }
            BlockChoice bc = choose_block(r.omegas[k - 1], closure_samples(p.domains[k], opts), eps_k, outer, opts.cap);
            r.ns.push_back(bc.n);
            mats.push_back(bc.block.matrix);
            r.blocks.push_back(std::move(bc.block));
        });
    }
    r.t = block_diag(mats);

    stage_wrap("verify", [&] {
        r.verification = verify_inclusions(mats, inclusion_levels(p.domains, r.eps, 0.5 * r.delta, opts));
        // Block-diagonal law on random points around the outer domain.
        Lcg64 rng(opts.seed ^ 0x9E3779B97F4A7C15ULL);
        const double s = 1.5 * p.domains[0].max_modulus();
        const auto zs = sample_points(100, {-s, s, -s, s}, rng);
        const auto whole = psi_at(r.t, zs);
        for (std::size_t i = 0; i < zs.size(); ++i)
            r.blockwise_law_deviation = std::max(r.blockwise_law_deviation, std::abs(whole[i] - psi_blocks(mats, zs[i])));
        r.verification.metrics["blockwise_law_deviation"] = r.blockwise_law_deviation;
    });
    return r;
}

json shape_result_to_json(const ShapeResult& r, bool include_blocks) {
    json omegas = json::array();
    for (const auto& o : r.omegas) omegas.push_back(domain_to_json(o));
    json blocks = json::array();
    for (const auto& b : r.blocks) {
        json jb{{"n", b.n}, {"residual", b.residual}, {"basis_size", b.basis_size}, {"cond_estimate", b.cond_estimate}};
        if (include_blocks) jb["matrix"] = matrix_to_json(b.matrix);
        blocks.push_back(std::move(jb));
    }
    std::size_t total = 0;
    for (std::size_t n : r.ns) total += n;
    return {{"omegas", std::move(omegas)},
            {"eps", r.eps},
            {"Ns", r.ns},
            {"total_size", total},
            {"delta", r.delta},
            {"blocks", std::move(blocks)},
            {"verification", report_to_json(r.verification)},
            {"pass", r.verification.pass}};
}

}  // namespace pslab
