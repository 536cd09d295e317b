#include "pslab/hardy.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pslab/parallel.hpp"

namespace pslab {

namespace {

constexpr std::size_t kDenseSamples = 8192;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

lapack_complex_double* lp(Cx* p) { return reinterpret_cast<lapack_complex_double*>(p); }

// Pairwise sum of f(lo..hi-1); fixed association order regardless of threading.
template <class F>
Cx pairwise(std::size_t lo, std::size_t hi, const F& f) {
    if (hi - lo <= 16) {
        Cx s{};
        for (std::size_t q = lo; q < hi; ++q) s += f(q);
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise(lo, mid, f) + pairwise(mid, hi, f);
}

// Hermitian Q^* W Q for an m x K matrix of node values.
CMatrix weighted_gram(const CMatrix& vals, const std::vector<double>& w) {
    const std::size_t m = vals.rows(), k = vals.cols();
    CMatrix g(k, k);
    parallel_for(k, [&](std::size_t j) {
        for (std::size_t c = j; c < k; ++c)
            g(j, c) = pairwise(0, m, [&](std::size_t q) { return w[q] * vals(q, c) * std::conj(vals(q, j)); });
    });
    for (std::size_t j = 0; j < k; ++j) {
        g(j, j) = g(j, j).real();
        for (std::size_t c = j + 1; c < k; ++c) g(c, j) = std::conj(g(j, c));
    }
    return g;
}

// Upper Cholesky factor R (G = R^* R) inverted in place: returns R^{-1}, or nullopt on breakdown.
std::optional<CMatrix> inverse_cholesky(const CMatrix& g) {
    const std::size_t k = g.rows();
    const auto n = static_cast<lapack_int>(k);
    std::vector<Cx> cm(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) cm[j * k + i] = g(i, j);
    if (LAPACKE_zpotrf(LAPACK_COL_MAJOR, 'U', n, lp(cm.data()), n) != 0) return std::nullopt;
    if (LAPACKE_ztrtri(LAPACK_COL_MAJOR, 'U', 'N', n, lp(cm.data()), n) != 0) return std::nullopt;
    CMatrix r(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) r(i, j) = cm[j * k + i];
    return r;
}

CMatrix leading(const CMatrix& a, std::size_t k) { return a.block(0, 0, k, k); }

double defect_from_identity(const CMatrix& g) {
    double d = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) d = std::max(d, std::abs(g(i, j) - (i == j ? 1.0 : 0.0)));
    return d;
}

double segment_distance(Cx p, Cx a, Cx b) {
    const Cx ab = b - a;
    const double len2 = std::norm(ab);
    double t = len2 > 0.0 ? ((p - a) * std::conj(ab)).real() / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

}  // namespace

DomainSpec DomainSpec::disc(double r, Cx c) {
    DomainSpec d;
    d.kind = DomainKind::disc;
    d.radius = r;
    d.center = c;
    return d;
}

DomainSpec DomainSpec::ellipse(double a, double b, Cx c) {
    DomainSpec d;
    d.kind = DomainKind::ellipse;
    d.a = a;
    d.b = b;
    d.center = c;
    return d;
}

DomainSpec DomainSpec::custom(std::vector<Cx> pts) {
    DomainSpec d;
    d.kind = DomainKind::custom;
    d.samples = std::move(pts);
    return d;
}

void DomainSpec::validate() const {
    require(is_finite(center), "domain center must be finite");
    switch (kind) {
        case DomainKind::disc:
            require(std::isfinite(radius) && radius > 0.0, "disc radius must be positive");
            break;
        case DomainKind::ellipse:
            require(std::isfinite(a) && a > 0.0 && std::isfinite(b) && b > 0.0, "ellipse axes must be positive");
            break;
        case DomainKind::custom:
            require(samples.size() >= 3, "custom domain needs at least 3 boundary samples");
            for (Cx z : samples) require(is_finite(z), "custom boundary samples must be finite");
            break;
    }
    require(contains(0.0) && boundary_distance(0.0) > 0.0, "domain must contain the origin strictly inside");
}

std::pair<Cx, double> DomainSpec::boundary(double t) const {
    Cx p;
    double speed = 0.0;
    switch (kind) {
        case DomainKind::disc:
            p = center + std::polar(radius, t);
            speed = radius;
            break;
        case DomainKind::ellipse: {
            const double c = std::cos(t), s = std::sin(t);
            p = center + Cx{a * c, b * s};
            speed = std::hypot(a * s, b * c);
            break;
        }
        case DomainKind::custom:
            fail(ErrorKind::invalid_input, "custom domains have no parametrization");
    }
    return {conjugate ? std::conj(p) : p, speed};
}

std::vector<Cx> DomainSpec::boundary_samples(std::size_t m) const {
    if (kind == DomainKind::custom) {
        std::vector<Cx> out = samples;
        if (conjugate)
            for (auto& z : out) z = std::conj(z);
        return out;
    }
    std::vector<Cx> out(m);
    for (std::size_t k = 0; k < m; ++k) out[k] = boundary(kTwoPi * static_cast<double>(k) / static_cast<double>(m)).first;
    return out;
}

bool DomainSpec::contains(Cx z) const {
    if (kind == DomainKind::disc) return std::abs(z - (conjugate ? std::conj(center) : center)) < radius;
    const auto curve = boundary_samples(kDenseSamples);
    double total = 0.0;
    for (std::size_t k = 0; k < curve.size(); ++k)
        total += std::arg((curve[(k + 1) % curve.size()] - z) / (curve[k] - z));
    return std::lround(total / kTwoPi) != 0;
}

double DomainSpec::boundary_distance(Cx z) const {
    if (kind == DomainKind::disc) return std::abs(std::abs(z - (conjugate ? std::conj(center) : center)) - radius);
    const auto curve = boundary_samples(kDenseSamples);
    const std::size_t m = curve.size();
    if (kind == DomainKind::custom) {
        double d = INFINITY;
        for (std::size_t k = 0; k < m; ++k) d = std::min(d, segment_distance(z, curve[k], curve[(k + 1) % m]));
        return d;
    }
    std::size_t best = 0;
    double bd = INFINITY;
    for (std::size_t k = 0; k < m; ++k) {
        const double d = std::abs(curve[k] - z);
        if (d < bd) {
            bd = d;
            best = k;
        }
    }
    const double h = kTwoPi / static_cast<double>(m);
    double lo = (static_cast<double>(best) - 1.0) * h, hi = (static_cast<double>(best) + 1.0) * h;
    auto f = [&](double t) { return std::abs(boundary(t).first - z); };
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    return std::min({bd, f1, f2});
}

double DomainSpec::max_modulus() const {
    if (kind == DomainKind::disc) return std::abs(center) + radius;
    double s = 0.0;
    for (Cx z : boundary_samples(kDenseSamples)) s = std::max(s, std::abs(z));
    return s;
}

json domain_to_json(const DomainSpec& d) {
    json j;
    switch (d.kind) {
        case DomainKind::disc:
            j = {{"kind", "disc"}, {"center", cx_to_json(d.center)}, {"radius", d.radius}};
            break;
        case DomainKind::ellipse:
            j = {{"kind", "ellipse"}, {"center", cx_to_json(d.center)}, {"a", d.a}, {"b", d.b}};
            break;
        case DomainKind::custom: {
            json s = json::array();
            for (Cx z : d.samples) s.push_back(cx_to_json(z));
            j = {{"kind", "custom"}, {"samples", std::move(s)}};
            break;
        }
    }
    if (d.conjugate) j["conjugate"] = true;
    return j;
}

DomainSpec domain_from_json(const json& j) {
    require(j.is_object() && j.contains("kind") && j["kind"].is_string(), "domain JSON needs a string 'kind'");
    const std::string kind = j["kind"].get<std::string>();
    auto number = [&](const char* key) {
        require(j.contains(key) && j[key].is_number(), std::string("domain needs numeric '") + key + "'");
        return j[key].get<double>();
    };
    DomainSpec d;
    if (kind == "disc") {
        d = DomainSpec::disc(number("radius"));
    } else if (kind == "ellipse") {
        d = DomainSpec::ellipse(number("a"), number("b"));
    } else if (kind == "custom") {
        require(j.contains("samples") && j["samples"].is_array(), "custom domain needs 'samples'");
        std::vector<Cx> pts;
        for (const auto& e : j["samples"]) pts.push_back(cx_from_json(e));
        d = DomainSpec::custom(std::move(pts));
    } else {
        fail(ErrorKind::invalid_input, "unknown domain kind '" + kind + "'");
    }
    if (j.contains("center")) d.center = cx_from_json(j["center"]);
    d.conjugate = j.value("conjugate", false);
    d.validate();
    return d;
}

double QuadratureRule::total_weight() const {
    return pairwise(0, weights.size(), [&](std::size_t q) { return Cx{weights[q]}; }).real();
}

QuadratureRule quadrature(const DomainSpec& d, std::size_t m) {
    QuadratureRule rule;
    if (d.kind == DomainKind::custom) {
        rule.nodes = d.boundary_samples(0);
        const std::size_t n = rule.nodes.size();
        require(n >= 3, "custom domain needs at least 3 samples");
        rule.weights.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            rule.weights[k] = 0.5 * (std::abs(rule.nodes[(k + 1) % n] - rule.nodes[k]) +
                                     std::abs(rule.nodes[k] - rule.nodes[(k + n - 1) % n]));
        return rule;
    }
    require(m >= 16, "quadrature needs m >= 16 nodes");
    rule.nodes.resize(m);
    rule.weights.resize(m);
    const double h = kTwoPi / static_cast<double>(m);
    for (std::size_t k = 0; k < m; ++k) {
        const auto [p, speed] = d.boundary(h * static_cast<double>(k));
        rule.nodes[k] = p;
        rule.weights[k] = speed * h;
    }
    return rule;
}

double equilibrated_cond(const CMatrix& g) {
    const std::size_t k = g.rows();
    std::vector<double> dinv(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double d = g(i, i).real();
        if (!(d > 0.0)) return INFINITY;
        dinv[i] = 1.0 / std::sqrt(d);
    }
    const auto n = static_cast<lapack_int>(k);
    std::vector<Cx> cm(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) cm[j * k + i] = g(i, j) * dinv[i] * dinv[j];
    const double anorm = LAPACKE_zlanhe(LAPACK_COL_MAJOR, '1', 'U', n, lp(cm.data()), n);
    if (LAPACKE_zpotrf(LAPACK_COL_MAJOR, 'U', n, lp(cm.data()), n) != 0) return INFINITY;
    double rcond = 0.0;
    if (LAPACKE_zpocon(LAPACK_COL_MAJOR, 'U', n, lp(cm.data()), n, anorm, &rcond) != 0) return INFINITY;
    return rcond > 0.0 ? 1.0 / rcond : INFINITY;
}

CMatrix gram(const DomainSpec& d, std::size_t k, std::size_t m) {
    require(k >= 1, "gram needs K >= 1");
    const QuadratureRule rule = quadrature(d, m);
    CMatrix vals(rule.nodes.size(), k);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        Cx p{1.0};
        for (std::size_t c = 0; c < k; ++c) {
            vals(q, c) = p;
            p *= rule.nodes[q];
        }
    }
    CMatrix g = weighted_gram(vals, rule.weights);
    const double cond = equilibrated_cond(g);
    if (!(cond <= kGramCondCap))
        throw ConditioningError("monomial Gram is too ill-conditioned (K=" + std::to_string(k) + ")", cond);
    return g;
}

HardyBasis HardyBasis::build(const DomainSpec& d, std::size_t k, std::size_t m) {
    require(k >= 1, "basis size must be >= 1");
    HardyBasis hb;
    hb.domain_ = d;
    hb.k_requested_ = k;
    hb.rule_ = quadrature(d, m);
    hb.scale_ = d.max_modulus();
    const std::size_t mq = hb.rule_.nodes.size();

    CMatrix pv(mq, k);  // (z_q / s)^c
    for (std::size_t q = 0; q < mq; ++q) {
        const Cx zs = hb.rule_.nodes[q] / hb.scale_;
        Cx p{1.0};
        for (std::size_t c = 0; c < k; ++c) {
            pv(q, c) = p;
            p *= zs;
        }
    }
    const CMatrix gs = weighted_gram(pv, hb.rule_.weights);

    // Largest leading size with cond <= cap; leading blocks of an HPD matrix are no worse conditioned.
    std::size_t lo = 0, hi = k;
    double cond_hi = equilibrated_cond(gs);
    if (!(cond_hi <= kGramCondCap)) {
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (equilibrated_cond(leading(gs, mid)) <= kGramCondCap)
                lo = mid;
            else
                hi = mid;
        }
        hi = lo;
    }
    if (hi == 0) throw ConditioningError("Hardy Gram is not positive definite", INFINITY);

    for (std::size_t kk = hi; kk >= 1; --kk) {
        const CMatrix g = leading(gs, kk);
        auto c1 = inverse_cholesky(g);
        if (!c1) continue;
        CMatrix sub = pv.block(0, 0, mq, kk);
        // Second pass against the Gram of the first-pass functions.
        auto c2 = inverse_cholesky(weighted_gram(sub * *c1, hb.rule_.weights));
        if (!c2) continue;
        CMatrix coeff = *c1 * *c2;
        CMatrix vals = sub * coeff;
        const double defect = defect_from_identity(weighted_gram(vals, hb.rule_.weights));
        if (defect > kOrthonormalityTol) continue;
        hb.k_ = kk;
        hb.cond_ = equilibrated_cond(g);
        hb.defect_ = defect;
        hb.coeff_scaled_ = std::move(coeff);
        hb.values_ = std::move(vals);
        return hb;
    }
    throw ConditioningError("no orthonormal Hardy basis within tolerance", cond_hi);
}

HardyBasis HardyBasis::for_block(const DomainSpec& d, std::size_t n) {
    const std::size_t k = std::max<std::size_t>(2 * n, 64);
    return build(d, k, std::max<std::size_t>(4 * k, 512));
}

CMatrix HardyBasis::coeff() const {
    CMatrix c = coeff_scaled_;
    double f = 1.0;
    for (std::size_t i = 0; i < k_; ++i) {
        for (std::size_t j = 0; j < k_; ++j) c(i, j) *= f;
        f /= scale_;
    }
    return c;
}

Cx HardyBasis::derivative_at_zero(std::size_t j, std::size_t l) const {
    require(j < k_ && l < k_, "basis index out of range");
    double f = 1.0;
    for (std::size_t i = 1; i <= l; ++i) f *= static_cast<double>(i) / scale_;
    return f * coeff_scaled_(l, j);
}

CMatrix mult_matrix(const HardyBasis& basis) {
    const std::size_t k = basis.size();
    require(k >= 2, "multiplication matrix needs K >= 2");
    const auto& rule = basis.rule();
    const CMatrix& e = basis.node_values();
    const std::size_t m = rule.nodes.size();
    CMatrix mm(k - 1, k - 1);
    parallel_for(k - 1, [&](std::size_t i) {
        for (std::size_t j = 0; j + 1 < k; ++j)
            mm(i, j) = pairwise(0, m, [&](std::size_t q) {
                return rule.weights[q] * rule.nodes[q] * e(q, j) * std::conj(e(q, i));
            });
    });
    return mm;
}

NilpotentBlock nilpotent_block(const HardyBasis& basis, std::size_t n) {
    require(n >= 1, "block size must be >= 1");
    const std::size_t k = basis.size();
    if (2 * n > k)
        fail(ErrorKind::precondition, "nilpotent_block needs N <= K/2 (N=" + std::to_string(n) +
                                          ", K=" + std::to_string(k) + ")");
    const CMatrix mm = mult_matrix(basis);
    const CMatrix& c = basis.scaled_coeff();
    // Coordinates of k_0^{(l)} are conj(e_j^{(l)}(0)); the factor l!/s^l is common to the column.
    CMatrix span(k - 1, n);
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t j = 0; j + 1 < k; ++j) span(j, l) = std::conj(c(l, j));
    const CMatrix q = orthonormalize_columns(span);
    const CMatrix t = (q.adjoint() * mm * q).adjoint();

    NilpotentBlock blk;
    blk.n = n;
    blk.matrix = t;
    blk.domain = basis.domain();
    blk.residual = op_norm(matrix_power(t, static_cast<unsigned>(n)));
    blk.basis_size = k;
    blk.cond_estimate = basis.cond_estimate();
    const double norm = op_norm(t);
    if (!(blk.residual <= kNilpotencyTol * std::pow(std::max(1.0, norm), static_cast<double>(n))))
        fail(ErrorKind::construction, "nilpotent block residual " + std::to_string(blk.residual) +
                                          " exceeds tolerance (N=" + std::to_string(n) + ")");
    return blk;
}

NilpotentBlock nilpotent_block(const DomainSpec& d, std::size_t n) {
    return nilpotent_block(HardyBasis::for_block(d, n), n);
}

LimitValue block_psi_limit(const DomainSpec& d, Cx z) {
    const Cx w = std::conj(z);
    const double dist = d.boundary_distance(w);
    double resolution = 0.0;
    const auto curve = d.boundary_samples(kDenseSamples);
    for (std::size_t k = 0; k < curve.size(); ++k)
        resolution = std::max(resolution, std::abs(curve[(k + 1) % curve.size()] - curve[k]));
    if (d.contains(w)) return {0.0, dist < resolution};
    return {dist, dist < resolution};
}

}  // namespace pslab
