#include "pslab/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pslab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double halton(std::size_t index, std::size_t base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(index % base);
        index /= base;
    }
    return r;
}

std::size_t degree(const PowerSeries& p) {
    std::size_t d = p.size() - 1;
    while (d > 0 && p.coeffs[d] == Cx{}) --d;
    return d;
}

bool unimodular(const std::vector<Cx>& w) {
    return std::all_of(w.begin(), w.end(), [](Cx c) { return std::abs(std::abs(c) - 1.0) <= 1e-15; });
}

// Entry (i, j) of the infinite matrix for unilaterally indexed models.
Cx entry(const OperatorModel& m, std::size_t i, std::size_t j) {
    return std::visit(
        overloaded{
            [&](const UnilateralShift& s) -> Cx {
                const std::size_t len = s.weights.size();
                if (s.direction == ShiftDirection::forward) return i == j + 1 ? s.weights[j % len] : Cx{};
                return j == i + 1 ? s.weights[i % len] : Cx{};
            },
            [&](const BilateralShift&) -> Cx {
                fail(ErrorKind::unsupported_model, "bilateral shift has no unilateral indexing");
            },
            [&](const AnalyticToeplitz& t) -> Cx {
                if (!t.adjoint) return i >= j ? t.symbol[i - j] : Cx{};
                return j >= i ? std::conj(t.symbol[j - i]) : Cx{};
            },
            [&](const DiagonalNormal& d) -> Cx { return i == j ? d.eigenvalue(i) : Cx{}; },
            [&](const DirectSum& ds) -> Cx {
                const std::size_t k = ds.children.size();
                if (i % k != j % k) return Cx{};
                return entry(ds.children[i % k], i / k, j / k);
            },
        },
        m.v);
}

// Bilateral window: column c holds e_{c - n}. Rows cover e_{-n} .. e_{n + extra}.
CMatrix bilateral_window(Cx s, std::size_t n, std::size_t extra_rows, Cx z) {
    const std::size_t cols = 2 * n + 1;
    CMatrix a(cols + extra_rows, cols);
    for (std::size_t c = 0; c < cols; ++c) {
        a(c, c) = -z;
        if (c + 1 < a.rows()) a(c + 1, c) = (c == n) ? s : Cx{1.0};
    }
    return a;
}

double min_boundary_distance(const PowerSeries& psi, Cx z, const std::vector<Cx>& curve, double& resolution) {
    const std::size_t m = curve.size();
    std::size_t best = 0;
    double bd = INFINITY;
    resolution = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double d = std::abs(curve[k] - z);
        if (d < bd) {
            bd = d;
            best = k;
        }
        resolution = std::max(resolution, std::abs(curve[(k + 1) % m] - curve[k]));
    }
    // Golden-section refinement on the bracketing parameter interval.
    const double h = 2.0 * std::numbers::pi / static_cast<double>(m);
    double lo = (static_cast<double>(best) - 1.0) * h, hi = (static_cast<double>(best) + 1.0) * h;
    auto f = [&](double th) { return std::abs(psi.eval(std::polar(1.0, th)) - z); };
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

OracleValue toeplitz_oracle(const PowerSeries& psi, Cx z) {
    constexpr std::size_t kSamples = 4096;
    std::vector<Cx> curve(kSamples);
    for (std::size_t k = 0; k < kSamples; ++k)
        curve[k] = psi.eval(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / kSamples));
    if (winding_number(curve, z) != 0) return {0.0, false};
    double resolution = 0.0;
    const double d = min_boundary_distance(psi, z, curve, resolution);
    return {d, d < resolution};
}

}  // namespace

Cx DiagonalNormal::eigenvalue(std::size_t k) const {
    if (disc_net) {
        const auto [c, r] = *disc_net;
        const double u = halton(k + 1, 2), v = halton(k + 1, 3);
        return c + std::polar(r * std::sqrt(u), 2.0 * std::numbers::pi * v);
    }
    return values[k % values.size()];
}

int winding_number(const std::vector<Cx>& curve, Cx z) {
    double total = 0.0;
    const std::size_t m = curve.size();
    for (std::size_t k = 0; k < m; ++k) {
        const Cx a = curve[k] - z, b = curve[(k + 1) % m] - z;
        total += std::arg(b / a);
    }
    return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

bool is_bilateral(const OperatorModel& m) { return std::holds_alternative<BilateralShift>(m.v); }

std::string variant_name(const OperatorModel& m) {
    return std::visit(overloaded{
                          [](const UnilateralShift& s) -> std::string {
                              return s.direction == ShiftDirection::forward ? "unilateral_shift(fwd)"
                                                                            : "unilateral_shift(bwd)";
                          },
                          [](const BilateralShift&) -> std::string { return "bilateral_shift"; },
                          [](const AnalyticToeplitz& t) -> std::string {
                              return t.adjoint ? "analytic_toeplitz(adjoint)" : "analytic_toeplitz";
                          },
                          [](const DiagonalNormal&) -> std::string { return "diagonal_normal"; },
                          [](const DirectSum&) -> std::string { return "direct_sum"; },
                      },
                      m.v);
}

Band band(const OperatorModel& m) {
    return std::visit(overloaded{
                          [](const UnilateralShift& s) {
                              return s.direction == ShiftDirection::forward ? Band{1, 0} : Band{0, 1};
                          },
                          [](const BilateralShift&) { return Band{1, 0}; },
                          [](const AnalyticToeplitz& t) {
                              const std::size_t d = degree(t.symbol);
                              return t.adjoint ? Band{0, d} : Band{d, 0};
                          },
                          [](const DiagonalNormal&) { return Band{0, 0}; },
                          [](const DirectSum& ds) {
                              Band b;
                              for (const auto& c : ds.children) {
                                  const Band cb = band(c);
                                  b.lower = std::max(b.lower, cb.lower);
                                  b.upper = std::max(b.upper, cb.upper);
                              }
                              const std::size_t k = ds.children.size();
                              return Band{b.lower * k, b.upper * k};
                          },
                      },
                      m.v);
}

bool qt_standard(const OperatorModel& m) {
    if (const auto* ds = std::get_if<DirectSum>(&m.v))
        return std::all_of(ds->children.begin(), ds->children.end(), qt_standard);
    if (is_bilateral(m)) return false;
    return band(m).lower == 0;
}

double norm_bound(const OperatorModel& m) {
    return std::visit(overloaded{
                          [](const UnilateralShift& s) {
                              double w = 0.0;
                              for (Cx c : s.weights) w = std::max(w, std::abs(c));
                              return w;
                          },
                          [](const BilateralShift& b) { return std::max(1.0, std::abs(b.s)); },
                          [](const AnalyticToeplitz& t) {
                              double s = 0.0;
                              for (Cx c : t.symbol.coeffs) s += std::abs(c);
                              return s;
                          },
                          [](const DiagonalNormal& d) {
                              if (d.disc_net) return std::abs(d.disc_net->first) + d.disc_net->second;
                              double s = 0.0;
                              for (Cx c : d.values) s = std::max(s, std::abs(c));
                              return s;
                          },
                          [](const DirectSum& ds) {
                              double s = 0.0;
                              for (const auto& c : ds.children) s = std::max(s, norm_bound(c));
                              return s;
                          },
                      },
                      m.v);
}

CMatrix section(const OperatorModel& m, std::size_t n) {
    require(n >= 1, "section size must be >= 1");
    if (const auto* b = std::get_if<BilateralShift>(&m.v)) return bilateral_window(b->s, n, 0, Cx{});
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = entry(m, i, j);
    return a;
}

CMatrix rect_section(const OperatorModel& m, std::size_t n, Cx z) {
    require(n >= 1, "section size must be >= 1");
    require(is_finite(z), "shift must be finite");
    if (const auto* b = std::get_if<BilateralShift>(&m.v)) return bilateral_window(b->s, n, 1, z);
    const std::size_t rows = n + band(m).lower;
    CMatrix a(rows, n);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = entry(m, i, j) - (i == j ? z : Cx{});
    return a;
}

double qt_defect(const OperatorModel& m, std::size_t n) {
    require(n >= 1, "section size must be >= 1");
    const CMatrix r = rect_section(m, n);
    const std::size_t sq = is_bilateral(m) ? 2 * n + 1 : n;
    if (r.rows() == sq) return 0.0;
    return op_norm(r.block(sq, 0, r.rows() - sq, r.cols()));
}

OracleValue psi_oracle(const OperatorModel& m, Cx z) {
    return std::visit(
        overloaded{
            [&](const UnilateralShift& s) -> OracleValue {
                if (!unimodular(s.weights)) return {};
                return {std::max(0.0, std::abs(z) - 1.0), false};
            },
            [&](const BilateralShift& b) -> OracleValue {
                if (std::abs(std::abs(b.s) - 1.0) > 1e-15) return {};
                return {std::abs(std::abs(z) - 1.0), false};
            },
            [&](const AnalyticToeplitz& t) -> OracleValue {
                return toeplitz_oracle(t.symbol, t.adjoint ? std::conj(z) : z);
            },
            [&](const DiagonalNormal& d) -> OracleValue {
                if (d.disc_net) return {std::max(0.0, std::abs(z - d.disc_net->first) - d.disc_net->second), false};
                double best = INFINITY;
                for (Cx c : d.values) best = std::min(best, std::abs(z - c));
                return {best, false};
            },
            [&](const DirectSum& ds) -> OracleValue {
                OracleValue out{INFINITY, false};
                for (const auto& c : ds.children) {
                    const OracleValue v = psi_oracle(c, z);
                    if (!v.value) return {};
                    out.value = std::min(*out.value, *v.value);
                    out.ambiguous = out.ambiguous || v.ambiguous;
                }
                return out;
            },
        },
        m.v);
}

json model_to_json(const OperatorModel& m) {
    auto arr = [](const std::vector<Cx>& v) {
        json a = json::array();
        for (Cx c : v) a.push_back(cx_to_json(c));
        return a;
    };
    return std::visit(
        overloaded{
            [&](const UnilateralShift& s) -> json {
                return {{"variant", "unilateral_shift"},
                        {"direction", s.direction == ShiftDirection::forward ? "fwd" : "bwd"},
                        {"weights", arr(s.weights)}};
            },
            [&](const BilateralShift& b) -> json { return {{"variant", "bilateral_shift"}, {"s", cx_to_json(b.s)}}; },
            [&](const AnalyticToeplitz& t) -> json {
                return {{"variant", "analytic_toeplitz"}, {"symbol", arr(t.symbol.coeffs)}, {"adjoint", t.adjoint}};
            },
            [&](const DiagonalNormal& d) -> json {
                if (d.disc_net)
                    return {{"variant", "diagonal_normal"},
                            {"disc_net", {{"center", cx_to_json(d.disc_net->first)}, {"radius", d.disc_net->second}}}};
                return {{"variant", "diagonal_normal"}, {"eigenvalues", arr(d.values)}};
            },
            [&](const DirectSum& ds) -> json {
                json c = json::array();
                for (const auto& ch : ds.children) c.push_back(model_to_json(ch));
                return {{"variant", "direct_sum"}, {"children", std::move(c)}};
            },
        },
        m.v);
}

OperatorModel model_from_json(const json& j) {
    require(j.is_object() && j.contains("variant") && j["variant"].is_string(),
            "model JSON needs a string field 'variant'");
    const std::string v = j["variant"].get<std::string>();
    auto cx_list = [&](const char* key) {
        require(j.contains(key) && j[key].is_array() && !j[key].empty(),
                std::string("model field '") + key + "' must be a nonempty array");
        std::vector<Cx> out;
        for (const auto& e : j[key]) out.push_back(cx_from_json(e));
        return out;
    };
    if (v == "unilateral_shift") {
        UnilateralShift s;
        const std::string dir = j.value("direction", std::string("fwd"));
        if (dir == "fwd" || dir == "forward")
            s.direction = ShiftDirection::forward;
        else if (dir == "bwd" || dir == "backward")
            s.direction = ShiftDirection::backward;
        else
            fail(ErrorKind::invalid_input, "shift direction must be fwd or bwd");
        if (j.contains("weights")) s.weights = cx_list("weights");
        return {s};
    }
    if (v == "bilateral_shift") return {BilateralShift{j.contains("s") ? cx_from_json(j["s"]) : Cx{1.0}}};
    if (v == "analytic_toeplitz") {
        AnalyticToeplitz t{PowerSeries(cx_list("symbol")), j.value("adjoint", false)};
        return {t};
    }
    if (v == "diagonal_normal") {
        DiagonalNormal d;
        if (j.contains("disc_net")) {
            const json& dn = j["disc_net"];
            require(dn.is_object() && dn.contains("radius") && dn["radius"].is_number(),
                    "disc_net needs center and radius");
            const double r = dn["radius"].get<double>();
            require(std::isfinite(r) && r >= 0.0, "disc_net radius must be >= 0");
            d.disc_net = std::make_pair(dn.contains("center") ? cx_from_json(dn["center"]) : Cx{}, r);
        } else {
            d.values = cx_list("eigenvalues");
        }
        return {d};
    }
    if (v == "direct_sum") {
        require(j.contains("children") && j["children"].is_array() && !j["children"].empty(),
                "direct_sum needs a nonempty children array");
        DirectSum ds;
        for (const auto& c : j["children"]) {
            ds.children.push_back(model_from_json(c));
            if (is_bilateral(ds.children.back()))
                fail(ErrorKind::unsupported_model, "direct_sum children must be unilaterally indexed");
        }
        return {ds};
    }
    fail(ErrorKind::unsupported_model, "unknown model variant '" + v + "'");
}

}  // namespace pslab
