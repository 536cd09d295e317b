#include "pslab/studies.hpp"

#include <algorithm>
#include <cmath>

#include "pslab/parallel.hpp"

namespace pslab {

namespace {

struct StudyPlan {
    std::vector<Cx> nodes;
    std::vector<double> ref;
    std::vector<char> usable;
    ConvergenceTable table;
};

void check_sizes(const std::vector<std::size_t>& sizes) {
    require(!sizes.empty(), "study needs at least one size");
    for (std::size_t k = 0; k < sizes.size(); ++k) {
        require(sizes[k] >= 1, "section sizes must be >= 1");
        if (k > 0) require(sizes[k] > sizes[k - 1], "section sizes must be strictly increasing");
    }
}

// Nodes, reference values and table header. The baseline evaluation is the only expensive part
// and is parallel or serial depending on the caller.
StudyPlan plan_study(const OperatorModel& m, const GridSpec& grid, const std::vector<std::size_t>& sizes,
                     const ConvergenceOptions& opts, bool parallel) {
    grid.validate();
    check_sizes(sizes);
    StudyPlan p;
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const Cx z = grid.node(i, j);
            if (opts.annulus) {
                const double r = std::abs(z);
                if (r < opts.annulus->first || r > opts.annulus->second) continue;
            }
            p.nodes.push_back(z);
        }
    require(!p.nodes.empty(), "no grid nodes left after the annulus mask");
    p.table.model = variant_name(m);
    p.table.quasitriangular = qt_standard(m);
    p.table.nodes = p.nodes.size();
    p.ref.assign(p.nodes.size(), 0.0);
    p.usable.assign(p.nodes.size(), 0);

    bool have_oracle = false;
    if (p.table.quasitriangular) {
        for (std::size_t k = 0; k < p.nodes.size(); ++k) {
            const OracleValue v = psi_oracle(m, p.nodes[k]);
            if (v.value && !v.ambiguous) {
                p.ref[k] = *v.value;
                p.usable[k] = 1;
                have_oracle = true;
            }
        }
    }
    if (have_oracle) {
        p.table.reference = "psi_oracle";
    } else {
        p.table.reference = "rect_section";
        p.table.negative_control = !p.table.quasitriangular;
        const std::size_t nb = opts.baseline_factor * sizes.back();
        auto eval = [&](std::size_t k) {
            p.ref[k] = sigma_min(rect_section(m, nb, p.nodes[k]));
            p.usable[k] = 1;
        };
        if (parallel) {
            parallel_for(p.nodes.size(), eval);
        } else {
            for (std::size_t k = 0; k < p.nodes.size(); ++k) eval(k);
        }
    }
    p.table.excluded = static_cast<std::size_t>(std::count(p.usable.begin(), p.usable.end(), 0));
    return p;
}

// Fixed-order max over nodes; identical for serial and parallel slot filling.
ConvergenceTable finish(StudyPlan& p, const std::vector<std::size_t>& sizes, const std::vector<double>& err,
                        const ConvergenceOptions& opts) {
    auto& t = p.table;
    const std::size_t nn = p.nodes.size();
    for (std::size_t s = 0; s < sizes.size(); ++s) {
        ConvergenceRow row{sizes[s], 0.0, p.nodes[0]};
        for (std::size_t k = 0; k < nn; ++k) {
            if (!p.usable[k]) continue;
            if (err[s * nn + k] > row.sup_error) {
                row.sup_error = err[s * nn + k];
                row.argmax = p.nodes[k];
            }
        }
        t.rows.push_back(row);
    }
    t.nonincreasing = true;
    for (std::size_t s = 1; s < t.rows.size(); ++s)
        if (t.rows[s].sup_error > t.rows[s - 1].sup_error + 1e-12) t.nonincreasing = false;
    const bool small = t.rows.back().sup_error <= opts.tol;
    t.pass = t.quasitriangular ? (t.nonincreasing && small) : small;
    return t;
}

}  // namespace

ConvergenceTable convergence_study(const OperatorModel& m, const GridSpec& grid, const std::vector<std::size_t>& sizes,
                                   const ConvergenceOptions& opts) {
    StudyPlan p = plan_study(m, grid, sizes, opts, true);
    std::vector<CMatrix> secs;
    for (std::size_t n : sizes) secs.push_back(section(m, n));
    const std::size_t nn = p.nodes.size();
    std::vector<double> err(sizes.size() * nn, 0.0);
    // Largest sections first so the dynamic schedule balances.
    parallel_for(err.size(), [&](std::size_t t) {
        const std::size_t flat = err.size() - 1 - t;
        const std::size_t s = flat / nn, k = flat % nn;
        if (p.usable[k]) err[flat] = std::abs(psi_eval(secs[s], p.nodes[k]) - p.ref[k]);
    });
    return finish(p, sizes, err, opts);
}

namespace reference {

ConvergenceTable convergence_study(const OperatorModel& m, const GridSpec& grid, const std::vector<std::size_t>& sizes,
                                   const ConvergenceOptions& opts) {
    StudyPlan p = plan_study(m, grid, sizes, opts, false);
    const std::size_t nn = p.nodes.size();
    std::vector<double> err(sizes.size() * nn, 0.0);
    for (std::size_t s = 0; s < sizes.size(); ++s) {
        const CMatrix sec = section(m, sizes[s]);
        for (std::size_t k = 0; k < nn; ++k)
            if (p.usable[k]) err[s * nn + k] = std::abs(psi_eval(sec, p.nodes[k]) - p.ref[k]);
    }
    return finish(p, sizes, err, opts);
}

}  // namespace reference

SupportTable support_convergence(const OperatorModel& m, const std::vector<double>& thetas,
                                 const std::vector<std::size_t>& sizes) {
    require(!thetas.empty(), "support study needs at least one angle");
    check_sizes(sizes);
    for (double th : thetas) require(std::isfinite(th), "angles must be finite");
    std::vector<CMatrix> secs;
    for (std::size_t n : sizes) secs.push_back(section(m, n));
    SupportTable t;
    t.rows.resize(thetas.size() * sizes.size());
    parallel_for(t.rows.size(), [&](std::size_t idx) {
        const std::size_t a = idx / sizes.size(), s = idx % sizes.size();
        t.rows[idx] = {thetas[a], sizes[s], support_function(secs[s], thetas[a])};
    });
    for (std::size_t a = 0; a < thetas.size(); ++a)
        for (std::size_t s = 1; s < sizes.size(); ++s) {
            const double drop = t.rows[a * sizes.size() + s - 1].rho - t.rows[a * sizes.size() + s].rho;
            t.max_decrease = std::max(t.max_decrease, drop);
        }
    t.pass = t.max_decrease <= 1e-10;
    return t;
}

PropertyReport join_check(const OperatorModel& t, const std::vector<Cx>& k_points, const std::vector<Cx>& zs,
                          std::size_t section_size) {
    require(!zs.empty(), "join_check needs sample points");
    require(section_size >= 1, "section size must be >= 1");
    PropertyReport rep("join", 1e-12);
    const CMatrix tn = section(t, section_size);
    std::optional<CMatrix> joined;
    if (!k_points.empty()) {
        if (is_bilateral(t)) fail(ErrorKind::unsupported_model, "join_check needs a unilaterally indexed model");
        DiagonalNormal dn;
        dn.values = k_points;
        joined = section(OperatorModel{DirectSum{{t, OperatorModel{dn}}}}, 2 * section_size);
    }
    for (const Cx& z : zs) {
        const OracleValue ov = psi_oracle(t, z);
        if (!ov.value) fail(ErrorKind::unsupported_model, "join_check needs a Psi oracle for " + variant_name(t));
        if (*ov.value <= 0.0 || ov.ambiguous) {
            ++rep.excluded;
            continue;
        }
        double dk = INFINITY, dk_n = INFINITY;
        for (std::size_t i = 0; i < k_points.size(); ++i) {
            const double d = std::abs(z - k_points[i]);
            dk = std::min(dk, d);
            if (i < section_size) dk_n = std::min(dk_n, d);
        }
        // Operator level: the normal summand never lowers Psi_T.
        double v = *ov.value - std::min(*ov.value, dk);
        json w{{"z", cx_to_json(z)}, {"psi_oracle", *ov.value}};
        if (joined) {
            const double p_t = psi_eval(tn, z);
            const double p_s = psi_eval(*joined, z);
            v = std::max(v, std::abs(p_s - std::min(p_t, dk_n)));
            v = std::max(v, p_s - p_t);
            w["psi_section"] = p_t;
            w["psi_joined_section"] = p_s;
        }
        rep.record(v, w);
    }
    if (k_points.empty()) rep.note = "empty K: identity check on Psi_T only";
    rep.finalize();
    return rep;
}

std::string convergence_to_csv(const ConvergenceTable& t) {
    std::string s = "n,sup_error\n";
    for (const auto& r : t.rows) s += std::to_string(r.n) + "," + fmt_num(r.sup_error) + "\n";
    return s;
}

json convergence_to_json(const ConvergenceTable& t) {
    json rows = json::array();
    for (const auto& r : t.rows)
        rows.push_back({{"n", r.n}, {"sup_error", r.sup_error}, {"argmax", cx_to_json(r.argmax)}});
    json j{{"name", "sections"},
           {"model", t.model},
           {"reference", t.reference},
           {"quasitriangular", t.quasitriangular},
           {"negative_control", t.negative_control},
           {"nodes", t.nodes},
           {"excluded", t.excluded},
           {"rows", std::move(rows)},
           {"nonincreasing", t.nonincreasing},
           {"pass", t.pass}};
    if (t.negative_control && !t.rows.empty()) {
        j["note"] = "model is not quasitriangular for the standard filtration; the gap to j_T is expected to persist";
        j["gap_witness"] = {{"z", cx_to_json(t.rows.back().argmax)}, {"gap", t.rows.back().sup_error}};
    }
    return j;
}

std::string support_to_csv(const SupportTable& t) {
    std::string s = "theta,n,rho\n";
    for (const auto& r : t.rows) s += fmt_num(r.theta) + "," + std::to_string(r.n) + "," + fmt_num(r.rho) + "\n";
    return s;
}

}  // namespace pslab
