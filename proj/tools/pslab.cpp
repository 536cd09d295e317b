#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pslab/checks.hpp"
#include "pslab/contour.hpp"
#include "pslab/field.hpp"
#include "pslab/matfun.hpp"
#include "pslab/matrix_io.hpp"
#include "pslab/models.hpp"
#include "pslab/render.hpp"
#include "pslab/sampling.hpp"
#include "pslab/shapes.hpp"
#include "pslab/studies.hpp"

namespace fs = std::filesystem;
using namespace pslab;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitIo = 3;

int exit_code_for(ErrorKind k) {
    switch (k) {
        case ErrorKind::invalid_input:
        case ErrorKind::unsupported_model:
        case ErrorKind::nesting:
        case ErrorKind::branch:
        case ErrorKind::precondition:
            return kExitInput;
        case ErrorKind::io:
            return kExitIo;
        case ErrorKind::conditioning:
        case ErrorKind::infeasible_epsilon:
        case ErrorKind::construction:
        case ErrorKind::overflow:
            return kExitFail;
    }
    return kExitFail;
}

struct Common {
    std::string out = "pslab_out";
    std::uint64_t seed = 0x5EED;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--out,-o", c.out, "output directory");
    sub->add_option("--seed", c.seed, "random seed");
}

// Every option the subcommand knows about with the value it ended up with, minus the output path.
json effective_config(const CLI::App* sub) {
    json opts = json::object();
    for (const CLI::Option* o : sub->get_options()) {
        const std::string name = o->get_lnames().empty() ? std::string{} : o->get_lnames().front();
        if (name.empty() || name == "help" || name == "out" || name == "config") continue;
        if (o->count() > 0) {
            const auto& res = o->results();
            if (o->get_type_size() == 0) {
                opts[name] = true;
            } else if (res.size() == 1) {
                opts[name] = res.front();
            } else {
                opts[name] = res;
            }
        } else if (!o->get_default_str().empty()) {
            opts[name] = o->get_default_str();
        }
    }
    return opts;
}

void write_run_json(const fs::path& dir, const std::string& command, const CLI::App* sub) {
    json run{{"command", command}, {"options", effective_config(sub)}};
    for (const CLI::App* child : sub->get_subcommands()) run["mode"] = child->get_name();
    write_text_file(dir / "run.json", run.dump(2) + "\n");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::pair<double, double> parse_pair(const std::string& s, const std::string& what) {
    const auto colon = s.find(':');
    require(colon != std::string::npos, what + " must look like a:b, got '" + s + "'");
    try {
        std::size_t p1 = 0, p2 = 0;
        const double a = std::stod(s.substr(0, colon), &p1);
        const double b = std::stod(s.substr(colon + 1), &p2);
        require(p1 == colon && p2 == s.size() - colon - 1, what + " has trailing characters: '" + s + "'");
        return {a, b};
    } catch (const std::logic_error&) {
        fail(ErrorKind::invalid_input, what + " is not numeric: '" + s + "'");
    }
}

// ---- field ----

struct FieldArgs {
    Common c;
    std::string matrix, model;
    std::size_t section = 64;
    std::string grid = "-2:2:-2:2:64:64";
    std::vector<double> levels;
};

int cmd_field(const FieldArgs& a, const CLI::App* sub) {
    require(!a.matrix.empty() || !a.model.empty(), "field needs --matrix or --model");
    for (double e : a.levels) require(std::isfinite(e) && e > 0.0, "level " + fmt_num(e) + " must be positive");
    const GridSpec grid = parse_grid(a.grid);
    const CMatrix m = !a.matrix.empty() ? read_matrix_file(a.matrix)
                                        : section(model_from_json(read_json_file(a.model)), a.section);
    require(m.is_square(), "field needs a square matrix");

    const fs::path dir(a.c.out);
    ensure_directory(dir);
    const ScalarField f = compute_field(m, grid);
    write_text_file(dir / "field.csv", field_to_csv(f));
    if (!a.levels.empty()) {
        std::vector<LevelSet> sets;
        for (double e : a.levels) sets.push_back(extract_level(f, e));
        write_text_file(dir / "levels.json", levelsets_to_json(sets).dump(2) + "\n");
        write_text_file(dir / "levels.svg", levels_svg(sets, grid));
    }
    write_run_json(dir, "field", sub);
    return kExitPass;
}

// ---- check ----

struct CheckArgs {
    Common c;
    std::string matrix, model;
    std::size_t random = 0;
    std::size_t section = 32;
    std::string props, study;
    std::size_t samples = 200;
    std::string sizes = "16:256";
    std::string grid = "-2:2:-2:2:40:40";
    std::string annulus;
    double tol = 1e-4;
    std::size_t thetas = 8;
};

int cmd_check(const CheckArgs& a, const CLI::App* sub) {
    const int sources = !a.matrix.empty() + !a.model.empty() + (a.random > 0);
    require(sources == 1, "check needs exactly one of --matrix, --model, --random");

    std::vector<std::string> props = split_list(a.props);
    const std::vector<std::string> studies = split_list(a.study);
    if (props.empty() && studies.empty()) props = {"lip1", "band", "ratio", "semiconvex", "subharmonic"};
    for (const auto& p : props)
        require(p == "lip1" || p == "band" || p == "ratio" || p == "semiconvex" || p == "subharmonic",
                "unknown property '" + p + "'");
    for (const auto& s : studies) require(s == "sections" || s == "support", "unknown study '" + s + "'");
    require(studies.empty() || !a.model.empty(), "--study needs --model");
    require(a.samples > 0, "--samples must be positive");

    Lcg64 rng(a.c.seed);
    std::optional<OperatorModel> model;
    json target;
    CMatrix m(1, 1);
    if (!a.model.empty()) {
        model = model_from_json(read_json_file(a.model));
        target = {{"model", model_to_json(*model)}, {"section", a.section}};
        if (!props.empty()) m = section(*model, a.section);
    } else if (!a.matrix.empty()) {
        m = read_matrix_file(a.matrix);
        target = {{"matrix", a.matrix}};
    } else {
        m = random_gaussian_matrix(a.random, a.random, rng);
        target = {{"random", a.random}};
    }
    if (!props.empty()) require(m.is_square(), "check needs a square matrix");

    // Parse everything before writing anything.
    std::vector<std::size_t> sizes;
    GridSpec grid;
    ConvergenceOptions copts;
    if (!studies.empty()) {
        sizes = parse_ladder(a.sizes);
        grid = parse_grid(a.grid);
        if (!a.annulus.empty()) copts.annulus = parse_pair(a.annulus, "--annulus");
        require(a.tol > 0.0, "--tol must be positive");
        copts.tol = a.tol;
        require(a.thetas > 0, "--thetas must be positive");
    }

    const fs::path dir(a.c.out);
    ensure_directory(dir);
    bool pass = true;
    json report{{"target", target}, {"seed", a.c.seed}};

    if (!props.empty()) {
        json jp = json::array();
        for (const auto& r : run_property_suite(m, props, a.samples, rng)) {
            pass = pass && r.pass;
            jp.push_back(report_to_json(r));
        }
        report["properties"] = std::move(jp);
    }
    for (const auto& s : studies) {
        if (s == "sections") {
            const ConvergenceTable t = convergence_study(*model, grid, sizes, copts);
            pass = pass && t.pass;
            report["sections"] = convergence_to_json(t);
            write_text_file(dir / "sections.csv", convergence_to_csv(t));
        } else {
            std::vector<double> th(a.thetas);
            for (std::size_t k = 0; k < a.thetas; ++k)
                th[k] = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(a.thetas);
            const SupportTable t = support_convergence(*model, th, sizes);
            pass = pass && t.pass;
            report["support"] = {{"max_decrease", t.max_decrease}, {"pass", t.pass}};
            write_text_file(dir / "support.csv", support_to_csv(t));
        }
    }
    report["pass"] = pass;
    write_text_file(dir / "report.json", report.dump(2) + "\n");
    write_run_json(dir, "check", sub);
    if (!pass) std::cerr << "pslab check: at least one check failed, see " << (dir / "report.json").string() << "\n";
    return pass ? kExitPass : kExitFail;
}

// ---- shapes ----

struct ShapesArgs {
    Common c;
    std::string problem;
    std::size_t cap = 512;
    std::size_t boundary_samples = 256;
    std::size_t interior_samples = 64;
    bool elide_blocks = false;
    bool svg = false;
};

std::string chain_svg(const ShapeProblem& p, const ShapeResult& r) {
    double reach = 0.0;
    for (const auto& g : p.domains)
        for (Cx z : g.boundary_samples(256)) reach = std::max(reach, std::abs(z));
    reach *= 1.25;
    GridSpec view{-reach, reach, -reach, reach, 161, 161};
    SvgCanvas svg(view.x_min, view.x_max, view.y_min, view.y_max);

    std::vector<CMatrix> mats;
    for (const auto& b : r.blocks) mats.push_back(b.matrix);
    const ScalarField f = compute_field([&](Cx z) { return psi_blocks(mats, z); }, view);

    auto closed = [](std::vector<Cx> pts) {
        if (!pts.empty()) pts.push_back(pts.front());
        return pts;
    };
    for (const auto& g : p.domains) svg.polyline(closed(g.boundary_samples(256)), "#000000", 1.5);
    for (const auto& o : r.omegas) svg.polyline(closed(o.boundary_samples(256)), "#888888", 1.0, true);
    for (std::size_t k = 0; k < r.eps.size(); ++k) {
        const LevelSet ls = extract_level(f, r.eps[k]);
        for (const auto& pl : ls.polylines) svg.polyline(pl, level_color(k), 1.2);
        svg.label({view.x_min + 0.05 * reach, view.y_max - (0.08 + 0.08 * static_cast<double>(k)) * reach},
                  "eps" + std::to_string(k + 1) + " = " + fmt_num(r.eps[k]), level_color(k));
    }
    return svg.str();
}

int cmd_shapes(const ShapesArgs& a, const CLI::App* sub) {
    const ShapeProblem p = problem_from_json(read_json_file(a.problem));
    ShapeOptions opts;
    opts.cap = a.cap;
    opts.boundary_samples = a.boundary_samples;
    opts.interior_samples = a.interior_samples;
    opts.seed = a.c.seed;
    require(opts.cap >= 8, "--cap must be at least 8");
    require(opts.boundary_samples >= 16 && opts.interior_samples >= 1, "sample counts too small");

    const fs::path dir(a.c.out);
    ensure_directory(dir);
    write_run_json(dir, "shapes", sub);
    const ShapeResult r = construct(p, opts);
    write_text_file(dir / "result.json", shape_result_to_json(r, !a.elide_blocks).dump(2) + "\n");
    write_text_file(dir / "report.json", report_to_json(r.verification).dump(2) + "\n");
    if (a.svg) write_text_file(dir / "chain.svg", chain_svg(p, r));
    if (!r.verification.pass) {
        std::cerr << "pslab shapes: [verify] inclusion chain failed, max violation "
                  << fmt_num(r.verification.max_violation) << "\n";
        return kExitFail;
    }
    return kExitPass;
}

// ---- oscillate ----

struct OscArgs {
    Common c;
    double r = 0.3;
    double m = 1e6;
    double lemma_m = 1e3;
    std::string ladder = "40:120:20";
    std::string series = "sqrt1mz";
    std::string mult_ladder = "64:512";
};

int cmd_oscillate(const OscArgs& a, const CLI::App* sub) {
    require(a.r > 0.0 && a.r < 0.5, "--r must lie in (0, 1/2), got " + fmt_num(a.r));
    require(a.m > 0.0 && a.lemma_m > 0.0, "thresholds must be positive");
    const auto ladder = parse_ladder(a.ladder);
    const fs::path dir(a.c.out);
    ensure_directory(dir);
    const OscillationScanResult res = oscillation_scan(a.r, a.m, ladder, a.lemma_m);
    write_text_file(dir / "scan.csv", scan_to_csv(res));
    write_text_file(dir / "contrast.csv", contrast_to_csv(res));
    write_text_file(dir / "lemma.csv", lemma_to_csv(res.lemma, res.lemma_m));
    write_run_json(dir, "oscillate", sub);
    if (res.n_star)
        std::cout << "N_star = " << *res.n_star << "\n";
    else
        std::cout << "N_star not reached on the ladder\n";
    return kExitPass;
}

int cmd_multiplier(const OscArgs& a, const CLI::App* sub) {
    const auto ladder = parse_ladder(a.mult_ladder);
    std::size_t n_max = 0;
    for (std::size_t n : ladder) n_max = std::max(n_max, n);
    const PowerSeries q = named_series(a.series, n_max);
    const fs::path dir(a.c.out);
    ensure_directory(dir);
    write_text_file(dir / "multiplier.csv", multiplier_to_csv(multiplier_growth(q, ladder)));
    write_run_json(dir, "oscillate multiplier", sub);
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pslab: pseudospectra, finite sections and nilpotent shape models"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML or INI file with option defaults");
    app.option_defaults()->always_capture_default();

    FieldArgs fa;
    auto* field = app.add_subcommand("field", "Psi field on a grid, optional level sets");
    add_common(field, fa.c);
    auto* fm = field->add_option("--matrix", fa.matrix, "matrix JSON");
    auto* fmod = field->add_option("--model", fa.model, "operator model JSON");
    fm->excludes(fmod);
    field->add_option("--section", fa.section, "section size for --model")->check(CLI::PositiveNumber);
    field->add_option("--grid", fa.grid, "xmin:xmax:ymin:ymax:nx:ny");
    field->add_option("--levels", fa.levels, "comma separated epsilons")->delimiter(',');

    CheckArgs ca;
    auto* check = app.add_subcommand("check", "inequality checkers and section studies");
    add_common(check, ca.c);
    check->add_option("--matrix", ca.matrix, "matrix JSON");
    check->add_option("--model", ca.model, "operator model JSON");
    check->add_option("--random", ca.random, "random Gaussian n x n matrix from --seed");
    check->add_option("--section", ca.section, "section size when checking properties of a model")
        ->check(CLI::PositiveNumber);
    check->add_option("--props", ca.props, "lip1,band,ratio,semiconvex,subharmonic");
    check->add_option("--study", ca.study, "sections,support");
    check->add_option("--samples", ca.samples, "samples per property");
    check->add_option("--sizes", ca.sizes, "section ladder start:stop[:step]");
    check->add_option("--grid", ca.grid, "grid for the sections study");
    check->add_option("--annulus", ca.annulus, "rmin:rmax node filter for the sections study");
    check->add_option("--tol", ca.tol, "final sup-error tolerance");
    check->add_option("--thetas", ca.thetas, "equispaced angles for the support study");

    ShapesArgs sa;
    auto* shapes = app.add_subcommand("shapes", "nilpotent block model for a nested domain chain");
    add_common(shapes, sa.c);
    shapes->add_option("problem,--problem", sa.problem, "problem JSON")->required();
    shapes->add_option("--cap", sa.cap, "largest block size tried");
    shapes->add_option("--boundary-samples", sa.boundary_samples, "samples per boundary");
    shapes->add_option("--interior-samples", sa.interior_samples, "interior samples per domain");
    shapes->add_flag("--elide-blocks", sa.elide_blocks, "leave block matrices out of result.json");
    shapes->add_flag("--svg", sa.svg, "also write chain.svg");

    OscArgs oa;
    auto* osc = app.add_subcommand("oscillate", "norm growth of sqrt(tau - S_N) near tau = 1");
    add_common(osc, oa.c);
    osc->add_option("--r", oa.r, "radius of the tau circle, in (0, 1/2)");
    osc->add_option("--M", oa.m, "norm threshold for N_star");
    osc->add_option("--lemma-M", oa.lemma_m, "coefficient threshold for the lemma scan");
    osc->add_option("--ladder", oa.ladder, "sizes start:stop[:step]");
    osc->require_subcommand(0, 1);
    auto* mult = osc->add_subcommand("multiplier", "||q(J_N)|| along a ladder");
    add_common(mult, oa.c);
    mult->add_option("--series", oa.series, "sqrt1mz, log1mz or one");
    mult->add_option("--ladder", oa.mult_ladder, "sizes start:stop[:step]");

    for (auto* s : {field, check, shapes, osc, mult}) s->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitInput;
    }

    try {
        if (field->parsed()) return cmd_field(fa, field);
        if (check->parsed()) return cmd_check(ca, check);
        if (shapes->parsed()) return cmd_shapes(sa, shapes);
        if (mult->parsed()) return cmd_multiplier(oa, mult);
        if (osc->parsed()) return cmd_oscillate(oa, osc);
    } catch (const Error& e) {
        std::cerr << "pslab: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const json::exception& e) {
        std::cerr << "pslab: invalid_input: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "pslab: internal error: " << e.what() << "\n";
        return kExitFail;
    }
    return kExitInput;
}
