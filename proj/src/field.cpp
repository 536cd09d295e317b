#include "pslab/field.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "pslab/matrix_io.hpp"
#include "pslab/parallel.hpp"

namespace pslab {

int thread_count() {
    if (const char* env = std::getenv("PSLAB_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 1024));
    }
    return omp_get_max_threads();
}

void GridSpec::validate() const {
    require(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(y_min) && std::isfinite(y_max),
            "grid bounds must be finite");
    require(x_min < x_max, "grid needs x_min < x_max");
    require(y_min < y_max, "grid needs y_min < y_max");
    require(nx >= 2 && ny >= 2, "grid needs nx, ny >= 2");
}

// Endpoints hit exactly so that grids sharing a bound agree on the node.
double GridSpec::x(std::size_t i) const {
    if (i + 1 == nx) return x_max;
    return x_min + static_cast<double>(i) * dx();
}

double GridSpec::y(std::size_t j) const {
    if (j + 1 == ny) return y_max;
    return y_min + static_cast<double>(j) * dy();
}

GridSpec parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    require(parts.size() == 6, "grid must be xmin:xmax:ymin:ymax:nx:ny, got '" + text + "'");
    GridSpec g;
    try {
        std::size_t pos = 0;
        auto num = [&](const std::string& s) {
            const double v = std::stod(s, &pos);
            require(pos == s.size(), "bad number '" + s + "' in grid");
            return v;
        };
        auto count = [&](const std::string& s) {
            const long long v = std::stoll(s, &pos);
            require(pos == s.size() && v >= 2, "grid counts must be integers >= 2");
            return static_cast<std::size_t>(v);
        };
        g.x_min = num(parts[0]);
        g.x_max = num(parts[1]);
        g.y_min = num(parts[2]);
        g.y_max = num(parts[3]);
        g.nx = count(parts[4]);
        g.ny = count(parts[5]);
    } catch (const std::logic_error&) {
        fail(ErrorKind::invalid_input, "cannot parse grid '" + text + "'");
    }
    g.validate();
    return g;
}

double ScalarField::max_value() const { return *std::max_element(values.begin(), values.end()); }

ScalarField compute_field(const PointFunction& f, const GridSpec& grid) {
    grid.validate();
    ScalarField out{grid, std::vector<double>(grid.size())};
    parallel_for(grid.size(), [&](std::size_t k) { out.values[k] = f(grid.node(k % grid.nx, k / grid.nx)); });
    return out;
}

ScalarField compute_field(const CMatrix& a, const GridSpec& grid) {
    require(a.is_square(), "compute_field requires a square matrix");
    return compute_field([&a](Cx z) { return psi_eval(a, z); }, grid);
}

std::vector<double> evaluate_at(const PointFunction& f, std::span<const Cx> zs) {
    std::vector<double> out(zs.size());
    parallel_for(zs.size(), [&](std::size_t k) { out[k] = f(zs[k]); });
    return out;
}

std::vector<double> psi_at(const CMatrix& a, std::span<const Cx> zs) {
    require(a.is_square(), "psi_at requires a square matrix");
    return evaluate_at([&a](Cx z) { return psi_eval(a, z); }, zs);
}

namespace reference {

ScalarField compute_field(const CMatrix& a, const GridSpec& grid) {
    grid.validate();
    require(a.is_square(), "compute_field requires a square matrix");
    ScalarField out{grid, std::vector<double>(grid.size())};
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i) out.values[j * grid.nx + i] = psi_eval(a, grid.node(i, j));
    return out;
}

std::vector<double> psi_at(const CMatrix& a, std::span<const Cx> zs) {
    std::vector<double> out;
    out.reserve(zs.size());
    for (const Cx& z : zs) out.push_back(psi_eval(a, z));
    return out;
}

}  // namespace reference

std::string field_to_csv(const ScalarField& field) {
    std::string s = "x,y,psi\n";
    for (std::size_t j = 0; j < field.grid.ny; ++j)
        for (std::size_t i = 0; i < field.grid.nx; ++i) {
            s += fmt_num(field.grid.x(i));
            s += ',';
            s += fmt_num(field.grid.y(j));
            s += ',';
            s += fmt_num(field.at(i, j));
            s += '\n';
        }
    return s;
}

}  // namespace pslab
