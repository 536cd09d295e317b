#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pslab/linalg.hpp"

namespace pslab {

struct GridSpec {
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    std::size_t nx = 2, ny = 2;

    void validate() const;
    double dx() const { return (x_max - x_min) / static_cast<double>(nx - 1); }
    double dy() const { return (y_max - y_min) / static_cast<double>(ny - 1); }
    double x(std::size_t i) const;
    double y(std::size_t j) const;
    Cx node(std::size_t i, std::size_t j) const { return {x(i), y(j)}; }
    std::size_t size() const { return nx * ny; }
};

/// Parses "xmin:xmax:ymin:ymax:nx:ny".
GridSpec parse_grid(const std::string& text);

/// Values stored row-major over y then x: values[j * nx + i] sits at node(i, j).
struct ScalarField {
    GridSpec grid;
    std::vector<double> values;

    double at(std::size_t i, std::size_t j) const { return values[j * grid.nx + i]; }
    double max_value() const;
};

using PointFunction = std::function<double(Cx)>;

/// Psi_A on every grid node. Parallel over nodes; each node writes its own slot.
ScalarField compute_field(const CMatrix& a, const GridSpec& grid);
/// Same for an arbitrary pointwise function (must be safe to call concurrently).
ScalarField compute_field(const PointFunction& f, const GridSpec& grid);

/// Psi_A at a list of points, parallel over points.
std::vector<double> psi_at(const CMatrix& a, std::span<const Cx> zs);
std::vector<double> evaluate_at(const PointFunction& f, std::span<const Cx> zs);

namespace reference {
// Serial versions, kept for the bitwise-equality tests and the benchmark.
ScalarField compute_field(const CMatrix& a, const GridSpec& grid);
std::vector<double> psi_at(const CMatrix& a, std::span<const Cx> zs);
}  // namespace reference

/// CSV with header x,y,psi, rows in storage order.
std::string field_to_csv(const ScalarField& field);

}  // namespace pslab
