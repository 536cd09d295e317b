#pragma once

#include <vector>

#include "pslab/field.hpp"
#include "pslab/matrix_io.hpp"

namespace pslab {

/// Boundary of {field < epsilon} as polylines. Closed curves repeat their first vertex at the end.
struct LevelSet {
    double epsilon = 0.0;
    std::vector<std::vector<Cx>> polylines;

    bool is_closed(std::size_t k) const {
        const auto& p = polylines[k];
        return p.size() > 2 && p.front() == p.back();
    }
};

/// Marching squares with linear interpolation along cell edges.
/// Saddle cells are split by comparing the cell-center average with epsilon.
LevelSet extract_level(const ScalarField& field, double eps);

json levelset_to_json(const LevelSet& ls);
json levelsets_to_json(const std::vector<LevelSet>& sets);

}  // namespace pslab
