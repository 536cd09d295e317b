#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pslab/checks.hpp"
#include "pslab/field.hpp"
#include "pslab/models.hpp"

namespace pslab {

struct ConvergenceOptions {
    std::optional<std::pair<double, double>> annulus;  // keep nodes with r_min <= |z| <= r_max
    double tol = 1e-4;
    std::size_t baseline_factor = 2;  // rect-section baseline size = factor * max(sizes)
};

struct ConvergenceRow {
    std::size_t n;
    double sup_error;
    Cx argmax;
};

struct ConvergenceTable {
    std::string model;
    std::string reference;  // "psi_oracle" or "rect_section"
    bool quasitriangular = false;
    bool negative_control = false;
    std::size_t nodes = 0;
    std::size_t excluded = 0;  // nodes without a usable reference value
    std::vector<ConvergenceRow> rows;
    bool nonincreasing = false;
    bool pass = false;
};

/// sup over grid nodes of |Psi_{T_n} - reference| per section size n.
/// Quasitriangular models are compared with psi_oracle; the rest with sigma_min of a large
/// rectangular section (an estimate of j_T), which exposes the persistent gap.
ConvergenceTable convergence_study(const OperatorModel& m, const GridSpec& grid, const std::vector<std::size_t>& sizes,
                                   const ConvergenceOptions& opts = {});

namespace reference {
ConvergenceTable convergence_study(const OperatorModel& m, const GridSpec& grid, const std::vector<std::size_t>& sizes,
                                   const ConvergenceOptions& opts = {});
}

struct SupportRow {
    double theta;
    std::size_t n;
    double rho;
};

struct SupportTable {
    std::vector<SupportRow> rows;
    double max_decrease = 0.0;  // worst rho(T_n) - rho(T_{n'}) over n < n'
    bool pass = false;          // nondecreasing within 1e-10
};

SupportTable support_convergence(const OperatorModel& m, const std::vector<double>& thetas,
                                 const std::vector<std::size_t>& sizes);

/// Direct-sum min law with a normal summand diag(K): dist(z, K) never lowers Psi_T below itself when
/// K sits in the spectrum, and sections of T (+) diag(K) obey Psi = min(Psi_{T_n}, dist to K_n).
PropertyReport join_check(const OperatorModel& t, const std::vector<Cx>& k_points, const std::vector<Cx>& zs,
                          std::size_t section_size = 32);

std::string convergence_to_csv(const ConvergenceTable& t);
json convergence_to_json(const ConvergenceTable& t);
std::string support_to_csv(const SupportTable& t);

}  // namespace pslab
