#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pslab/linalg.hpp"
#include "pslab/matrix_io.hpp"
#include "pslab/series.hpp"

namespace pslab {

enum class ShiftDirection { forward, backward };

/// forward: T e_k = w_k e_{k+1}; backward: T e_{k+1} = w_k e_k. Weights repeat periodically.
struct UnilateralShift {
    ShiftDirection direction = ShiftDirection::forward;
    std::vector<Cx> weights{Cx{1.0}};
};

/// On l^2(Z): T e_j = e_{j+1} for j != 0 and T e_0 = s e_1. Sections use the window [-n, n].
struct BilateralShift {
    Cx s{1.0};
};

/// Lower-triangular Toeplitz T_psi with polynomial symbol psi (adjoint: its upper-triangular adjoint).
struct AnalyticToeplitz {
    PowerSeries symbol;
    bool adjoint = false;
};

/// Diagonal operator. Either a finite list repeated cyclically, or a Halton net that is dense in
/// the closed disc |z - center| <= radius.
struct DiagonalNormal {
    std::vector<Cx> values;
    std::optional<std::pair<Cx, double>> disc_net;

    Cx eigenvalue(std::size_t k) const;
};

struct OperatorModel;

/// Children interleaved round-robin: global index g belongs to child g % m at local index g / m.
struct DirectSum {
    std::vector<OperatorModel> children;
};

struct OperatorModel {
    std::variant<UnilateralShift, BilateralShift, AnalyticToeplitz, DiagonalNormal, DirectSum> v;

    static OperatorModel forward_shift() { return {UnilateralShift{ShiftDirection::forward, {1.0}}}; }
    static OperatorModel backward_shift() { return {UnilateralShift{ShiftDirection::backward, {1.0}}}; }
};

struct Band {
    std::size_t lower = 0;
    std::size_t upper = 0;
};

/// Band in the model's own section indexing.
Band band(const OperatorModel& m);
/// Quasitriangular with respect to the standard filtration (section-lower block vanishes).
bool qt_standard(const OperatorModel& m);
double norm_bound(const OperatorModel& m);
bool is_bilateral(const OperatorModel& m);
std::string variant_name(const OperatorModel& m);

/// Matrix of P_n T P_n; for bilateral models the (2n+1)x(2n+1) window on e_{-n}..e_n.
CMatrix section(const OperatorModel& m, std::size_t n);

/// (T - z) restricted to the n-window, all rows it reaches: (n + lower) x n.
/// sigma_min of this is j of T - z on that subspace.
CMatrix rect_section(const OperatorModel& m, std::size_t n, Cx z = Cx{});

/// ||(I - P_n) T P_n||.
double qt_defect(const OperatorModel& m, std::size_t n);

struct OracleValue {
    std::optional<double> value;
    bool ambiguous = false;
};

/// Closed-form Psi_T(z) where one is known.
OracleValue psi_oracle(const OperatorModel& m, Cx z);

/// Winding number of the closed sampled curve around z.
int winding_number(const std::vector<Cx>& curve, Cx z);

json model_to_json(const OperatorModel& m);
OperatorModel model_from_json(const json& j);

}  // namespace pslab
