#pragma once

#include <vector>

#include "pslab/linalg.hpp"

namespace pslab {

/// Truncated Taylor series; coeffs[k] multiplies z^k.
struct PowerSeries {
    std::vector<Cx> coeffs;

    PowerSeries() : coeffs{Cx{}} {}
    explicit PowerSeries(std::vector<Cx> c);

    std::size_t size() const noexcept { return coeffs.size(); }
    Cx operator[](std::size_t k) const { return k < coeffs.size() ? coeffs[k] : Cx{}; }
    Cx eval(Cx z) const;
    double max_abs() const;
};

/// Sum, zero-padded to the longer length.
PowerSeries operator+(const PowerSeries& p, const PowerSeries& q);
/// Cauchy product truncated to n terms.
PowerSeries multiply(const PowerSeries& p, const PowerSeries& q, std::size_t n);

/// Coefficients with magnitude above this are treated as overflow.
inline constexpr double kSeriesOverflow = 1e100;

/// Principal square root through order N-1 by the coefficient recurrence.
/// Throws branch if p[0] lies on (-inf, 0], overflow if a coefficient passes kSeriesOverflow.
PowerSeries series_sqrt(const PowerSeries& p);

/// First n Taylor coefficients of f_t(z) = sqrt(z^2 - z + t) at 0.
PowerSeries ft_series(Cx t, std::size_t n);

/// sqrt(1 - z) = 1 - sum c_n z^n, c_n = 1 / (2 (n + 1/2)(n - 1/2) B(1/2, n + 1)).
double sqrt_coefficient(std::size_t n);

struct ClosedForm {
    Cx z1, z2, a, b;
    double rho;
    double c_n;
    Cx h_hat;        // -c_n (a z1^-n + b z2^-n)
    double g_bound;  // rho^-n / n^2; the constant in front is not known in closed form
};

/// Dominant part of the Taylor coefficients of f_t on 0 < |t - 1/4| < 1/4.
ClosedForm closed_form_coeffs(Cx t, std::size_t n);

/// Named test series: "sqrt1mz" (sqrt(1 - z)), "log1mz" (log 1/(1 - z)), "one".
PowerSeries named_series(const std::string& name, std::size_t n);

}  // namespace pslab
