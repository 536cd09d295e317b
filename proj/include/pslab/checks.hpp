#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pslab/linalg.hpp"
#include "pslab/matrix_io.hpp"
#include "pslab/sampling.hpp"

namespace pslab {

struct PropertyReport {
    PropertyReport() = default;
    PropertyReport(std::string n, double tol) : name(std::move(n)), tolerance(tol) {}

    std::string name;
    std::size_t samples = 0;   // samples actually checked
    std::size_t excluded = 0;  // samples dropped for violating a precondition
    double max_violation = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    std::vector<json> witnesses;  // offending inputs, capped
    std::map<std::string, double> metrics;
    std::string note;

    /// Folds one sample's violation (clamped at 0) into the report.
    void record(double violation, const json& witness);
    void finalize();
};

json report_to_json(const PropertyReport& r);

// Every checker evaluates Psi through psi_eval on the given matrix.

/// |Psi(z) - Psi(z')| <= |z - z'|.
PropertyReport check_lip1(const CMatrix& a, const std::vector<std::pair<Cx, Cx>>& pairs);

/// |z| - rho_theta <= Psi(z) <= sqrt(|z|^2 - 2 rho_theta |z| + ||A||^2), theta = arg z, plus the
/// gap bound |(|z| - Psi) - rho_theta| <= (||A||^2 - rho_theta^2) / (2(|z| - rho_theta)).
PropertyReport check_band(const CMatrix& a, const std::vector<Cx>& zs);

/// Psi(z0)/|z0| <= Psi(z)/|z| (1 + eps_{z,z0}) in both orders and the Lip_{||A||/c^2} bound on
/// Psi/|.| outside the disc of radius c. Requires c > ||A||.
PropertyReport check_ratio(const CMatrix& a, const std::vector<std::pair<Cx, Cx>>& pairs, double c);

/// Three-point semiconvexity of 1/Psi on [mu - eta, mu + eta] with C' = 2 (min Psi)^-3.
PropertyReport check_semiconvex(const CMatrix& a, const std::vector<Segment>& segments);

/// Sub-mean-value inequality for -log Psi on circles.
PropertyReport check_subharmonic(const CMatrix& a, const std::vector<Disc>& discs);

inline constexpr double kLipTol = 1e-9;
inline constexpr double kBandTol = 1e-9;
inline constexpr double kRatioTol = 1e-9;
inline constexpr double kSemiconvexTol = 1e-8;
inline constexpr double kSubharmonicTol = 1e-6;
inline constexpr double kSpectrumMargin = 1e-6;

/// Runs all five checkers on reproducible samples scaled to ||A||.
std::vector<PropertyReport> run_property_suite(const CMatrix& a, const std::vector<std::string>& props,
                                               std::size_t samples, Lcg64& rng);

}  // namespace pslab
