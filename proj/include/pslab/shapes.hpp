#pragma once

#include <cstdint>
#include <vector>

#include "pslab/checks.hpp"
#include "pslab/hardy.hpp"

namespace pslab {

struct ShapeProblem {
    std::vector<DomainSpec> domains;  // G_0 containing G_1 containing ... G_m
    double eps1 = 0.0;
};

ShapeProblem problem_from_json(const json& j);

struct ShapeOptions {
    std::size_t cap = 512;
    std::size_t boundary_samples = 256;
    std::size_t interior_samples = 64;
    std::uint64_t seed = 0x5EED;
    double interpolation = 0.75;  // weight of G_j when placing Omega_j between G_{j-1} and G_j
};

struct ShapeResult {
    std::vector<DomainSpec> omegas;
    std::vector<double> eps;
    std::vector<std::size_t> ns;
    std::vector<NilpotentBlock> blocks;
    CMatrix t{1, 1};
    double delta = 0.0;
    PropertyReport verification;
    double blockwise_law_deviation = 0.0;  // max |Psi_T - min_j Psi_{T_j}| on random samples
};

/// Boundary-to-boundary distance, sampled on `inner` and refined against `outer`.
double boundary_gap(const DomainSpec& outer, const DomainSpec& inner, std::size_t samples = 256);

/// Throws nesting unless every domain strictly contains the next.
void check_nesting(const std::vector<DomainSpec>& domains, std::size_t samples = 256);

/// Omega_j between G_{j-1} and G_j; disc and ellipse inputs only.
/// Throws InfeasibleEpsilon if eps1 >= dist(bd G_0, bd Omega_1).
std::vector<DomainSpec> plan_domains(const ShapeProblem& p, const ShapeOptions& opts = {});

/// Boundary samples plus a seeded radial-angular interior grid: a sampling of clos G.
std::vector<Cx> closure_samples(const DomainSpec& g, const ShapeOptions& opts);
/// Points at distance `offset` outside the boundary.
std::vector<Cx> exterior_ring(const DomainSpec& g, double offset, std::size_t samples);

/// Psi of a block diagonal matrix given by its blocks: min over blocks.
double psi_blocks(const std::vector<CMatrix>& blocks, Cx z);

struct BlockChoice {
    std::size_t n = 0;
    NilpotentBlock block;
    double max_inner = 0.0;       // max Psi on the inner samples
    double min_outer = INFINITY;  // min Psi on the outer samples (if any)
};

/// Smallest N in {8, 16, ..., cap} with Psi_block <= eps/2 on `inner` and Psi_block > eps on `outer`.
/// The block is built on conj(omega) so that its spectral limit is clos omega.
BlockChoice choose_block(const DomainSpec& omega, const std::vector<Cx>& inner, double eps,
                         const std::vector<Cx>& outer = {}, std::size_t cap = 512);

/// eps_k = 0.5 min(eps_prev, delta, 1/R), R = max resolvent norm of previous blocks on the samples.
double choose_epsilon(const std::vector<CMatrix>& prev_blocks, const std::vector<Cx>& samples, double eps_prev,
                      double delta);

struct InclusionLevel {
    double eps;
    std::vector<Cx> outside;  // must have Psi > eps (boundary of G_{k-1} and a ring beyond it)
    std::vector<Cx> inside;   // must have Psi < eps (clos G_k)
};

/// Chain check; margins below 1e-9 eps count as failures.
PropertyReport verify_inclusions(const std::vector<CMatrix>& blocks, const std::vector<InclusionLevel>& levels);

/// Sample sets for the chain G_0, ..., G_m with the given eps.
std::vector<InclusionLevel> inclusion_levels(const std::vector<DomainSpec>& g, const std::vector<double>& eps,
                                             double ring_offset, const ShapeOptions& opts);

ShapeResult construct(const ShapeProblem& p, const ShapeOptions& opts = {});

json shape_result_to_json(const ShapeResult& r, bool include_blocks);

}  // namespace pslab
