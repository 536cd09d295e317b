#pragma once

#include <string>
#include <vector>

#include "pslab/linalg.hpp"
#include "pslab/matrix_io.hpp"

namespace pslab {

enum class DomainKind { disc, ellipse, custom };

/// Simply connected domain with a smooth (or polygonal, for custom) boundary containing 0.
/// Ellipse: center + a cos t + i b sin t. Custom: closed polygon through the given samples.
/// With `conjugate` set the domain is replaced by its complex conjugate.
struct DomainSpec {
    DomainKind kind = DomainKind::disc;
    Cx center{};
    double radius = 1.0;  // disc
    double a = 1.0;       // ellipse semi-axes
    double b = 1.0;
    std::vector<Cx> samples;  // custom
    bool conjugate = false;

    static DomainSpec disc(double r, Cx c = {});
    static DomainSpec ellipse(double a, double b, Cx c = {});
    static DomainSpec custom(std::vector<Cx> pts);

    void validate() const;
    /// gamma(t) and |gamma'(t)| for t in [0, 2 pi); custom domains are not parametrized.
    std::pair<Cx, double> boundary(double t) const;
    /// m boundary points at equal parameter steps (custom: the samples themselves).
    std::vector<Cx> boundary_samples(std::size_t m) const;
    /// Winding test against a dense boundary sampling.
    bool contains(Cx z) const;
    /// Distance from z to the boundary curve, refined past the sampling resolution.
    double boundary_distance(Cx z) const;
    /// Largest |z| over the boundary.
    double max_modulus() const;
};

json domain_to_json(const DomainSpec& d);
DomainSpec domain_from_json(const json& j);

struct QuadratureRule {
    std::vector<Cx> nodes;
    std::vector<double> weights;

    double total_weight() const;
};

/// Trapezoid rule in the curve parameter with weights |gamma'| 2pi/m. m >= 16.
QuadratureRule quadrature(const DomainSpec& d, std::size_t m);

inline constexpr double kGramCondCap = 1e12;
inline constexpr double kOrthonormalityTol = 1e-8;

/// Monomial Gram matrix G[j][k] = sum_q w_q z_q^k conj(z_q^j).
/// Throws ConditioningError if the diagonally equilibrated Gram has cond > 1e12.
CMatrix gram(const DomainSpec& d, std::size_t k, std::size_t m);

/// 1-norm condition estimate of the Jacobi-equilibrated Hermitian matrix (inf if not PD).
double equilibrated_cond(const CMatrix& g);

/// Orthonormal polynomial basis e_0..e_{K-1} of H^2(domain), built in scaled monomials (z/s)^k
/// with s = max |boundary|.
class HardyBasis {
public:
    /// Requests K functions; K is reduced until the Gram is well conditioned and the
    /// orthonormality defect is <= 1e-8. Throws ConditioningError if even K = 1 fails.
    static HardyBasis build(const DomainSpec& d, std::size_t k, std::size_t m);
    /// K = max(2N, 64), m = max(4K, 512).
    static HardyBasis for_block(const DomainSpec& d, std::size_t n);

    const DomainSpec& domain() const { return domain_; }
    std::size_t size() const { return k_; }
    std::size_t requested_size() const { return k_requested_; }
    double cond_estimate() const { return cond_; }
    double orthonormality_defect() const { return defect_; }
    double scale() const { return scale_; }
    const QuadratureRule& rule() const { return rule_; }

    /// Upper-triangular coefficients in monomials: e_j = sum_k coeff(k, j) z^k.
    CMatrix coeff() const;
    /// Same in scaled monomials (z/scale)^k.
    const CMatrix& scaled_coeff() const { return coeff_scaled_; }
    /// e_j^{(l)}(0) = l! coeff(l, j).
    Cx derivative_at_zero(std::size_t j, std::size_t l) const;
    /// Values e_j(z_q) at the quadrature nodes, m x K.
    const CMatrix& node_values() const { return values_; }

private:
    DomainSpec domain_;
    QuadratureRule rule_;
    std::size_t k_ = 0;
    std::size_t k_requested_ = 0;
    double scale_ = 1.0;
    double cond_ = 1.0;
    double defect_ = 0.0;
    CMatrix coeff_scaled_{1, 1};
    CMatrix values_{1, 1};
};

/// (K-1) x (K-1) matrix of multiplication by z in the orthonormal basis (upper Hessenberg).
CMatrix mult_matrix(const HardyBasis& basis);

struct NilpotentBlock {
    std::size_t n = 0;
    CMatrix matrix{1, 1};
    DomainSpec domain;
    double residual = 0.0;  // ||matrix^N||
    std::size_t basis_size = 0;
    double cond_estimate = 0.0;
};

inline constexpr double kNilpotencyTol = 1e-6;

/// M^* compressed to span{k_0, k_0', ..., k_0^{(N-1)}} = ker (M^*)^N. Requires N <= K/2.
/// Throws construction if ||T^N|| > 1e-6 max(1, ||T||)^N.
NilpotentBlock nilpotent_block(const HardyBasis& basis, std::size_t n);
NilpotentBlock nilpotent_block(const DomainSpec& d, std::size_t n);

struct LimitValue {
    double value;
    bool ambiguous;
};

/// Limit of Psi of the blocks built on d as N grows: dist(conj z, clos d) (0 inside).
LimitValue block_psi_limit(const DomainSpec& d, Cx z);

}  // namespace pslab
