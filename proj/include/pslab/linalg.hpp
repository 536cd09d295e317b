#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "pslab/error.hpp"

namespace pslab {

using Cx = std::complex<double>;

inline bool is_finite(Cx z) noexcept { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Dense complex matrix, row-major. Always at least 1x1.
class CMatrix {
public:
    CMatrix(std::size_t rows, std::size_t cols);
    CMatrix(std::size_t rows, std::size_t cols, std::vector<Cx> data);

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const Cx> d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }

    Cx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    Cx operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<Cx> data() noexcept { return data_; }
    std::span<const Cx> data() const noexcept { return data_; }

    CMatrix adjoint() const;
    /// A - z I (square only).
    CMatrix shifted(Cx z) const;
    CMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(Cx s);

    double frobenius_norm() const;
    double max_abs() const;

    friend bool operator==(const CMatrix& a, const CMatrix& b) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Cx> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(Cx s, CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
std::vector<Cx> operator*(const CMatrix& a, std::span<const Cx> x);

CMatrix matrix_power(const CMatrix& a, unsigned k);
CMatrix block_diag(std::span<const CMatrix> blocks);

/// N x N Jordan block with ones on the first subdiagonal.
CMatrix jordan_block(std::size_t n);

/// Singular values in descending order.
std::vector<double> singular_values(const CMatrix& a);

/// inf ||A x|| over unit x; the smallest singular value. Requires rows >= cols.
double sigma_min(const CMatrix& a);

/// Largest singular value.
double op_norm(const CMatrix& a);

/// Psi_A(z) = ||(A - z)^{-1}||^{-1} = sigma_min(A - zI); zero on the spectrum up to rounding.
double psi_eval(const CMatrix& a, Cx z);

/// rho_theta(A) = sup Re <e^{-i theta} A h, h>: top eigenvalue of the Hermitian part of e^{-i theta} A.
double support_function(const CMatrix& a, double theta);

/// Eigenvalues of a general square matrix (LAPACK order).
std::vector<Cx> eigenvalues(const CMatrix& a);

/// Eigenvalues of a Hermitian matrix, ascending.
std::vector<double> hermitian_eigenvalues(const CMatrix& h);

/// Q factor of a thin QR (rows >= cols) with R's diagonal made real positive.
CMatrix orthonormalize_columns(const CMatrix& a);

struct PowerNormOptions {
    double tol = 1e-10;
    int max_iter = 10000;
};

struct PowerNormResult {
    double norm;
    int iterations;
    bool converged;
};

/// ||A|| by power iteration on A^*A, given matvecs for A and A^*.
/// Every iterate is a lower bound for the true norm.
PowerNormResult power_norm(std::size_t n,
                           const std::function<std::vector<Cx>(std::span<const Cx>)>& apply,
                           const std::function<std::vector<Cx>(std::span<const Cx>)>& apply_adjoint,
                           std::span<const Cx> start, PowerNormOptions opts = {});

}  // namespace pslab
