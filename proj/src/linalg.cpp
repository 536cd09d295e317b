#include "pslab/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pslab {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_input: return "invalid-input";
        case ErrorKind::unsupported_model: return "unsupported-model";
        case ErrorKind::conditioning: return "conditioning";
        case ErrorKind::branch: return "branch";
        case ErrorKind::precondition: return "precondition";
        case ErrorKind::nesting: return "nesting";
        case ErrorKind::infeasible_epsilon: return "infeasible-epsilon";
        case ErrorKind::construction: return "construction";
        case ErrorKind::overflow: return "overflow";
        case ErrorKind::io: return "io";
    }
    return "unknown";
}

namespace {

lapack_complex_double* lp(Cx* p) { return reinterpret_cast<lapack_complex_double*>(p); }

void check_dims(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0)
        fail(ErrorKind::invalid_input, "matrix dimensions must be positive");
}

}  // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
    check_dims(rows, cols);
    data_.assign(rows * cols, Cx{});
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Cx> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    check_dims(rows, cols);
    if (data_.size() != rows * cols)
        fail(ErrorKind::invalid_input, "matrix data length " + std::to_string(data_.size()) +
                                           " does not match " + std::to_string(rows) + "x" +
                                           std::to_string(cols));
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const Cx> d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
    return t;
}

CMatrix CMatrix::shifted(Cx z) const {
    require(is_square(), "shift requires a square matrix");
    CMatrix m = *this;
    for (std::size_t i = 0; i < rows_; ++i) m(i, i) -= z;
    return m;
}

CMatrix CMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    require(r0 + nr <= rows_ && c0 + nc <= cols_, "block out of range");
    CMatrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

CMatrix& CMatrix::operator+=(const CMatrix& o) {
    require(rows_ == o.rows_ && cols_ == o.cols_, "shape mismatch in +");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& o) {
    require(rows_ == o.rows_ && cols_ == o.cols_, "shape mismatch in -");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
}

CMatrix& CMatrix::operator*=(Cx s) {
    for (auto& v : data_) v *= s;
    return *this;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

double CMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(Cx s, CMatrix a) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    require(a.cols() == b.rows(), "shape mismatch in *");
    CMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Cx aik = a(i, k);
            if (aik == Cx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

std::vector<Cx> operator*(const CMatrix& a, std::span<const Cx> x) {
    require(a.cols() == x.size(), "shape mismatch in matvec");
    std::vector<Cx> y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Cx s{};
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

CMatrix matrix_power(const CMatrix& a, unsigned k) {
    require(a.is_square(), "matrix_power requires a square matrix");
    CMatrix result = CMatrix::identity(a.rows());
    CMatrix base = a;
    while (k > 0) {
        if (k & 1u) result = result * base;
        k >>= 1u;
        if (k > 0) base = base * base;
    }
    return result;
}

CMatrix block_diag(std::span<const CMatrix> blocks) {
    require(!blocks.empty(), "block_diag needs at least one block");
    std::size_t r = 0, c = 0;
    for (const auto& b : blocks) {
        r += b.rows();
        c += b.cols();
    }
    CMatrix m(r, c);
    std::size_t r0 = 0, c0 = 0;
    for (const auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < b.cols(); ++j) m(r0 + i, c0 + j) = b(i, j);
        r0 += b.rows();
        c0 += b.cols();
    }
    return m;
}

CMatrix jordan_block(std::size_t n) {
    CMatrix j(n, n);
    for (std::size_t i = 1; i < n; ++i) j(i, i - 1) = 1.0;
    return j;
}

std::vector<double> singular_values(const CMatrix& a) {
    // The row-major buffer is A^T in column-major order; A^T has the same singular values.
    const auto m = static_cast<lapack_int>(a.cols());
    const auto n = static_cast<lapack_int>(a.rows());
    std::vector<Cx> work(a.data().begin(), a.data().end());
    std::vector<double> s(static_cast<std::size_t>(std::min(m, n)));
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, lp(work.data()), m,
                                           s.data(), nullptr, 1, nullptr, 1);
    if (info != 0)
        fail(ErrorKind::conditioning, "zgesdd failed to converge (info=" + std::to_string(info) + ")");
    return s;
}

double sigma_min(const CMatrix& a) {
    require(a.rows() >= a.cols(), "sigma_min requires rows >= cols");
    return singular_values(a).back();
}

double op_norm(const CMatrix& a) { return singular_values(a).front(); }

double psi_eval(const CMatrix& a, Cx z) {
    require(a.is_square(), "psi_eval requires a square matrix");
    require(is_finite(z), "psi_eval requires a finite point");
    return sigma_min(a.shifted(z));
}

std::vector<Cx> eigenvalues(const CMatrix& a) {
    require(a.is_square(), "eigenvalues requires a square matrix");
    const auto n = static_cast<lapack_int>(a.rows());
    // Row-major A read as column-major is A^T, which has the same eigenvalues.
    std::vector<Cx> work(a.data().begin(), a.data().end());
    std::vector<Cx> w(a.rows());
    lapack_complex_double dummy{};
    const lapack_int info =
        LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', 'N', n, lp(work.data()), n, lp(w.data()), &dummy, 1, &dummy, 1);
    if (info != 0) fail(ErrorKind::conditioning, "zgeev failed (info=" + std::to_string(info) + ")");
    return w;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& h) {
    require(h.is_square(), "hermitian_eigenvalues requires a square matrix");
    const auto n = static_cast<lapack_int>(h.rows());
    // Row-major H read as column-major is H^T = conj(H): same eigenvalues. Lower triangle used.
    std::vector<Cx> work(h.data().begin(), h.data().end());
    std::vector<double> w(h.rows());
    const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, lp(work.data()), n, w.data());
    if (info != 0)
        fail(ErrorKind::conditioning, "zheevd failed (info=" + std::to_string(info) + ")");
    return w;
}

double support_function(const CMatrix& a, double theta) {
    require(a.is_square(), "support_function requires a square matrix");
    require(std::isfinite(theta), "support_function requires a finite angle");
    const std::size_t n = a.rows();
    const Cx rot = std::polar(1.0, -theta);
    std::vector<Cx> h(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h[i * n + j] = 0.5 * (rot * a(i, j) + std::conj(rot * a(j, i)));
    if (n == 1) return h[0].real();

    const auto ln = static_cast<lapack_int>(n);
    lapack_int found = 0;
    double w = 0.0;
    lapack_complex_double zdummy{};
    std::vector<lapack_int> isuppz(2);
    const lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'N', 'I', 'L', ln, lp(h.data()), ln, 0.0,
                                           0.0, ln, ln, 0.0, &found, &w, &zdummy, 1, isuppz.data());
    if (info != 0 || found != 1)
        fail(ErrorKind::conditioning, "zheevr failed (info=" + std::to_string(info) + ")");
    return w;
}

CMatrix orthonormalize_columns(const CMatrix& a) {
    require(a.rows() >= a.cols(), "orthonormalize_columns requires rows >= cols");
    const auto m = static_cast<lapack_int>(a.rows());
    const auto n = static_cast<lapack_int>(a.cols());
    // Column-major copy.
    std::vector<Cx> q(a.rows() * a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) q[j * a.rows() + i] = a(i, j);
    std::vector<Cx> tau(a.cols());
    lapack_int info = LAPACKE_zgeqrf(LAPACK_COL_MAJOR, m, n, lp(q.data()), m, lp(tau.data()));
    if (info != 0) fail(ErrorKind::conditioning, "zgeqrf failed");
    std::vector<Cx> rdiag(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) rdiag[j] = q[j * a.rows() + j];
    info = LAPACKE_zungqr(LAPACK_COL_MAJOR, m, n, n, lp(q.data()), m, lp(tau.data()));
    if (info != 0) fail(ErrorKind::conditioning, "zungqr failed");

    CMatrix out(a.rows(), a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        const double mag = std::abs(rdiag[j]);
        const Cx phase = mag > 0.0 ? rdiag[j] / mag : Cx{1.0};
        for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) = q[j * a.rows() + i] * phase;
    }
    return out;
}

PowerNormResult power_norm(std::size_t n,
                           const std::function<std::vector<Cx>(std::span<const Cx>)>& apply,
                           const std::function<std::vector<Cx>(std::span<const Cx>)>& apply_adjoint,
                           std::span<const Cx> start, PowerNormOptions opts) {
    require(start.size() == n && n > 0, "power_norm start vector has wrong length");
    std::vector<Cx> x(start.begin(), start.end());
    auto norm2 = [](std::span<const Cx> v) {
        double s = 0.0;
        for (const auto& c : v) s += std::norm(c);
        return std::sqrt(s);
    };
    double nx = norm2(x);
    require(nx > 0.0, "power_norm start vector is zero");
    for (auto& c : x) c /= nx;

    double lambda = 0.0;
    for (int it = 1; it <= opts.max_iter; ++it) {
        std::vector<Cx> y = apply_adjoint(apply(x));
        const double ny = norm2(y);
        if (ny == 0.0) return {0.0, it, true};
        // Rayleigh quotient <A^*A x, x> = ||Ax||^2 is a lower bound for ||A||^2.
        Cx rq{};
        for (std::size_t k = 0; k < n; ++k) rq += std::conj(x[k]) * y[k];
        const double next = rq.real();
        for (std::size_t k = 0; k < n; ++k) x[k] = y[k] / ny;
        if (it > 1 && std::abs(next - lambda) <= opts.tol * next) {
            lambda = std::max(lambda, next);
            return {std::sqrt(lambda), it, true};
        }
        lambda = std::max(lambda, next);
    }
    return {std::sqrt(lambda), opts.max_iter, false};
}

}  // namespace pslab
