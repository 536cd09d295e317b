#include "pslab/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pslab {

PowerSeries::PowerSeries(std::vector<Cx> c) : coeffs(std::move(c)) {
    require(!coeffs.empty(), "power series needs at least one coefficient");
    for (const Cx& v : coeffs) require(is_finite(v), "power series coefficients must be finite");
}

Cx PowerSeries::eval(Cx z) const {
    Cx s{};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) s = s * z + *it;
    return s;
}

double PowerSeries::max_abs() const {
    double m = 0.0;
    for (const Cx& v : coeffs) m = std::max(m, std::abs(v));
    return m;
}

PowerSeries operator+(const PowerSeries& p, const PowerSeries& q) {
    std::vector<Cx> c(std::max(p.size(), q.size()));
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = p[k] + q[k];
    return PowerSeries(std::move(c));
}

PowerSeries multiply(const PowerSeries& p, const PowerSeries& q, std::size_t n) {
    require(n >= 1, "product length must be positive");
    std::vector<Cx> c(n);
    for (std::size_t k = 0; k < n; ++k) {
        Cx s{};
        const std::size_t lo = k >= q.size() ? k - q.size() + 1 : 0;
        for (std::size_t i = lo; i <= k && i < p.size(); ++i) s += p.coeffs[i] * q.coeffs[k - i];
        c[k] = s;
    }
    return PowerSeries(std::move(c));
}

PowerSeries series_sqrt(const PowerSeries& p) {
    const Cx p0 = p.coeffs[0];
    if (p0.imag() == 0.0 && p0.real() <= 0.0)
        fail(ErrorKind::branch, "series_sqrt: constant term lies on the branch cut (-inf, 0]");
    const std::size_t n = p.size();
    std::vector<Cx> q(n);
    q[0] = std::sqrt(p0);
    const Cx inv = 1.0 / (2.0 * q[0]);
    for (std::size_t k = 1; k < n; ++k) {
        Cx s = p.coeffs[k];
        for (std::size_t i = 1; i < k; ++i) s -= q[i] * q[k - i];
        q[k] = s * inv;
        if (!(std::abs(q[k]) <= kSeriesOverflow))
            fail(ErrorKind::overflow, "series_sqrt: coefficient " + std::to_string(k) + " exceeds 1e100");
    }
    return PowerSeries(std::move(q));
}

PowerSeries ft_series(Cx t, std::size_t n) {
    require(n >= 1, "ft_series needs n >= 1");
    require(is_finite(t), "ft_series needs finite t");
    if (t == Cx{}) fail(ErrorKind::branch, "ft_series: t = 0 has no analytic square root at 0");
    std::vector<Cx> p(n);
    p[0] = t;
    if (n > 1) p[1] = -1.0;
    if (n > 2) p[2] = 1.0;
    return series_sqrt(PowerSeries(std::move(p)));
}

double sqrt_coefficient(std::size_t n) {
    require(n >= 1, "c_n is defined for n >= 1");
    // B(1/2, n+1) = Gamma(1/2) Gamma(n+1) / Gamma(n+3/2) = 2 prod_{k=1..n} k/(k+1/2).
    double beta = 2.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        beta *= kk / (kk + 0.5);
    }
    const double nn = static_cast<double>(n);
    return 1.0 / (2.0 * (nn + 0.5) * (nn - 0.5) * beta);
}

ClosedForm closed_form_coeffs(Cx t, std::size_t n) {
    require(is_finite(t), "closed_form_coeffs needs finite t");
    const double r = std::abs(t - 0.25);
    if (!(r > 0.0 && r < 0.25))
        fail(ErrorKind::precondition, "closed_form_coeffs needs 0 < |t - 1/4| < 1/4");
    require(n >= 1, "closed_form_coeffs needs n >= 1");
    ClosedForm cf{};
    const Cx w = std::sqrt(0.25 - t);
    cf.z1 = 0.5 + w;
    cf.z2 = 0.5 - w;
    cf.a = std::sqrt(cf.z2 - cf.z1) * std::sqrt(cf.z1);
    cf.b = std::sqrt(cf.z1 - cf.z2) * std::sqrt(cf.z2);
    cf.rho = std::min(std::abs(cf.z1), std::abs(cf.z2));
    cf.c_n = sqrt_coefficient(n);
    const double nn = static_cast<double>(n);
    cf.h_hat = -cf.c_n * (cf.a * std::pow(cf.z1, -nn) + cf.b * std::pow(cf.z2, -nn));
    cf.g_bound = std::pow(cf.rho, -nn) / (nn * nn);
    return cf;
}

PowerSeries named_series(const std::string& name, std::size_t n) {
    require(n >= 1, "series length must be positive");
    std::vector<Cx> c(n);
    if (name == "sqrt1mz") {
        c[0] = 1.0;
        for (std::size_t k = 1; k < n; ++k) c[k] = -sqrt_coefficient(k);
    } else if (name == "log1mz") {
        for (std::size_t k = 1; k < n; ++k) c[k] = 1.0 / static_cast<double>(k);
    } else if (name == "one") {
        c[0] = 1.0;
    } else {
        fail(ErrorKind::invalid_input, "unknown series '" + name + "' (sqrt1mz, log1mz, one)");
    }
    return PowerSeries(std::move(c));
}

}  // namespace pslab
