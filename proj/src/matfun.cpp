#include "pslab/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pslab/matrix_io.hpp"
#include "pslab/parallel.hpp"

namespace pslab {

CMatrix toeplitz_of_series(const PowerSeries& q, std::size_t n) {
    require(n >= 1, "Toeplitz size must be >= 1");
    require(q.size() >= n, "series has " + std::to_string(q.size()) + " coefficients, need " + std::to_string(n));
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) a(i, j) = q.coeffs[i - j];
    return a;
}

CMatrix s_matrix(std::size_t n) {
    std::vector<Cx> c(std::max<std::size_t>(n, 3));
    c[1] = 4.0;
    c[2] = -4.0;
    return toeplitz_of_series(PowerSeries(std::move(c)), n);
}

CMatrix sqrt_shifted(Cx tau, std::size_t n) {
    require(is_finite(tau), "tau must be finite");
    CMatrix a = toeplitz_of_series(ft_series(tau / 4.0, n), n);
    a *= 2.0;
    return a;
}

std::vector<LemmaRow> lemma_scan(double rt, double m, std::size_t n_max) {
    require(rt > 0.0 && rt < 0.25, "lemma scan needs 0 < r < 1/4");
    require(n_max >= 1, "lemma scan needs n_max >= 1");
    std::vector<LemmaRow> rows(kTauSamples);
    parallel_for(kTauSamples, [&](std::size_t k) {
        const Cx t = 0.25 + std::polar(rt, 2.0 * std::numbers::pi * static_cast<double>(k) / kTauSamples);
        LemmaRow row{t, std::nullopt, 0.0};
        PowerSeries f;
        std::size_t len = n_max + 1;
        // Past the overflow guard the scan stops; M is reached long before in practice.
        for (;;) {
            try {
                f = ft_series(t, len);
                break;
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::overflow || len <= 2) throw;
                len /= 2;
            }
        }
        for (std::size_t n = 1; n < f.size(); ++n) {
            const double v = std::abs(f.coeffs[n]);
            row.max_coeff = std::max(row.max_coeff, v);
            if (!row.first_n && v > m) row.first_n = n;
        }
        rows[k] = row;
    });
    return rows;
}

OscillationScanResult oscillation_scan(double r, double m, const std::vector<std::size_t>& ladder, double lemma_m) {
    if (!(r > 0.0 && r < 0.5)) fail(ErrorKind::invalid_input, "oscillation scan needs 0 < r < 1/2");
    require(std::isfinite(m) && m > 0.0, "M must be positive");
    require(!ladder.empty(), "ladder must not be empty");
    OscillationScanResult res;
    res.r = r;
    res.m = m;
    res.lemma_m = lemma_m;

    const std::size_t nl = ladder.size();
    std::vector<double> norms(nl * kTauSamples, 0.0);
    std::vector<char> sat(nl * kTauSamples, 0);
    parallel_for(norms.size(), [&](std::size_t idx) {
        const std::size_t li = idx / kTauSamples, k = idx % kTauSamples;
        const Cx tau = 1.0 + std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(k) / kTauSamples);
        try {
            norms[idx] = op_norm(sqrt_shifted(tau, ladder[li]));
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::overflow) throw;
            norms[idx] = INFINITY;
            sat[idx] = 1;
        }
    });
    for (std::size_t li = 0; li < nl; ++li) {
        ScanRow row{ladder[li], INFINITY, Cx{}, false};
        for (std::size_t k = 0; k < kTauSamples; ++k) {
            const std::size_t idx = li * kTauSamples + k;
            row.saturated = row.saturated || sat[idx];
            if (norms[idx] < row.min_norm) {
                row.min_norm = norms[idx];
                row.argmin_tau = 1.0 + std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(k) / kTauSamples);
            }
        }
        if (!res.n_star && row.min_norm >= m) res.n_star = row.n;
        res.per_n.push_back(row);
        res.contrast.emplace_back(ladder[li], op_norm(sqrt_shifted(1.0, ladder[li])));
    }
    res.lemma = lemma_scan(r / 4.0, lemma_m, *std::max_element(ladder.begin(), ladder.end()));
    return res;
}

std::vector<MultiplierRow> multiplier_growth(const PowerSeries& q, const std::vector<std::size_t>& ladder) {
    require(!ladder.empty(), "ladder must not be empty");
    std::vector<MultiplierRow> rows;
    for (std::size_t n : ladder) {
        require(q.size() >= n, "series has " + std::to_string(q.size()) + " coefficients, need " + std::to_string(n));
        if (n <= kDenseNormLimit) {
            rows.push_back({n, op_norm(toeplitz_of_series(q, n)), "svd", 0});
            continue;
        }
        const auto& c = q.coeffs;
        auto apply = [&](std::span<const Cx> x) {
            std::vector<Cx> y(n);
            for (std::size_t i = 0; i < n; ++i) {
                Cx s{};
                for (std::size_t j = 0; j <= i; ++j) s += c[i - j] * x[j];
                y[i] = s;
            }
            return y;
        };
        auto apply_adj = [&](std::span<const Cx> x) {
            std::vector<Cx> y(n);
            for (std::size_t j = 0; j < n; ++j) {
                Cx s{};
                for (std::size_t i = j; i < n; ++i) s += std::conj(c[i - j]) * x[i];
                y[j] = s;
            }
            return y;
        };
        const std::vector<Cx> start(n, Cx{1.0 / std::sqrt(static_cast<double>(n))});
        const PowerNormResult pr = power_norm(n, apply, apply_adj, start);
        rows.push_back({n, pr.norm, pr.converged ? "power" : "power(unconverged)", pr.iterations});
    }
    return rows;
}

std::vector<std::size_t> parse_ladder(const std::string& text) {
    std::vector<long long> parts;
    std::stringstream ss(text);
    std::string item;
    try {
        while (std::getline(ss, item, ':')) {
            std::size_t pos = 0;
            parts.push_back(std::stoll(item, &pos));
            require(pos == item.size(), "bad ladder entry '" + item + "'");
        }
    } catch (const std::logic_error&) {
        fail(ErrorKind::invalid_input, "cannot parse ladder '" + text + "'");
    }
    require(parts.size() == 2 || parts.size() == 3, "ladder must be start:stop:step or start:stop");
    const long long start = parts[0], stop = parts[1];
    require(start >= 1 && stop >= start, "ladder needs 1 <= start <= stop");
    std::vector<std::size_t> out;
    if (parts.size() == 3) {
        const long long step = parts[2];
        require(step >= 1, "ladder step must be >= 1");
        for (long long v = start; v <= stop; v += step) out.push_back(static_cast<std::size_t>(v));
    } else {
        for (long long v = start; v <= stop; v *= 2) out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::string scan_to_csv(const OscillationScanResult& r) {
    std::string s = "N,min_norm,argmin_tau_re,argmin_tau_im,N_star_flag\n";
    for (const auto& row : r.per_n) {
        const bool star = r.n_star && *r.n_star == row.n;
        s += std::to_string(row.n) + "," + fmt_num(row.min_norm) + "," + fmt_num(row.argmin_tau.real()) + "," +
             fmt_num(row.argmin_tau.imag()) + "," + (star ? "1" : "0") + "\n";
    }
    return s;
}

std::string contrast_to_csv(const OscillationScanResult& r) {
    std::string s = "N,norm_tau_1,min_norm_circle\n";
    for (std::size_t k = 0; k < r.contrast.size(); ++k)
        s += std::to_string(r.contrast[k].first) + "," + fmt_num(r.contrast[k].second) + "," +
             fmt_num(r.per_n[k].min_norm) + "\n";
    return s;
}

std::string lemma_to_csv(const std::vector<LemmaRow>& rows, double m) {
    std::string s = "t_re,t_im,first_n_above_M,max_coeff,M\n";
    for (const auto& row : rows)
        s += fmt_num(row.t.real()) + "," + fmt_num(row.t.imag()) + "," +
             (row.first_n ? std::to_string(*row.first_n) : std::string("none")) + "," + fmt_num(row.max_coeff) + "," +
             fmt_num(m) + "\n";
    return s;
}

std::string multiplier_to_csv(const std::vector<MultiplierRow>& rows) {
    std::string s = "N,norm,method,iterations\n";
    for (const auto& row : rows)
        s += std::to_string(row.n) + "," + fmt_num(row.norm) + "," + row.method + "," + std::to_string(row.iterations) + "\n";
    return s;
}

}  // namespace pslab
