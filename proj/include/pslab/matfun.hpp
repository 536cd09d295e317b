#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pslab/linalg.hpp"
#include "pslab/series.hpp"

namespace pslab {

/// Lower-triangular Toeplitz N x N with first column q[0..N-1], i.e. q(J_N).
CMatrix toeplitz_of_series(const PowerSeries& q, std::size_t n);

/// S_N = 4 J_N - 4 J_N^2.
CMatrix s_matrix(std::size_t n);

/// sqrt(tau - S_N) = 2 f_{tau/4}(J_N).
CMatrix sqrt_shifted(Cx tau, std::size_t n);

struct ScanRow {
    std::size_t n;
    double min_norm;
    Cx argmin_tau;
    bool saturated;  // some coefficient passed the 1e100 guard
};

struct LemmaRow {
    Cx t;
    std::optional<std::size_t> first_n;  // first n with |f_n(t)| > M
    double max_coeff;                    // max_{1<=n<=n_max} |f_n(t)|
};

struct OscillationScanResult {
    double r = 0.0;
    double m = 0.0;
    std::vector<ScanRow> per_n;
    std::optional<std::size_t> n_star;
    std::vector<std::pair<std::size_t, double>> contrast;  // ||sqrt(I - S_N)|| on the ladder
    std::vector<LemmaRow> lemma;
    double lemma_m = 0.0;
};

inline constexpr std::size_t kTauSamples = 64;

/// Coefficient-level scan on |t - 1/4| = rt: max_{1<=n<=N} |f_n(t)| against M, 64 samples.
std::vector<LemmaRow> lemma_scan(double rt, double m, std::size_t n_max);

/// min over 64 tau on |tau - 1| = r of ||sqrt(tau - S_N)|| for each ladder size, plus the tau = 1
/// contrast and the coefficient scan on |t - 1/4| = r/4 (threshold lemma_m, up to the largest N).
OscillationScanResult oscillation_scan(double r, double m, const std::vector<std::size_t>& ladder,
                                       double lemma_m = 1e3);

struct MultiplierRow {
    std::size_t n;
    double norm;
    std::string method;  // "svd" or "power"
    int iterations;
};

inline constexpr std::size_t kDenseNormLimit = 1024;

/// ||q(J_N)|| per ladder size; dense SVD up to 1024, power iteration from the constant vector beyond.
std::vector<MultiplierRow> multiplier_growth(const PowerSeries& q, const std::vector<std::size_t>& ladder);

/// Parses "start:stop:step" (arithmetic) or "start:stop" (doubling).
std::vector<std::size_t> parse_ladder(const std::string& text);

std::string scan_to_csv(const OscillationScanResult& r);
std::string contrast_to_csv(const OscillationScanResult& r);
std::string lemma_to_csv(const std::vector<LemmaRow>& rows, double m);
std::string multiplier_to_csv(const std::vector<MultiplierRow>& rows);

}  // namespace pslab
