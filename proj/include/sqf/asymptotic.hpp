#pragma once

// The constant c = prod_p (1 - lambda(p^2) / p^4), the error term
// E(H) = S(H) - c H^2 and its growth exponent, the sawtooth rho(t) with
// its truncated Fourier series, and the harmonic lambda sums U and V.

#include "sqf/counting.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace sqf {

struct EulerProductEstimate {
    std::uint64_t cutoff = 0;
    double value = 0.0;
    // bound on |log(value) - log(c)|, hence also on |value - c|
    double tail_bound = 0.0;
};

struct ScanRow {
    std::uint64_t H = 0;
    std::uint64_t S = 0;
    double E = 0.0;
    double elapsed_seconds = 0.0;
    bool used_in_fit = false;  // false when E == 0
};

struct ScanReport {
    std::vector<ScanRow> rows;
    std::optional<double> alpha;  // needs at least 4 rows with E != 0
    EulerProductEstimate c;
};

inline constexpr std::uint64_t default_product_cutoff = 100'000;

// lambda(p^2): by enumeration for p <= 47, by p (p - (-1)^((p-1)/2)) above.
std::uint64_t lambda_p_squared(std::uint64_t p);

EulerProductEstimate constant_c(std::uint64_t P);

// sum_{d <= D} mu(d) lambda(d^2) / d^4, with lambda(d^2) counted from the
// congruence directly.
double dirichlet_partial_sum(std::uint64_t D);

// Upper bound for |sum_{d > D} mu(d) lambda(d^2) / d^4|.
double dirichlet_tail_bound(std::uint64_t D);

// Least-squares slope of log|E| against log H over rows with E != 0.
std::optional<double> fit_exponent(std::span<const ScanRow> rows);

// H_values must be strictly increasing.
ScanReport error_scan(std::span<const std::uint64_t> H_values, std::uint64_t P,
                      const CountOptions& options = {});

// 1/2 - {t}
double rho(double t);

// sum_{1 <= |n| <= D} e(n t) / (2 pi i n)
double rho_fourier(double D, double t);

struct HarmonicSums {
    double U = 0.0;  // sum_{n <= D} |lambda(q; n, 0)| / n
    double V = 0.0;  // sum_{n, m <= D} |lambda(q; n, m)| / (n m)
};

HarmonicSums harmonic_lambda_sums(std::uint64_t q, std::uint64_t D);

// One pass over the residue table of q serving several D at once.
std::vector<HarmonicSums> harmonic_lambda_sums(std::uint64_t q, std::span<const std::uint64_t> Ds);

}  // namespace sqf
