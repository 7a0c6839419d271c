#include "sqf/asymptotic.hpp"

#include "sqf/lambda_sums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sqf {

namespace {

constexpr std::uint64_t enumeration_prime_limit = 47;

// Kahan-compensated running sum.
class CompensatedSum {
public:
    void add(double v)
    {
        const double y = v - carry_;
        const double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

// (p^2 + p) / p^4, the largest possible lambda(p^2) / p^4
double factor_bound(double p)
{
    return 1.0 / (p * p) + 1.0 / (p * p * p);
}

}  // namespace

std::uint64_t lambda_p_squared(std::uint64_t p)
{
    if (!is_prime(p))
        throw std::invalid_argument("lambda_p_squared: " + std::to_string(p) + " is not prime");
    if (p <= enumeration_prime_limit)
        return count_circle_solutions(p * p);
    return p % 4 == 1 ? p * (p - 1) : p * (p + 1);
}

EulerProductEstimate constant_c(std::uint64_t P)
{
    if (P < 2)
        throw std::invalid_argument("constant_c: cutoff must be at least 2");
    if (P > (std::uint64_t{1} << 32))
        throw BudgetExceeded("constant_c: cutoff too large");

    const auto primes = primes_up_to(10 * P);
    CompensatedSum log_product;
    CompensatedSum tail;
    for (std::uint64_t p : primes) {
        const double pd = static_cast<double>(p);
        if (p <= P) {
            const double p4 = pd * pd * pd * pd;
            log_product.add(std::log1p(-static_cast<double>(lambda_p_squared(p)) / p4));
        } else {
            tail.add(factor_bound(pd));
        }
    }
    // integers beyond 10P stand in for primes: sum_{n > X} (n^-2 + n^-3) <= 1/X + 1/(2X^2)
    const double X = 10.0 * static_cast<double>(P);
    tail.add(1.0 / X + 1.0 / (2.0 * X * X));
    // -log(1 - a) <= a / (1 - a) and every a here is at most factor_bound(P + 1)
    const double tail_bound = tail.value() / (1.0 - factor_bound(static_cast<double>(P + 1)));

    return {P, std::exp(log_product.value()), tail_bound};
}

double dirichlet_partial_sum(std::uint64_t D)
{
    if (D == 0)
        return 0.0;
    const auto mu = mobius_sieve(D);
    CompensatedSum sum;
    for (std::uint64_t d = 1; d <= D; ++d) {
        if (mu[d] == 0)
            continue;
        const double dd = static_cast<double>(d);
        const double count = static_cast<double>(count_circle_solutions(d * d));
        sum.add(mu[d] * count / (dd * dd * dd * dd));
    }
    return sum.value();
}

double dirichlet_tail_bound(std::uint64_t D)
{
    if (D == 0)
        throw std::invalid_argument("dirichlet_tail_bound: D must be positive");
    // lambda(d^2) / d^4 <= sigma(d) / d^3 = d^-2 sum_{k | d} 1/k; regroup by k.
    CompensatedSum bound;
    for (std::uint64_t k = 1; k <= D; ++k) {
        const double kd = static_cast<double>(k);
        bound.add(1.0 / (kd * kd * kd) / static_cast<double>(D / k));
    }
    const double Dd = static_cast<double>(D);
    bound.add(std::numbers::pi * std::numbers::pi / 6.0 / (2.0 * Dd * Dd));
    return bound.value();
}

std::optional<double> fit_exponent(std::span<const ScanRow> rows)
{
    std::vector<std::pair<double, double>> points;
    for (const auto& row : rows)
        if (row.E != 0.0)
            points.emplace_back(std::log(static_cast<double>(row.H)), std::log(std::abs(row.E)));
    if (points.size() < 4)
        return std::nullopt;

    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : points) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxy = 0.0, sxx = 0.0;
    for (const auto& [x, y] : points) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    if (sxx == 0.0)
        return std::nullopt;
    return sxy / sxx;
}

ScanReport error_scan(std::span<const std::uint64_t> H_values, std::uint64_t P,
                      const CountOptions& options)
{
    if (H_values.empty())
        throw std::invalid_argument("error_scan: no H values");
    for (std::size_t i = 1; i < H_values.size(); ++i)
        if (H_values[i] <= H_values[i - 1])
            throw std::invalid_argument("error_scan: H values must be strictly increasing");

    ScanReport report;
    report.c = constant_c(P);
    for (std::uint64_t H : H_values) {
        const auto count = count_pairs_direct(H, options);
        const double Hd = static_cast<double>(H);
        const double E = static_cast<double>(count.S) - report.c.value * Hd * Hd;
        report.rows.push_back({H, count.S, E, count.elapsed_seconds, E != 0.0});
    }
    report.alpha = fit_exponent(report.rows);
    return report;
}

double rho(double t)
{
    return 0.5 - (t - std::floor(t));
}

double rho_fourier(double D, double t)
{
    if (!(D >= 2.0))
        throw std::invalid_argument("rho_fourier: D must be at least 2");
    const auto N = static_cast<std::int64_t>(std::floor(D));
    const double frac = t - std::floor(t);
    const ComplexValue two_pi_i{0.0, 2.0 * std::numbers::pi};
    PairwiseSum sum;
    for (std::int64_t n = 1; n <= N; ++n) {
        const double nd = static_cast<double>(n);
        const double phase = nd * frac;
        sum.add(e(phase) / (two_pi_i * nd));
        sum.add(e(-phase) / (-two_pi_i * nd));
    }
    const ComplexValue total = sum.total();
    if (std::abs(total.imag()) > 1e-9 * static_cast<double>(N))
        throw std::logic_error("rho_fourier: imaginary part did not cancel");
    return total.real();
}

HarmonicSums harmonic_lambda_sums(std::uint64_t q, std::uint64_t D)
{
    const std::uint64_t Ds[] = {D};
    return harmonic_lambda_sums(q, Ds).front();
}

std::vector<HarmonicSums> harmonic_lambda_sums(std::uint64_t q, std::span<const std::uint64_t> Ds)
{
    if (Ds.empty())
        return {};
    for (std::uint64_t D : Ds)
        if (D < 2)
            throw std::invalid_argument("harmonic_lambda_sums: D must be at least 2");
    LambdaEvaluator lambda(q);  // rejects 8 | q

    // |lambda(q; a, b)| depends only on the residues of n, m mod q
    const std::uint64_t D_max = *std::max_element(Ds.begin(), Ds.end());
    const std::uint64_t width = std::min(q, D_max + 1);
    std::vector<double> table(width * width);
    for (std::uint64_t a = 0; a < width; ++a) {
        for (std::uint64_t b = a; b < width; ++b) {
            // symmetric in (n, m) since the solution set is
            const double v = std::abs(lambda(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)));
            table[a * width + b] = v;
            table[b * width + a] = v;
        }
    }

    std::vector<HarmonicSums> out;
    for (std::uint64_t D : Ds) {
        std::vector<double> weight(width, 0.0);  // sum_{n <= D, n = a mod q} 1/n
        for (std::uint64_t n = 1; n <= D; ++n)
            weight[n % q] += 1.0 / static_cast<double>(n);

        CompensatedSum U, V;
        for (std::uint64_t a = 0; a < width; ++a) {
            if (weight[a] == 0.0)
                continue;
            U.add(table[a * width] * weight[a]);
            for (std::uint64_t b = 0; b < width; ++b)
                if (weight[b] != 0.0)
                    V.add(table[a * width + b] * weight[a] * weight[b]);
        }
        out.push_back({U.value(), V.value()});
    }
    return out;
}

}  // namespace sqf
