#pragma once

// Solutions of x^2 + y^2 + 1 = 0 (mod q) and the exponential sum
//
//   lambda(q; n, m) = sum over solutions (x, y) in [1, q]^2 of e_q(n x + m y)
//
// evaluated three ways: by direct enumeration, by the odd-modulus
// Kloosterman decomposition, and by the CRT multiplicativity relation.

#include "sqf/exp_sums.hpp"
#include "sqf/nt_core.hpp"

#include <compare>
#include <cstdint>
#include <vector>

namespace sqf {

inline constexpr std::uint64_t default_circle_ceiling = 100'000'000;

struct CirclePoint {
    std::uint64_t x;
    std::uint64_t y;

    friend auto operator<=>(const CirclePoint&, const CirclePoint&) = default;
};

// Every (x, y) in [1, q]^2 with x^2 + y^2 + 1 = 0 (mod q), sorted
// lexicographically. size() is lambda(q).
struct SolutionSet {
    std::uint64_t modulus = 1;
    std::vector<CirclePoint> points;

    std::size_t size() const { return points.size(); }
};

// Per-x root finder for y^2 = -x^2 - 1 (mod q). Odd prime powers go through
// sqrt_mod and are glued together by CRT; the 2-part is lifted bit by bit.
// Moduli up to 100 are scanned exhaustively.
class CircleSolver {
public:
    explicit CircleSolver(std::uint64_t q, std::uint64_t ceiling = default_circle_ceiling);

    std::uint64_t modulus() const { return q_; }

    // y in [1, q] with x^2 + y^2 + 1 = 0 (mod q), increasing; ys is overwritten.
    void roots_for(std::uint64_t x, std::vector<std::uint64_t>& ys) const;

    // Number of such y, without building them.
    std::uint64_t root_count(std::uint64_t x) const;

private:
    struct Component {
        std::uint64_t prime;
        unsigned exponent;
        std::uint64_t power;
        std::uint64_t crt_coefficient;  // = 1 mod power, = 0 mod q / power
    };

    std::vector<std::uint64_t> component_roots(const Component& c, std::uint64_t x) const;

    std::uint64_t q_;
    std::vector<Component> components_;
};

SolutionSet solve_circle(std::uint64_t q, std::uint64_t ceiling = default_circle_ceiling);

// lambda(q) without materialising the solution set.
std::uint64_t count_circle_solutions(std::uint64_t q, std::uint64_t ceiling = default_circle_ceiling);

ComplexValue lambda_direct(std::uint64_t q, std::int64_t n, std::int64_t m);
ComplexValue lambda_direct(const SolutionSet& solutions, std::int64_t n, std::int64_t m);
ComplexValue lambda_direct(const SolutionSet& solutions, const UnitCircle& circle, std::int64_t n,
                           std::int64_t m);

// Odd q only:
//   q * sum over l | q with (q/l) | (n, m) of
//       (-1)^((l-1)/2) / l * K(l; 1, -inv(4) (n'^2 + m'^2)),  n' = n l / q, m' = m l / q
ComplexValue lambda_fast_odd(std::uint64_t q, std::int64_t n, std::int64_t m);

// lambda(q1; n inv(q2), m inv(q2)) * lambda(q2; n inv(q1), m inv(q1)) for
// coprime q1, q2, each factor by direct enumeration.
ComplexValue lambda_multiplicative(std::uint64_t q1, std::uint64_t q2, std::int64_t n,
                                   std::int64_t m);

// Reusable evaluator for one modulus q with 8 not dividing q: the 2-part
// (at most 4) is enumerated, the odd part goes through the Kloosterman
// decomposition. Kloosterman values are memoised per divisor, so repeated
// calls are cheap. Not thread-safe.
class LambdaEvaluator {
public:
    explicit LambdaEvaluator(std::uint64_t q);

    std::uint64_t modulus() const { return q_; }
    ComplexValue operator()(std::int64_t n, std::int64_t m);

private:
    double kloosterman_unit(std::size_t divisor_index, std::uint64_t c);
    ComplexValue odd_part(std::uint64_t n, std::uint64_t m);

    std::uint64_t q_;
    std::uint64_t two_power_;
    std::uint64_t odd_;
    std::uint64_t odd_inverse_mod_two_;  // inv(odd) mod two_power
    std::uint64_t two_inverse_mod_odd_;  // inv(two_power) mod odd
    SolutionSet two_solutions_;
    std::vector<std::uint64_t> divisors_;
    std::vector<std::uint64_t> quarter_;  // inv(4) mod each divisor
    std::vector<std::vector<double>> kloosterman_cache_;
};

// Rejects 8 | q with std::invalid_argument.
ComplexValue lambda_any(std::uint64_t q, std::int64_t n, std::int64_t m);

// Oracle-comparison tolerance used across the lambda evaluators.
inline double lambda_tolerance(std::uint64_t q)
{
    return 1e-5 * static_cast<double>(q);
}

}  // namespace sqf
