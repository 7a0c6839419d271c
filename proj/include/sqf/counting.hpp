#pragma once

// Exact S(H) = #{1 <= x, y <= H : x^2 + y^2 + 1 squarefree}, by two
// independent routes:
//
//   value sieve     - mark squarefree integers up to 2H^2 + 1 and test each pair
//   mobius identity - S(H) = sum_d mu(d) T(H, d^2), where T(H, q) counts
//                     pairs with q | x^2 + y^2 + 1, summed from the
//                     solutions of the congruence mod q

#include "sqf/nt_core.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace sqf {

enum class CountMethod { value_sieve, mobius_identity };

std::string_view to_string(CountMethod method);

struct PairCountReport {
    std::uint64_t H = 0;
    std::uint64_t S = 0;
    CountMethod method = CountMethod::value_sieve;
    double elapsed_seconds = 0.0;
};

struct CountOptions {
    unsigned threads = 1;
    std::uint64_t memory_budget_bytes = default_memory_budget;
};

// Bit n set iff n is squarefree, for n in [1, N].
class SquarefreeSieve {
public:
    SquarefreeSieve() = default;

    std::uint64_t limit() const { return limit_; }

    bool is_squarefree(std::uint64_t n) const
    {
        return (words_[n >> 6] >> (n & 63)) & 1u;
    }

    // number of squarefree n in [1, limit]
    std::uint64_t count() const;

private:
    friend SquarefreeSieve build_sieve(std::uint64_t, std::uint64_t);

    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> words_;
};

// Strikes multiples of p^2 for every prime p <= sqrt(N). Throws
// BudgetExceeded when N + 1 bits do not fit in budget_bytes.
SquarefreeSieve build_sieve(std::uint64_t N, std::uint64_t budget_bytes = default_memory_budget);

PairCountReport count_pairs_direct(std::uint64_t H, const CountOptions& options = {});

// M(H, q, x) = #{1 <= h <= H : h = x (mod q)} = [(H - x)/q] - [-x/q]
std::uint64_t residue_count(std::uint64_t H, std::uint64_t q, std::int64_t x);

// T(H, q) = sum over solutions (x, y) mod q of M(H, q, x) M(H, q, y).
// Requires 8 not dividing q.
std::uint64_t congruent_pair_count(std::uint64_t H, std::uint64_t q);

// Full identity over every squarefree d <= sqrt(2H^2 + 1); always equals
// count_pairs_direct(H).S.
PairCountReport count_pairs_mobius(std::uint64_t H, const CountOptions& options = {});

// Same sum cut off at d <= z. Signed, since partial sums may overshoot.
std::int64_t count_pairs_mobius_truncated(std::uint64_t H, std::uint64_t z);

}  // namespace sqf
