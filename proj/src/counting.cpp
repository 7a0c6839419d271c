#include "sqf/counting.hpp"

#include "sqf/lambda_sums.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <stdexcept>
#include <string>
#include <thread>

namespace sqf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

// Runs body(worker_index) on `threads` workers and joins them.
template <typename Body>
void run_workers(unsigned threads, Body&& body)
{
    threads = std::max(1u, threads);
    if (threads == 1) {
        body(0u);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&body, t] { body(t); });
    for (auto& th : pool)
        th.join();
}

std::uint64_t checked_value_limit(std::uint64_t H)
{
    if (H == 0)
        throw std::invalid_argument("H must be positive");
    if (H > (std::uint64_t{1} << 30))
        throw BudgetExceeded("H = " + std::to_string(H) + " is out of range");
    return 2 * H * H + 1;
}

std::int64_t mobius_sum(std::uint64_t H, std::uint64_t d_max, unsigned threads,
                        std::uint64_t budget_bytes)
{
    if (d_max > 0 && d_max > default_circle_ceiling / d_max)
        throw BudgetExceeded("d^2 exceeds the congruence solver ceiling for H = " + std::to_string(H));
    const auto mu = mobius_sieve(std::max<std::uint64_t>(d_max, 1), budget_bytes);

    threads = std::max(1u, threads);
    std::vector<std::int64_t> partial(threads, 0);
    std::atomic<std::uint64_t> next{1};
    run_workers(threads, [&](unsigned worker) {
        std::int64_t local = 0;
        for (std::uint64_t d = next++; d <= d_max; d = next++) {
            if (mu[d] == 0)
                continue;
            local += mu[d] * static_cast<std::int64_t>(congruent_pair_count(H, d * d));
        }
        partial[worker] = local;
    });
    std::int64_t total = 0;
    for (std::int64_t p : partial)
        total += p;
    return total;
}

}  // namespace

std::string_view to_string(CountMethod method)
{
    return method == CountMethod::value_sieve ? "value-sieve" : "mobius-identity";
}

std::uint64_t SquarefreeSieve::count() const
{
    std::uint64_t total = 0;
    for (std::uint64_t w : words_)
        total += static_cast<std::uint64_t>(std::popcount(w));
    return total;
}

SquarefreeSieve build_sieve(std::uint64_t N, std::uint64_t budget_bytes)
{
    if (N == 0)
        throw std::invalid_argument("build_sieve: N must be positive");
    const std::uint64_t words = N / 64 + 1;
    if (words > budget_bytes / 8)
        throw BudgetExceeded("build_sieve: N = " + std::to_string(N) + " needs " +
                             std::to_string(words * 8) + " bytes, budget is " +
                             std::to_string(budget_bytes));

    SquarefreeSieve sieve;
    sieve.limit_ = N;
    sieve.words_.assign(words, ~std::uint64_t{0});
    sieve.words_[0] &= ~std::uint64_t{1};  // 0 is not in range
    const unsigned tail = static_cast<unsigned>((N + 1) % 64);
    if (tail != 0)
        sieve.words_.back() &= (std::uint64_t{1} << tail) - 1;

    for (std::uint64_t p : primes_up_to(isqrt(N))) {
        const std::uint64_t square = p * p;
        for (std::uint64_t k = square; k <= N; k += square)
            sieve.words_[k >> 6] &= ~(std::uint64_t{1} << (k & 63));
    }
    return sieve;
}

PairCountReport count_pairs_direct(std::uint64_t H, const CountOptions& options)
{
    const auto start = Clock::now();
    const std::uint64_t N = checked_value_limit(H);
    const SquarefreeSieve sieve = build_sieve(N, options.memory_budget_bytes);

    const unsigned threads = std::max(1u, options.threads);
    constexpr std::uint64_t chunk = 64;
    std::vector<std::uint64_t> partial(threads, 0);
    std::atomic<std::uint64_t> next{1};
    run_workers(threads, [&](unsigned worker) {
        std::uint64_t local = 0;
        for (std::uint64_t lo = next.fetch_add(chunk); lo <= H; lo = next.fetch_add(chunk)) {
            const std::uint64_t hi = std::min(H, lo + chunk - 1);
            for (std::uint64_t x = lo; x <= hi; ++x) {
                const std::uint64_t base = x * x + 1;
                for (std::uint64_t y = 1; y <= H; ++y)
                    local += sieve.is_squarefree(base + y * y);
            }
        }
        partial[worker] = local;
    });

    std::uint64_t S = 0;
    for (std::uint64_t p : partial)
        S += p;
    return {H, S, CountMethod::value_sieve, seconds_since(start)};
}

std::uint64_t residue_count(std::uint64_t H, std::uint64_t q, std::int64_t x)
{
    if (q == 0)
        throw std::invalid_argument("residue_count: q must be positive");
    const auto Hs = static_cast<std::int64_t>(H);
    const auto qs = static_cast<std::int64_t>(q);
    return static_cast<std::uint64_t>(floor_div(Hs - x, qs) - floor_div(-x, qs));
}

std::uint64_t congruent_pair_count(std::uint64_t H, std::uint64_t q)
{
    if (q % 8 == 0)
        throw std::invalid_argument("congruent_pair_count: q divisible by 8 is unsupported");
    const CircleSolver solver(q);
    // residues x > H have M(H, q, x) = 0
    const std::uint64_t x_limit = std::min(q, H);
    std::uint64_t total = 0;
    std::vector<std::uint64_t> ys;
    for (std::uint64_t x = 1; x <= x_limit; ++x) {
        const std::uint64_t mx = residue_count(H, q, static_cast<std::int64_t>(x));
        solver.roots_for(x, ys);
        std::uint64_t my = 0;
        for (std::uint64_t y : ys)
            my += residue_count(H, q, static_cast<std::int64_t>(y));
        total += mx * my;
    }
    return total;
}

PairCountReport count_pairs_mobius(std::uint64_t H, const CountOptions& options)
{
    const auto start = Clock::now();
    const std::uint64_t d_max = isqrt(checked_value_limit(H));
    const std::int64_t S = mobius_sum(H, d_max, options.threads, options.memory_budget_bytes);
    if (S < 0)
        throw std::logic_error("count_pairs_mobius: negative total");
    return {H, static_cast<std::uint64_t>(S), CountMethod::mobius_identity, seconds_since(start)};
}

std::int64_t count_pairs_mobius_truncated(std::uint64_t H, std::uint64_t z)
{
    const std::uint64_t d_max = std::min(z, isqrt(checked_value_limit(H)));
    if (d_max == 0)
        return 0;
    return mobius_sum(H, d_max, 1, default_memory_budget);
}

}  // namespace sqf
