#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sqf/nt_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

using namespace sqf;

namespace {

// --- oracles ---------------------------------------------------------------

bool slow_is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

int slow_mobius(std::int64_t n)
{
    int sign = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0)
            continue;
        n /= p;
        if (n % p == 0)
            return 0;
        sign = -sign;
    }
    return n > 1 ? -sign : sign;
}

std::uint64_t slow_pow(std::uint64_t b, std::uint64_t e, std::uint64_t q)
{
    std::uint64_t r = 1 % q;
    for (std::uint64_t i = 0; i < e; ++i)
        r = r * b % q;
    return r;
}

// Product of Legendre symbols by Euler's criterion over the prime factors.
int euler_jacobi(std::int64_t a, std::uint64_t q)
{
    int result = 1;
    std::uint64_t rest = q;
    for (std::uint64_t p = 3; p <= rest; p += 2) {
        while (rest % p == 0) {
            rest /= p;
            const std::uint64_t ar = reduce_mod(a, p);
            if (ar == 0)
                return 0;
            const std::uint64_t c = slow_pow(ar, (p - 1) / 2, p);
            result *= (c == 1) ? 1 : -1;
        }
    }
    return result;
}

std::vector<std::uint64_t> scan_roots(std::uint64_t a, std::uint64_t pe)
{
    std::vector<std::uint64_t> roots;
    for (std::uint64_t y = 0; y < pe; ++y)
        if (y * y % pe == a % pe)
            roots.push_back(y);
    return roots;
}

std::vector<std::uint64_t> values(const std::vector<ResidueClass>& rs)
{
    std::vector<std::uint64_t> v;
    for (const auto& r : rs)
        v.push_back(r.value);
    return v;
}

}  // namespace

TEST_CASE("factorize examples")
{
    CHECK(factorize(1).factors().empty());
    CHECK(factorize(12).factors() == std::vector<PrimePower>{{2, 2}, {3, 1}});
    CHECK(factorize(9999999967).factors() == std::vector<PrimePower>{{9999999967ULL, 1}});
    CHECK(slow_is_prime(9999999967ULL));
    CHECK_THROWS_AS(factorize(0), std::invalid_argument);
    CHECK_THROWS_AS(factorize(-5), std::invalid_argument);
}

TEST_CASE("factorize reconstructs n with increasing primes")
{
    std::mt19937_64 rng(7);
    std::vector<std::int64_t> samples{2, 4, 1'000'003LL * 1'000'033LL, 999'999'999'989LL,
                                      (1LL << 62) - 57, 600851475143LL, 9'223'372'036'854'775'807LL};
    for (int i = 0; i < 300; ++i)
        samples.push_back(static_cast<std::int64_t>(rng() >> 1) | 1);
    for (std::int64_t n : samples) {
        const auto f = factorize(n);
        unsigned __int128 product = 1;
        std::uint64_t last = 1;
        for (const auto& [p, e] : f.factors()) {
            CHECK(p > last);
            CHECK(is_prime(p));
            last = p;
            for (unsigned i = 0; i < e; ++i)
                product *= p;
        }
        CHECK(product == static_cast<unsigned __int128>(n));
    }
}

TEST_CASE("is_prime matches trial division")
{
    for (std::uint64_t n = 0; n < 20000; ++n)
        REQUIRE(is_prime(n) == slow_is_prime(n));
    // strong pseudoprimes to several small bases
    CHECK_FALSE(is_prime(3215031751ULL));
    CHECK_FALSE(is_prime(3825123056546413051ULL));
    CHECK(is_prime(18446744073709551557ULL));
}

TEST_CASE("divisors are sorted and complete")
{
    const auto d = factorize(360).divisors();
    std::vector<std::uint64_t> expected;
    for (std::uint64_t k = 1; k <= 360; ++k)
        if (360 % k == 0)
            expected.push_back(k);
    CHECK(d == expected);
}

TEST_CASE("mobius examples and oracle")
{
    CHECK(mobius(1) == 1);
    CHECK(mobius(12) == 0);
    CHECK(mobius(30) == -1);
    CHECK_THROWS(mobius(0));
    for (std::int64_t n = 1; n <= 5000; ++n)
        REQUIRE(mobius(n) == slow_mobius(n));
}

TEST_CASE("mobius_sieve")
{
    auto mu = mobius_sieve(1);
    CHECK(mu.size() == 2);
    CHECK(mu[1] == 1);
    mu = mobius_sieve(4);
    CHECK(std::vector<int>(mu.begin() + 1, mu.end()) == std::vector<int>{1, -1, -1, 0});

    const std::uint64_t N = 1'000'000;
    mu = mobius_sieve(N);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> pick(1, N);
    for (int i = 0; i < 1000; ++i) {
        const std::int64_t n = pick(rng);
        REQUIRE(mu[n] == slow_mobius(n));
    }
    CHECK_THROWS_AS(mobius_sieve(1'000'000, 1000), BudgetExceeded);
}

TEST_CASE("squarefree identity: sum over d^2 | n of mu(d) equals mu(n)^2")
{
    for (std::int64_t n = 1; n <= 10000; ++n) {
        int sum = 0;
        for (std::int64_t d = 1; d * d <= n; ++d)
            if (n % (d * d) == 0)
                sum += mobius(d);
        const int mu = mobius(n);
        REQUIRE(sum == mu * mu);
    }
}

TEST_CASE("tau")
{
    CHECK(tau(1) == 1);
    CHECK(tau(12) == 6);
    CHECK(tau(1024) == 11);
    CHECK_THROWS(tau(0));
    for (std::int64_t n = 1; n <= 2000; ++n) {
        std::uint64_t count = 0;
        for (std::int64_t d = 1; d <= n; ++d)
            count += (n % d == 0);
        REQUIRE(tau(n) == count);
    }
    for (std::int64_t n = 10001; n <= 100000; ++n) {
        const auto t = tau(n);
        REQUIRE(t <= static_cast<std::uint64_t>(n));
        REQUIRE(static_cast<double>(t) <= std::pow(static_cast<double>(n), 0.6));
    }
}

TEST_CASE("gcd_many")
{
    const std::int64_t a[] = {12, 18};
    const std::int64_t b[] = {5, 0, 0};
    const std::int64_t c[] = {0, 0};
    const std::int64_t d[] = {-12, 8};
    CHECK(gcd_many(a) == 6);
    CHECK(gcd_many(b) == 5);
    CHECK(gcd_many(c) == 0);
    CHECK(gcd_many(d) == 4);
    CHECK_THROWS(gcd_many(std::span<const std::int64_t>{}));
}

TEST_CASE("mod_inverse")
{
    CHECK(mod_inverse(3, 7).value == 5);
    CHECK(mod_inverse(4, 25) == ResidueClass{19, 25});
    for (std::uint64_t q = 2; q < 50; ++q)
        CHECK(mod_inverse(1, q).value == 1);
    CHECK(mod_inverse(-3, 7).value == 2);
    CHECK_THROWS_AS(mod_inverse(6, 9), NotInvertible);
    CHECK_THROWS_AS(mod_inverse(0, 5), NotInvertible);

    std::mt19937_64 rng(3);
    int tested = 0;
    while (tested < 500) {
        const std::uint64_t q = rng() % 1'000'000'000 + 2;
        const auto k = static_cast<std::int64_t>(rng() % 4'000'000'000ULL) - 2'000'000'000;
        if (std::gcd(static_cast<std::uint64_t>(std::abs(k)), q) != 1)
            continue;
        ++tested;
        const auto r = mod_inverse(k, q);
        REQUIRE(r.value < q);
        REQUIRE(mul_mod(reduce_mod(k, q), r.value, q) == 1);
        REQUIRE(mod_inverse(static_cast<std::int64_t>(r.value), q).value == reduce_mod(k, q));
    }
}

TEST_CASE("jacobi")
{
    CHECK(jacobi(1, 9) == 1);
    CHECK(jacobi(3, 9) == 0);
    CHECK(jacobi(2, 15) == 1);
    CHECK(euler_jacobi(2, 15) == 1);
    CHECK_THROWS(jacobi(3, 10));

    for (std::uint64_t q = 1; q < 400; q += 2)
        for (std::int64_t a = -30; a < 400; ++a)
            REQUIRE(jacobi(a, q) == euler_jacobi(a, q));

    std::mt19937_64 rng(5);
    for (int i = 0; i < 500; ++i) {
        const std::uint64_t q = (rng() % 1'000'000) * 2 + 1;
        const auto a = static_cast<std::int64_t>(rng() % 1'000'000);
        const auto b = static_cast<std::int64_t>(rng() % 1'000'000);
        REQUIRE(jacobi(a, q) * jacobi(b, q) == jacobi(a * b, q));
    }
}

TEST_CASE("sqrt_mod examples")
{
    CHECK(values(sqrt_mod(0, 5, 1)) == std::vector<std::uint64_t>{0});
    CHECK(values(sqrt_mod(4, 5, 1)) == std::vector<std::uint64_t>{2, 3});
    CHECK(values(sqrt_mod(2, 7, 2)) == std::vector<std::uint64_t>{10, 39});
    CHECK(scan_roots(2, 49) == std::vector<std::uint64_t>{10, 39});
    CHECK(sqrt_mod(3, 5, 1).empty());
    CHECK_THROWS_AS(sqrt_mod(1, 2, 3), std::invalid_argument);
    CHECK_THROWS_AS(sqrt_mod(1, 9, 1), std::invalid_argument);
}

TEST_CASE("sqrt_mod matches exhaustive search for p^e <= 2000")
{
    for (std::uint64_t p : primes_up_to(2000)) {
        if (p == 2)
            continue;
        std::uint64_t pe = p;
        for (unsigned e = 1; pe <= 2000; ++e, pe *= p) {
            for (std::uint64_t a = 0; a < pe; ++a) {
                const auto got = sqrt_mod(static_cast<std::int64_t>(a), p, e);
                const auto expected = scan_roots(a, pe);
                REQUIRE(values(got) == expected);
                REQUIRE(sqrt_mod_count(a, p, e) == expected.size());
                for (const auto& r : got)
                    REQUIRE(r.modulus == pe);
            }
        }
    }
}
