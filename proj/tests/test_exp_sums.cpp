#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sqf/exp_sums.hpp"
#include "sqf/nt_core.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

using namespace sqf;

namespace {

// Naive oracles: straight loops with std::polar, no tables or reductions.
ComplexValue naive_gauss(std::int64_t q, std::int64_t n, std::int64_t m)
{
    ComplexValue s = 0.0;
    for (std::int64_t x = 1; x <= q; ++x) {
        const std::int64_t k = ((n % q) * ((x * x) % q) + (m % q) * x) % q;
        s += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(q));
    }
    return s;
}

ComplexValue naive_kloosterman(std::int64_t q, std::int64_t n, std::int64_t m)
{
    ComplexValue s = 0.0;
    for (std::int64_t x = 1; x <= q; ++x) {
        if (std::gcd(x, q) != 1)
            continue;
        std::int64_t inv = 1;
        while ((inv * x) % q != 1 % q)
            ++inv;
        const std::int64_t k = (n * x + m * inv) % q;
        s += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(q));
    }
    return s;
}

}  // namespace

TEST_CASE("approx_equal scales with magnitude")
{
    CHECK(approx_equal({1.0, 0.0}, {1.0 + 5e-7, 0.0}));
    CHECK_FALSE(approx_equal({1.0, 0.0}, {1.0 + 5e-6, 0.0}));
    CHECK(approx_equal({1e6, 0.0}, {1e6 + 0.5, 0.0}));
}

TEST_CASE("e and e_q")
{
    CHECK(approx_equal(e(0.25), {0.0, 1.0}, 1e-12));
    CHECK(approx_equal(e_q(1, 4), {0.0, 1.0}, 1e-12));
    CHECK(approx_equal(e_q(-1, 4), {0.0, -1.0}, 1e-12));
    CHECK(approx_equal(e_q(7, 7), {1.0, 0.0}, 1e-12));
    const UnitCircle circle(12);
    for (std::int64_t k = -30; k < 30; ++k)
        CHECK(approx_equal(circle(k), e_q(k, 12), 1e-12));
}

TEST_CASE("pairwise summation")
{
    PairwiseSum s;
    for (int i = 0; i < 1'000'000; ++i)
        s.add({0.1, -0.1});
    CHECK(std::abs(s.total().real() - 100000.0) < 1e-8);
    CHECK(std::abs(s.total().imag() + 100000.0) < 1e-8);
    CHECK(PairwiseSum{}.total() == ComplexValue{0.0, 0.0});
}

TEST_CASE("gauss_direct examples")
{
    for (std::int64_t n = -3; n < 5; ++n)
        CHECK(approx_equal(gauss_direct(1, n, 7), 1.0));
    for (std::uint64_t q = 1; q < 20; ++q)
        CHECK(approx_equal(gauss_direct(q, 0, 0), static_cast<double>(q)));
    CHECK(approx_equal(gauss_direct(3, 1, 0), {0.0, std::sqrt(3.0)}));
    CHECK(approx_equal(1.0 + 2.0 * e(1.0 / 3.0), {0.0, std::sqrt(3.0)}));
    CHECK_THROWS(gauss_direct(0, 1, 1));
}

TEST_CASE("gauss_direct matches naive oracle")
{
    for (std::int64_t q = 1; q <= 60; ++q)
        for (std::int64_t n = -q; n <= q; n += 3)
            for (std::int64_t m = -q; m <= q; m += 5)
                REQUIRE(approx_equal(gauss_direct(q, n, m), naive_gauss(q, reduce_mod(n, q), reduce_mod(m, q))));
}

TEST_CASE("gauss_reduce")
{
    CHECK(gauss_reduce(6, 2, 3) == ComplexValue{0.0, 0.0});
    CHECK(gauss_reduce(7, 0, 3) == ComplexValue{0.0, 0.0});
    CHECK(approx_equal(gauss_reduce(6, 2, 4), 2.0 * naive_gauss(3, 1, 2)));
    CHECK(approx_equal(naive_gauss(6, 2, 4), 2.0 * naive_gauss(3, 1, 2)));
    for (std::int64_t q = 1; q <= 60; ++q)
        for (std::int64_t n = 0; n < q; ++n)
            for (std::int64_t m = 0; m < q; ++m)
                REQUIRE(approx_equal(gauss_reduce(q, n, m), naive_gauss(q, n, m)));
}

TEST_CASE("gauss_closed_odd")
{
    CHECK(approx_equal(gauss_closed_odd(3, 1, 0), {0.0, std::sqrt(3.0)}));
    CHECK(approx_equal(gauss_closed_odd(5, 1, 0), std::sqrt(5.0)));
    CHECK(approx_equal(gauss_closed_odd(15, 2, 1), naive_gauss(15, 2, 1)));
    CHECK_THROWS_AS(gauss_closed_odd(15, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(gauss_closed_odd(8, 1, 1), std::invalid_argument);
    for (std::int64_t q = 1; q <= 101; q += 2)
        for (std::int64_t n = 0; n < q; ++n) {
            if (std::gcd(q, 2 * n) != 1)
                continue;
            for (std::int64_t m = 0; m < q; ++m)
                REQUIRE(approx_equal(gauss_closed_odd(q, n, m), naive_gauss(q, n, m)));
        }
}

TEST_CASE("gauss_unit branch and square identity")
{
    CHECK(approx_equal(gauss_unit(5), naive_gauss(5, 1, 0)));
    CHECK(approx_equal(gauss_unit(3), naive_gauss(3, 1, 0)));
    for (std::int64_t q = 1; q <= 2001; q += 2) {
        const ComplexValue g = gauss_direct(q, 1, 0);
        const double sign = ((q - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
        REQUIRE(approx_equal(g * g, sign * static_cast<double>(q)));
        REQUIRE(approx_equal(g, gauss_unit(q)));
    }
}

TEST_CASE("kloosterman examples")
{
    for (std::int64_t n = -2; n < 3; ++n)
        CHECK(approx_equal(kloosterman_direct(1, n, 5), 1.0));
    for (std::uint64_t p : {2, 3, 5, 7, 101})
        CHECK(approx_equal(kloosterman_direct(p, 0, 0), static_cast<double>(p - 1)));
    CHECK(approx_equal(kloosterman_direct(5, 1, 1), 2.0 + 2.0 * std::cos(4.0 * std::numbers::pi / 5.0)));
    CHECK(std::abs(kloosterman_direct(5, 1, 1).real() - 0.3819660) < 1e-7);
    CHECK_THROWS(kloosterman_direct(0, 1, 1));
}

TEST_CASE("kloosterman matches naive oracle")
{
    for (std::int64_t q = 1; q <= 80; ++q)
        for (std::int64_t n = -q; n <= q; n += 3)
            for (std::int64_t m = -q; m <= q; m += 4)
                REQUIRE(approx_equal(kloosterman_direct(q, n, m),
                                     naive_kloosterman(q, reduce_mod(n, q), reduce_mod(m, q))));
}

TEST_CASE("kloosterman is real on the diagonal and obeys the Weil bound")
{
    std::mt19937_64 rng(17);
    for (std::uint64_t q = 1; q <= 500; ++q) {
        const UnitCircle circle(q);
        for (int i = 0; i < 5; ++i) {
            const auto n = static_cast<std::int64_t>(rng() % (3 * q)) - static_cast<std::int64_t>(q);
            const auto m = static_cast<std::int64_t>(rng() % (3 * q)) - static_cast<std::int64_t>(q);
            REQUIRE(std::abs(kloosterman_direct(circle, n, n).imag()) < 1e-9 * static_cast<double>(q));
            const std::int64_t triple[] = {static_cast<std::int64_t>(q), n, m};
            const double bound = static_cast<double>(tau(static_cast<std::int64_t>(q))) *
                                 std::sqrt(static_cast<double>(q)) *
                                 std::sqrt(static_cast<double>(gcd_many(triple)));
            REQUIRE(std::abs(kloosterman_direct(circle, n, m)) <= bound * (1 + 1e-12) + 1e-9);
        }
    }
}

TEST_CASE("periodicity in n and m")
{
    for (std::int64_t q = 2; q <= 40; ++q)
        for (std::int64_t n = 0; n < q; n += 2) {
            CHECK(approx_equal(gauss_direct(q, n, 1), gauss_direct(q, n + q, 1 - q)));
            CHECK(approx_equal(kloosterman_direct(q, n, 1), kloosterman_direct(q, n - q, 1 + 2 * q)));
        }
}
