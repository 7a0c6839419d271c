#include "sqf/nt_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

namespace sqf {

namespace {

constexpr std::uint64_t trial_division_limit = 1'000'000;

// Brent's variant of Pollard rho; n must be odd and composite.
std::uint64_t pollard_rho(std::uint64_t n)
{
    for (std::uint64_t c = 1;; ++c) {
        auto f = [&](std::uint64_t v) { return (mul_mod(v, v, n) + c) % n; };
        std::uint64_t y = 2, x = 2, g = 1, q = 1, ys = 2;
        const std::uint64_t batch = 128;
        for (std::uint64_t r = 1; g == 1; r <<= 1) {
            x = y;
            for (std::uint64_t i = 0; i < r; ++i)
                y = f(y);
            for (std::uint64_t k = 0; k < r && g == 1; k += batch) {
                ys = y;
                for (std::uint64_t i = 0; i < std::min(batch, r - k); ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
            }
        }
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n)
            return g;
    }
}

void split_large(std::uint64_t n, std::vector<std::uint64_t>& out)
{
    if (n == 1)
        return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    const std::uint64_t d = pollard_rho(n);
    split_large(d, out);
    split_large(n / d, out);
}

// Roots of z^2 = u (mod p) for a unit u, by Tonelli-Shanks.
// Returns 0 when u is a non-residue (0 is never a root of a unit).
std::uint64_t tonelli_shanks(std::uint64_t u, std::uint64_t p)
{
    if (p % 4 == 3) {
        const std::uint64_t z = pow_mod(u, (p + 1) / 4, p);
        return mul_mod(z, z, p) == u ? z : 0;
    }
    if (pow_mod(u, (p - 1) / 2, p) != 1)
        return 0;

    std::uint64_t s = 0, odd = p - 1;
    while (odd % 2 == 0) {
        odd /= 2;
        ++s;
    }
    std::uint64_t nonresidue = 2;
    while (pow_mod(nonresidue, (p - 1) / 2, p) != p - 1)
        ++nonresidue;

    std::uint64_t m = s;
    std::uint64_t c = pow_mod(nonresidue, odd, p);
    std::uint64_t t = pow_mod(u, odd, p);
    std::uint64_t r = pow_mod(u, (odd + 1) / 2, p);
    while (t != 1) {
        std::uint64_t i = 0, t2 = t;
        while (t2 != 1) {
            t2 = mul_mod(t2, t2, p);
            ++i;
        }
        std::uint64_t b = c;
        for (std::uint64_t j = 0; j + 1 < m - i; ++j)
            b = mul_mod(b, b, p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    return r;
}

// Newton/Hensel lift of a unit root z of z^2 = u from mod p to mod p^target.
std::uint64_t hensel_lift(std::uint64_t z, std::uint64_t u, std::uint64_t p, unsigned target)
{
    unsigned precision = 1;
    while (precision < target) {
        precision = std::min(2 * precision, target);
        std::uint64_t mod = 1;
        for (unsigned i = 0; i < precision; ++i)
            mod *= p;
        const std::uint64_t zz = mul_mod(z, z, mod);
        const std::uint64_t diff = (zz + mod - u % mod) % mod;
        const std::uint64_t inv2z = mod_inverse(static_cast<std::int64_t>(2 * z % mod), mod).value;
        z = (z + mod - mul_mod(diff, inv2z, mod)) % mod;
    }
    return z;
}

std::uint64_t checked_power(std::uint64_t p, unsigned e)
{
    std::uint64_t r = 1;
    for (unsigned i = 0; i < e; ++i) {
        if (r > (std::uint64_t{1} << 62) / p)
            throw std::invalid_argument("sqrt_mod: p^e exceeds 2^62");
        r *= p;
    }
    return r;
}

}  // namespace

Factorization::Factorization(std::uint64_t n, std::vector<PrimePower> factors)
    : n_(n), factors_(std::move(factors))
{
}

bool Factorization::is_squarefree() const
{
    return std::all_of(factors_.begin(), factors_.end(),
                       [](const PrimePower& f) { return f.exponent == 1; });
}

std::vector<std::uint64_t> Factorization::divisors() const
{
    std::vector<std::uint64_t> divs{1};
    for (const auto& [p, e] : factors_) {
        const std::size_t base = divs.size();
        std::uint64_t pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i)
                divs.push_back(divs[i] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t q)
{
    std::uint64_t result = 1 % q;
    base %= q;
    while (exp) {
        if (exp & 1)
            result = mul_mod(result, base, q);
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    return result;
}

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0)
            return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++s;
    }
    // Bases known to be sufficient for all n < 2^64.
    for (std::uint64_t a : {2, 325, 9375, 28178, 450775, 9780504, 1795265022}) {
        a %= n;
        if (a == 0)
            continue;
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit)
{
    std::vector<std::uint64_t> primes;
    if (limit < 2)
        return primes;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i])
            continue;
        primes.push_back(i);
        for (std::uint64_t j = i * i; j <= limit; j += i)
            composite[j] = true;
    }
    return primes;
}

std::uint64_t isqrt(std::uint64_t n)
{
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<unsigned __int128>(r) * r > n)
        --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n)
        ++r;
    return r;
}

Factorization factorize(std::int64_t n)
{
    if (n <= 0)
        throw std::invalid_argument("factorize: n must be positive, got " + std::to_string(n));
    const auto original = static_cast<std::uint64_t>(n);
    std::uint64_t rest = original;
    std::vector<std::uint64_t> primes;

    while (rest % 2 == 0) {
        primes.push_back(2);
        rest /= 2;
    }
    std::uint64_t d = 3;
    for (; d <= trial_division_limit && d * d <= rest; d += 2) {
        while (rest % d == 0) {
            primes.push_back(d);
            rest /= d;
        }
    }
    if (rest > 1) {
        if (d * d > rest)
            primes.push_back(rest);
        else
            split_large(rest, primes);
    }
    std::sort(primes.begin(), primes.end());

    std::vector<PrimePower> factors;
    for (std::uint64_t p : primes) {
        if (!factors.empty() && factors.back().prime == p)
            ++factors.back().exponent;
        else
            factors.push_back({p, 1});
    }
    return Factorization(original, std::move(factors));
}

int mobius(std::int64_t n)
{
    if (n <= 0)
        throw std::invalid_argument("mobius: n must be positive");
    const auto f = factorize(n);
    if (!f.is_squarefree())
        return 0;
    return f.factors().size() % 2 == 0 ? 1 : -1;
}

std::vector<std::int8_t> mobius_sieve(std::uint64_t N, std::uint64_t budget_bytes)
{
    if (N == 0)
        throw std::invalid_argument("mobius_sieve: N must be positive");
    // one byte per value plus one bit of primality scratch
    if (N + 1 > budget_bytes || (N + 1) + (N + 1) / 8 > budget_bytes)
        throw BudgetExceeded("mobius_sieve: N = " + std::to_string(N) + " exceeds memory budget");

    std::vector<std::int8_t> mu(N + 1, 1);
    mu[0] = 0;
    std::vector<bool> composite(N + 1, false);
    for (std::uint64_t p = 2; p <= N; ++p) {
        if (composite[p])
            continue;
        for (std::uint64_t k = p; k <= N; k += p) {
            if (k > p)
                composite[k] = true;
            mu[k] = static_cast<std::int8_t>(-mu[k]);
        }
        if (p <= N / p) {
            const std::uint64_t sq = p * p;
            for (std::uint64_t k = sq; k <= N; k += sq)
                mu[k] = 0;
        }
    }
    return mu;
}

std::uint64_t tau(std::int64_t n)
{
    if (n <= 0)
        throw std::invalid_argument("tau: n must be positive");
    std::uint64_t t = 1;
    const auto factorization = factorize(n);
    for (const auto& f : factorization.factors())
        t *= f.exponent + 1;
    return t;
}

std::uint64_t gcd_many(std::span<const std::int64_t> values)
{
    if (values.empty())
        throw std::invalid_argument("gcd_many: at least one value required");
    std::uint64_t g = 0;
    for (std::int64_t v : values) {
        const std::uint64_t a = v < 0 ? static_cast<std::uint64_t>(0) - static_cast<std::uint64_t>(v)
                                      : static_cast<std::uint64_t>(v);
        g = std::gcd(g, a);
    }
    return g;
}

ResidueClass mod_inverse(std::int64_t k, std::uint64_t q)
{
    if (q == 0)
        throw std::invalid_argument("mod_inverse: modulus must be positive");
    __int128 old_r = reduce_mod(k, q), r = q;
    __int128 old_s = 1, s = 0;
    while (r != 0) {
        const __int128 quot = old_r / r;
        std::tie(old_r, r) = std::pair{r, old_r - quot * r};
        std::tie(old_s, s) = std::pair{s, old_s - quot * s};
    }
    if (old_r != 1 && q != 1)
        throw NotInvertible("mod_inverse: " + std::to_string(k) + " is not invertible mod " +
                            std::to_string(q));
    __int128 v = old_s % static_cast<__int128>(q);
    if (v < 0)
        v += q;
    return {static_cast<std::uint64_t>(v), q};
}

int jacobi(std::int64_t a, std::uint64_t q)
{
    if (q % 2 == 0)
        throw std::invalid_argument("jacobi: modulus must be odd, got " + std::to_string(q));
    std::uint64_t n = q;
    std::uint64_t x = reduce_mod(a, n);
    int t = 1;
    while (x != 0) {
        while (x % 2 == 0) {
            x /= 2;
            const std::uint64_t r = n % 8;
            if (r == 3 || r == 5)
                t = -t;
        }
        std::swap(x, n);
        if (x % 4 == 3 && n % 4 == 3)
            t = -t;
        x %= n;
    }
    return n == 1 ? t : 0;
}

namespace detail {

std::vector<std::uint64_t> sqrt_mod_unchecked(std::uint64_t a, std::uint64_t p, unsigned e,
                                              std::uint64_t pe)
{
    std::vector<std::uint64_t> roots;
    if (a == 0) {
        // y = 0 (mod p^ceil(e/2))
        const std::uint64_t step = checked_power(p, (e + 1) / 2);
        for (std::uint64_t y = 0; y < pe; y += step)
            roots.push_back(y);
        return roots;
    }

    unsigned v = 0;
    std::uint64_t u = a;
    while (u % p == 0) {
        u /= p;
        ++v;
    }
    if (v % 2 != 0)
        return roots;

    // y = p^(v/2) z with z^2 = u (mod p^(e-v)); z matters mod p^(e-v/2).
    const unsigned unit_exp = e - v;
    const std::uint64_t unit_mod = checked_power(p, unit_exp);
    const std::uint64_t z0 = tonelli_shanks(u % p, p);
    if (z0 == 0)
        return roots;
    const std::uint64_t z = hensel_lift(z0, u % unit_mod, p, unit_exp);
    const std::uint64_t scale = checked_power(p, v / 2);

    for (std::uint64_t base : {z, unit_mod - z}) {
        for (std::uint64_t k = 0; k < scale; ++k)
            roots.push_back(mul_mod(scale, base + k * unit_mod, pe));
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

}  // namespace detail

std::vector<ResidueClass> sqrt_mod(std::int64_t a, std::uint64_t p, unsigned e)
{
    if (p % 2 == 0)
        throw std::invalid_argument("sqrt_mod: p must be odd");
    if (!is_prime(p))
        throw std::invalid_argument("sqrt_mod: p must be prime, got " + std::to_string(p));
    if (e == 0)
        throw std::invalid_argument("sqrt_mod: exponent must be positive");

    const std::uint64_t pe = checked_power(p, e);
    std::vector<ResidueClass> roots;
    for (std::uint64_t y : detail::sqrt_mod_unchecked(reduce_mod(a, pe), p, e, pe))
        roots.push_back({y, pe});
    return roots;
}

std::uint64_t sqrt_mod_count(std::uint64_t a, std::uint64_t p, unsigned e)
{
    if (a == 0)
        return checked_power(p, e / 2);
    unsigned v = 0;
    while (a % p == 0) {
        a /= p;
        ++v;
    }
    if (v % 2 != 0)
        return 0;
    if (jacobi(static_cast<std::int64_t>(a % p), p) != 1)
        return 0;
    return 2 * checked_power(p, v / 2);
}

}  // namespace sqf
