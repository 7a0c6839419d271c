#pragma once

// Elementary and modular number theory on 64-bit integers.
//
// Everything here is a pure function of its arguments. Moduli are unsigned,
// residues that may be negative on input (n, m, a, k) are signed and get
// reduced into [0, q) before use.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace sqf {

// Thrown when a requested table or enumeration would exceed its configured
// memory/size ceiling.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown by mod_inverse (and by callers that need an inverse) when
// gcd(k, q) != 1.
class NotInvertible : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// 2^31 bytes, i.e. a 2^34-bit sieve.
inline constexpr std::uint64_t default_memory_budget = std::uint64_t{1} << 31;

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Canonical factorization: primes strictly increasing, exponents >= 1,
// product equal to n. factorize(1) has no factors.
class Factorization {
public:
    Factorization() = default;
    Factorization(std::uint64_t n, std::vector<PrimePower> factors);

    std::uint64_t value() const { return n_; }
    const std::vector<PrimePower>& factors() const { return factors_; }
    bool is_squarefree() const;

    // All positive divisors in increasing order.
    std::vector<std::uint64_t> divisors() const;

private:
    std::uint64_t n_ = 1;
    std::vector<PrimePower> factors_;
};

struct ResidueClass {
    std::uint64_t value;
    std::uint64_t modulus;

    friend bool operator==(const ResidueClass&, const ResidueClass&) = default;
};

// --- modular helpers -------------------------------------------------------

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % q);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t q);

// a mod q in [0, q) for any signed a. q >= 1.
inline std::uint64_t reduce_mod(std::int64_t a, std::uint64_t q)
{
    if (a >= 0)
        return static_cast<std::uint64_t>(a) % q;
    const std::uint64_t r = (static_cast<std::uint64_t>(-(a + 1))) % q;  // no overflow at INT64_MIN
    return q - 1 - r;
}

// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

// Primes in [2, limit], increasing.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

// Largest r with r*r <= n.
std::uint64_t isqrt(std::uint64_t n);

// --- arithmetic functions --------------------------------------------------

// Trial division up to 10^6, then Miller-Rabin + Pollard rho.
// Rejects n <= 0 with std::invalid_argument.
Factorization factorize(std::int64_t n);

int mobius(std::int64_t n);

// mu(n) for n in [0, N]; entry 0 is unused and set to 0.
// Throws BudgetExceeded when the table would not fit in budget_bytes.
std::vector<std::int8_t> mobius_sieve(std::uint64_t N,
                                      std::uint64_t budget_bytes = default_memory_budget);

std::uint64_t tau(std::int64_t n);

// gcd of |values|; all zeros gives 0. Rejects an empty list.
std::uint64_t gcd_many(std::span<const std::int64_t> values);

// r in [0, q) with k*r = 1 (mod q). Throws NotInvertible when gcd(k, q) != 1.
ResidueClass mod_inverse(std::int64_t k, std::uint64_t q);

// Jacobi symbol (a/q) for odd q >= 1, by binary reciprocity.
int jacobi(std::int64_t a, std::uint64_t q);

// All y in [0, p^e) with y^2 = a (mod p^e), increasing. p must be an odd
// prime; the 2-adic case is left to callers.
std::vector<ResidueClass> sqrt_mod(std::int64_t a, std::uint64_t p, unsigned e);

// Number of roots of y^2 = a (mod p^e) for an odd prime p, a in [0, p^e).
// No argument validation.
std::uint64_t sqrt_mod_count(std::uint64_t a, std::uint64_t p, unsigned e);

namespace detail {
// Core of sqrt_mod without validation: a in [0, pe), pe = p^e.
std::vector<std::uint64_t> sqrt_mod_unchecked(std::uint64_t a, std::uint64_t p, unsigned e,
                                              std::uint64_t pe);
}  // namespace detail

}  // namespace sqf
