#pragma once

// Complete exponential sums: Gauss sums G(q; n, m) and Kloosterman sums
// K(q; n, m), plus the small amount of numeric machinery they share.

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace sqf {

using ComplexValue = std::complex<double>;

// |a - b| <= tol * max(1, |a|, |b|)
bool approx_equal(ComplexValue a, ComplexValue b, double tol = 1e-6);

// e_q(k) = exp(2 pi i k / q). Tabulated for q up to 2^22, computed on the
// fly above that.
class UnitCircle {
public:
    explicit UnitCircle(std::uint64_t q);

    std::uint64_t modulus() const { return q_; }

    // k must already lie in [0, q)
    ComplexValue at(std::uint64_t k) const
    {
        return table_.empty() ? compute(k) : table_[k];
    }

    ComplexValue operator()(std::int64_t k) const;

private:
    ComplexValue compute(std::uint64_t k) const;

    std::uint64_t q_;
    std::vector<ComplexValue> table_;
};

// Caller-owned cache of UnitCircle tables keyed by modulus. Not thread-safe.
class UnitCircleCache {
public:
    const UnitCircle& get(std::uint64_t q);

private:
    std::map<std::uint64_t, UnitCircle> tables_;
};

// Streaming pairwise (cascade) summation: terms are summed in blocks and
// block sums are merged like a binary counter, so rounding error grows as
// O(log n) instead of O(n).
class PairwiseSum {
public:
    void add(ComplexValue term);
    ComplexValue total() const;

private:
    static constexpr std::size_t block_size = 64;

    ComplexValue block_{};
    std::size_t in_block_ = 0;
    // levels_[k] holds a partial sum over 2^k blocks, if occupied
    std::vector<ComplexValue> levels_;
    std::vector<bool> occupied_;
};

// e(t) for real t
ComplexValue e(double t);

// e_q(k) = e(k / q), computed exactly from k mod q
ComplexValue e_q(std::int64_t k, std::uint64_t q);

// --- Gauss sums ------------------------------------------------------------

// sum_{x=1..q} e_q(n x^2 + m x)
ComplexValue gauss_direct(std::uint64_t q, std::int64_t n, std::int64_t m);
ComplexValue gauss_direct(const UnitCircle& circle, std::int64_t n, std::int64_t m);

// d = gcd(q, n): d G(q/d; n/d, m/d) when d | m, else 0.
ComplexValue gauss_reduce(std::uint64_t q, std::int64_t n, std::int64_t m);
ComplexValue gauss_reduce(std::uint64_t q, std::int64_t n, std::int64_t m, UnitCircleCache& cache);

// G(q; 1) for odd q: sqrt(q) if q = 1 (mod 4), i sqrt(q) if q = 3 (mod 4).
ComplexValue gauss_unit(std::uint64_t q);

// e_q(-inv(4n) m^2) (n/q) G(q; 1), valid when gcd(q, 2n) = 1.
// Throws std::invalid_argument otherwise.
ComplexValue gauss_closed_odd(std::uint64_t q, std::int64_t n, std::int64_t m);

// --- Kloosterman sums ------------------------------------------------------

// sum over units x in [1, q] of e_q(n x + m inv(x)). Direct summation only.
ComplexValue kloosterman_direct(std::uint64_t q, std::int64_t n, std::int64_t m);
ComplexValue kloosterman_direct(const UnitCircle& circle, std::int64_t n, std::int64_t m);

}  // namespace sqf
