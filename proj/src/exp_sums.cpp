#include "sqf/exp_sums.hpp"

#include "sqf/nt_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace sqf {

namespace {

constexpr std::uint64_t max_table_modulus = std::uint64_t{1} << 22;

// Inverse of x modulo q, or 0 when x is not a unit (q >= 2, q < 2^62).
std::uint64_t unit_inverse(std::uint64_t x, std::uint64_t q)
{
    std::int64_t old_r = static_cast<std::int64_t>(x), r = static_cast<std::int64_t>(q);
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        const std::int64_t quot = old_r / r;
        const std::int64_t nr = old_r - quot * r;
        old_r = r;
        r = nr;
        const std::int64_t ns = old_s - quot * s;
        old_s = s;
        s = ns;
    }
    if (old_r != 1)
        return 0;
    std::int64_t v = old_s % static_cast<std::int64_t>(q);
    if (v < 0)
        v += static_cast<std::int64_t>(q);
    return static_cast<std::uint64_t>(v);
}

}  // namespace

bool approx_equal(ComplexValue a, ComplexValue b, double tol)
{
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= tol * scale;
}

ComplexValue e(double t)
{
    const double angle = 2.0 * std::numbers::pi * (t - std::floor(t));
    return {std::cos(angle), std::sin(angle)};
}

ComplexValue e_q(std::int64_t k, std::uint64_t q)
{
    const std::uint64_t r = reduce_mod(k, q);
    if (r == 0)
        return {1.0, 0.0};
    // fold into (-q/2, q/2] so the angle stays small
    const double num = 2 * r <= q ? static_cast<double>(r) : -static_cast<double>(q - r);
    const double angle = 2.0 * std::numbers::pi * num / static_cast<double>(q);
    return {std::cos(angle), std::sin(angle)};
}

UnitCircle::UnitCircle(std::uint64_t q) : q_(q)
{
    if (q == 0)
        throw std::invalid_argument("UnitCircle: modulus must be positive");
    if (q <= max_table_modulus) {
        table_.resize(q);
        for (std::uint64_t k = 0; k < q; ++k)
            table_[k] = compute(k);
    }
}

ComplexValue UnitCircle::compute(std::uint64_t k) const
{
    return e_q(static_cast<std::int64_t>(k), q_);
}

ComplexValue UnitCircle::operator()(std::int64_t k) const
{
    return at(reduce_mod(k, q_));
}

const UnitCircle& UnitCircleCache::get(std::uint64_t q)
{
    auto it = tables_.find(q);
    if (it == tables_.end())
        it = tables_.emplace(q, UnitCircle(q)).first;
    return it->second;
}

void PairwiseSum::add(ComplexValue term)
{
    block_ += term;
    if (++in_block_ < block_size)
        return;

    ComplexValue carry = block_;
    block_ = {};
    in_block_ = 0;
    for (std::size_t level = 0;; ++level) {
        if (level == levels_.size()) {
            levels_.push_back(carry);
            occupied_.push_back(true);
            return;
        }
        if (!occupied_[level]) {
            levels_[level] = carry;
            occupied_[level] = true;
            return;
        }
        carry += levels_[level];
        occupied_[level] = false;
    }
}

ComplexValue PairwiseSum::total() const
{
    ComplexValue sum = block_;
    for (std::size_t level = 0; level < levels_.size(); ++level)
        if (occupied_[level])
            sum += levels_[level];
    return sum;
}

ComplexValue gauss_direct(std::uint64_t q, std::int64_t n, std::int64_t m)
{
    if (q == 0)
        throw std::invalid_argument("gauss_direct: q must be positive");
    return gauss_direct(UnitCircle(q), n, m);
}

ComplexValue gauss_direct(const UnitCircle& circle, std::int64_t n, std::int64_t m)
{
    const std::uint64_t q = circle.modulus();
    const std::uint64_t nr = reduce_mod(n, q);
    const std::uint64_t mr = reduce_mod(m, q);

    // phase(x) = n x^2 + m x; phase(x+1) - phase(x) = n(2x+1) + m
    std::uint64_t phase = 0;                   // x = 0, same as x = q
    std::uint64_t step = (nr + mr) % q;        // phase(1) - phase(0)
    const std::uint64_t step_step = mul_mod(2, nr, q);
    PairwiseSum sum;
    sum.add(circle.at(phase));
    for (std::uint64_t x = 1; x < q; ++x) {
        phase += step;
        if (phase >= q)
            phase -= q;
        step += step_step;
        if (step >= q)
            step -= q;
        sum.add(circle.at(phase));
    }
    return sum.total();
}

ComplexValue gauss_reduce(std::uint64_t q, std::int64_t n, std::int64_t m)
{
    UnitCircleCache cache;
    return gauss_reduce(q, n, m, cache);
}

ComplexValue gauss_reduce(std::uint64_t q, std::int64_t n, std::int64_t m, UnitCircleCache& cache)
{
    if (q == 0)
        throw std::invalid_argument("gauss_reduce: q must be positive");
    const std::uint64_t nr = reduce_mod(n, q);
    const std::uint64_t mr = reduce_mod(m, q);
    const std::uint64_t d = std::gcd(q, nr);
    if (mr % d != 0)
        return {0.0, 0.0};
    const auto dd = static_cast<double>(d);
    return dd * gauss_direct(cache.get(q / d), static_cast<std::int64_t>(nr / d),
                             static_cast<std::int64_t>(mr / d));
}

ComplexValue gauss_unit(std::uint64_t q)
{
    if (q % 2 == 0)
        throw std::invalid_argument("gauss_unit: q must be odd");
    const double root = std::sqrt(static_cast<double>(q));
    return q % 4 == 1 ? ComplexValue{root, 0.0} : ComplexValue{0.0, root};
}

ComplexValue gauss_closed_odd(std::uint64_t q, std::int64_t n, std::int64_t m)
{
    if (q == 0 || q % 2 == 0 || std::gcd(q, reduce_mod(n, q)) != 1)
        throw std::invalid_argument("gauss_closed_odd: requires gcd(q, 2n) = 1");
    if (q == 1)
        return {1.0, 0.0};
    const std::uint64_t nr = reduce_mod(n, q);
    const std::uint64_t mr = reduce_mod(m, q);
    const std::uint64_t inv4n = mod_inverse(static_cast<std::int64_t>(mul_mod(4, nr, q)), q).value;
    const std::uint64_t phase = mul_mod(inv4n, mul_mod(mr, mr, q), q);
    const ComplexValue twist = e_q(-static_cast<std::int64_t>(phase), q);
    return twist * static_cast<double>(jacobi(static_cast<std::int64_t>(nr), q)) * gauss_unit(q);
}

ComplexValue kloosterman_direct(std::uint64_t q, std::int64_t n, std::int64_t m)
{
    if (q == 0)
        throw std::invalid_argument("kloosterman_direct: q must be positive");
    return kloosterman_direct(UnitCircle(q), n, m);
}

ComplexValue kloosterman_direct(const UnitCircle& circle, std::int64_t n, std::int64_t m)
{
    const std::uint64_t q = circle.modulus();
    if (q == 1)
        return {1.0, 0.0};
    const std::uint64_t nr = reduce_mod(n, q);
    const std::uint64_t mr = reduce_mod(m, q);
    PairwiseSum sum;
    for (std::uint64_t x = 1; x < q; ++x) {
        const std::uint64_t xinv = unit_inverse(x, q);
        if (xinv == 0)
            continue;
        std::uint64_t phase = mul_mod(nr, x, q) + mul_mod(mr, xinv, q);
        if (phase >= q)
            phase -= q;
        sum.add(circle.at(phase));
    }
    return sum.total();
}

}  // namespace sqf
