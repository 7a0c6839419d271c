#include "sqf/lambda_sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sqf {

namespace {

constexpr std::uint64_t exhaustive_limit = 100;
constexpr std::uint64_t kloosterman_cache_limit = std::uint64_t{1} << 16;

// Roots of y^2 = a (mod 2^e), lifted one bit at a time.
std::vector<std::uint64_t> roots_mod_power_of_two(std::uint64_t a, unsigned e)
{
    std::vector<std::uint64_t> roots;
    for (std::uint64_t y : {0, 1})
        if ((y * y - a) % 2 == 0)
            roots.push_back(y);
    std::uint64_t mod = 2;
    for (unsigned k = 1; k < e && !roots.empty(); ++k) {
        const std::uint64_t next = mod * 2;
        std::vector<std::uint64_t> lifted;
        for (std::uint64_t r : roots) {
            for (std::uint64_t cand : {r, r + mod}) {
                if ((mul_mod(cand, cand, next) + next - a % next) % next == 0)
                    lifted.push_back(cand);
            }
        }
        roots = std::move(lifted);
        mod = next;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// q * sum over l | q with (q/l) | (n, m) of (-1)^((l-1)/2) l^-1 K(l; 1, c_l),
// c_l = -inv(4) (n'^2 + m'^2) mod l. n, m already reduced mod q; divisors
// increasing; quarter[i] = inv(4) mod divisors[i].
template <typename Kloosterman>
ComplexValue odd_decomposition(std::uint64_t q, std::uint64_t n, std::uint64_t m,
                               const std::vector<std::uint64_t>& divisors,
                               const std::vector<std::uint64_t>& quarter, Kloosterman&& kloosterman)
{
    PairwiseSum sum;
    for (std::size_t i = 0; i < divisors.size(); ++i) {
        const std::uint64_t l = divisors[i];
        const std::uint64_t k = q / l;
        if (n % k != 0 || m % k != 0)
            continue;
        const std::uint64_t np = n / k, mp = m / k;  // already < l
        const std::uint64_t norm = (mul_mod(np, np, l) + mul_mod(mp, mp, l)) % l;
        const std::uint64_t scaled = mul_mod(quarter[i], norm, l);
        const std::uint64_t c = scaled == 0 ? 0 : l - scaled;
        const double sign = (l % 4 == 1) ? 1.0 : -1.0;
        sum.add(sign * kloosterman(i, c) / static_cast<double>(l));
    }
    return static_cast<double>(q) * sum.total();
}

std::vector<std::uint64_t> quarter_inverses(const std::vector<std::uint64_t>& divisors)
{
    std::vector<std::uint64_t> quarter;
    quarter.reserve(divisors.size());
    for (std::uint64_t l : divisors)
        quarter.push_back(mod_inverse(4, l).value);
    return quarter;
}

}  // namespace

CircleSolver::CircleSolver(std::uint64_t q, std::uint64_t ceiling) : q_(q)
{
    if (q == 0)
        throw std::invalid_argument("solve_circle: q must be positive");
    if (q > ceiling)
        throw BudgetExceeded("solve_circle: q = " + std::to_string(q) + " exceeds ceiling " +
                             std::to_string(ceiling));
    if (q <= exhaustive_limit)
        return;
    const auto factorization = factorize(static_cast<std::int64_t>(q));
    for (const auto& [p, e] : factorization.factors()) {
        std::uint64_t power = 1;
        for (unsigned i = 0; i < e; ++i)
            power *= p;
        const std::uint64_t cofactor = q / power;
        const std::uint64_t inv = mod_inverse(static_cast<std::int64_t>(cofactor % power), power).value;
        components_.push_back({p, e, power, mul_mod(cofactor, inv, q)});
    }
}

std::vector<std::uint64_t> CircleSolver::component_roots(const Component& c, std::uint64_t x) const
{
    const std::uint64_t xr = x % c.power;
    const std::uint64_t value = (mul_mod(xr, xr, c.power) + 1) % c.power;
    const std::uint64_t target = value == 0 ? 0 : c.power - value;
    if (c.prime == 2)
        return roots_mod_power_of_two(target, c.exponent);
    return detail::sqrt_mod_unchecked(target, c.prime, c.exponent, c.power);
}

void CircleSolver::roots_for(std::uint64_t x, std::vector<std::uint64_t>& ys) const
{
    ys.clear();
    if (q_ <= exhaustive_limit) {
        const std::uint64_t base = (x % q_) * (x % q_) + 1;
        for (std::uint64_t y = 1; y <= q_; ++y)
            if ((base + y * y) % q_ == 0)
                ys.push_back(y);
        return;
    }
    ys.push_back(0);
    std::vector<std::uint64_t> next;
    for (const auto& c : components_) {
        const auto roots = component_roots(c, x);
        next.clear();
        for (std::uint64_t y : ys) {
            for (std::uint64_t r : roots) {
                std::uint64_t v = y + mul_mod(r, c.crt_coefficient, q_);
                if (v >= q_)
                    v -= q_;
                next.push_back(v);
            }
        }
        ys.swap(next);
        if (ys.empty())
            return;
    }
    for (auto& y : ys)
        if (y == 0)
            y = q_;
    std::sort(ys.begin(), ys.end());
}

std::uint64_t CircleSolver::root_count(std::uint64_t x) const
{
    if (q_ <= exhaustive_limit) {
        std::vector<std::uint64_t> ys;
        roots_for(x, ys);
        return ys.size();
    }
    std::uint64_t count = 1;
    for (const auto& c : components_) {
        if (c.prime == 2) {
            count *= component_roots(c, x).size();
        } else {
            const std::uint64_t xr = x % c.power;
            const std::uint64_t value = (mul_mod(xr, xr, c.power) + 1) % c.power;
            count *= sqrt_mod_count(value == 0 ? 0 : c.power - value, c.prime, c.exponent);
        }
        if (count == 0)
            break;
    }
    return count;
}

SolutionSet solve_circle(std::uint64_t q, std::uint64_t ceiling)
{
    const CircleSolver solver(q, ceiling);
    SolutionSet set{q, {}};
    std::vector<std::uint64_t> ys;
    for (std::uint64_t x = 1; x <= q; ++x) {
        solver.roots_for(x, ys);
        for (std::uint64_t y : ys)
            set.points.push_back({x, y});
    }
    return set;
}

std::uint64_t count_circle_solutions(std::uint64_t q, std::uint64_t ceiling)
{
    const CircleSolver solver(q, ceiling);
    std::uint64_t total = 0;
    for (std::uint64_t x = 1; x <= q; ++x)
        total += solver.root_count(x);
    return total;
}

ComplexValue lambda_direct(std::uint64_t q, std::int64_t n, std::int64_t m)
{
    return lambda_direct(solve_circle(q), n, m);
}

ComplexValue lambda_direct(const SolutionSet& solutions, std::int64_t n, std::int64_t m)
{
    return lambda_direct(solutions, UnitCircle(solutions.modulus), n, m);
}

ComplexValue lambda_direct(const SolutionSet& solutions, const UnitCircle& circle, std::int64_t n,
                           std::int64_t m)
{
    const std::uint64_t q = solutions.modulus;
    if (circle.modulus() != q)
        throw std::invalid_argument("lambda_direct: circle modulus mismatch");
    const std::uint64_t nr = reduce_mod(n, q);
    const std::uint64_t mr = reduce_mod(m, q);
    PairwiseSum sum;
    for (const auto& [x, y] : solutions.points) {
        std::uint64_t phase = mul_mod(nr, x, q) + mul_mod(mr, y, q);
        if (phase >= q)
            phase -= q;
        sum.add(circle.at(phase));
    }
    return sum.total();
}

ComplexValue lambda_fast_odd(std::uint64_t q, std::int64_t n, std::int64_t m)
{
    if (q == 0 || q % 2 == 0)
        throw std::invalid_argument("lambda_fast_odd: q must be odd and positive");
    const auto divisors = factorize(static_cast<std::int64_t>(q)).divisors();
    const auto quarter = quarter_inverses(divisors);
    return odd_decomposition(q, reduce_mod(n, q), reduce_mod(m, q), divisors, quarter,
                             [&](std::size_t i, std::uint64_t c) {
                                 return kloosterman_direct(divisors[i], 1, static_cast<std::int64_t>(c)).real();
                             });
}

ComplexValue lambda_multiplicative(std::uint64_t q1, std::uint64_t q2, std::int64_t n, std::int64_t m)
{
    if (q1 == 0 || q2 == 0)
        throw std::invalid_argument("lambda_multiplicative: moduli must be positive");
    if (std::gcd(q1, q2) != 1)
        throw std::invalid_argument("lambda_multiplicative: moduli must be coprime");
    const std::uint64_t inv2 = mod_inverse(static_cast<std::int64_t>(q2 % q1), q1).value;
    const std::uint64_t inv1 = mod_inverse(static_cast<std::int64_t>(q1 % q2), q2).value;
    const auto n1 = static_cast<std::int64_t>(mul_mod(reduce_mod(n, q1), inv2, q1));
    const auto m1 = static_cast<std::int64_t>(mul_mod(reduce_mod(m, q1), inv2, q1));
    const auto n2 = static_cast<std::int64_t>(mul_mod(reduce_mod(n, q2), inv1, q2));
    const auto m2 = static_cast<std::int64_t>(mul_mod(reduce_mod(m, q2), inv1, q2));
    return lambda_direct(q1, n1, m1) * lambda_direct(q2, n2, m2);
}

LambdaEvaluator::LambdaEvaluator(std::uint64_t q) : q_(q), two_power_(1), odd_(q)
{
    if (q == 0)
        throw std::invalid_argument("lambda_any: q must be positive");
    if (q % 8 == 0)
        throw std::invalid_argument("lambda_any: modulus " + std::to_string(q) +
                                    " is divisible by 8, outside the supported range");
    while (odd_ % 2 == 0) {
        odd_ /= 2;
        two_power_ *= 2;
    }
    odd_inverse_mod_two_ = mod_inverse(static_cast<std::int64_t>(odd_ % two_power_), two_power_).value;
    two_inverse_mod_odd_ = mod_inverse(static_cast<std::int64_t>(two_power_ % odd_), odd_).value;
    two_solutions_ = solve_circle(two_power_);
    divisors_ = factorize(static_cast<std::int64_t>(odd_)).divisors();
    quarter_ = quarter_inverses(divisors_);
    kloosterman_cache_.resize(divisors_.size());
}

double LambdaEvaluator::kloosterman_unit(std::size_t divisor_index, std::uint64_t c)
{
    const std::uint64_t l = divisors_[divisor_index];
    if (l > kloosterman_cache_limit)
        return kloosterman_direct(l, 1, static_cast<std::int64_t>(c)).real();
    auto& cache = kloosterman_cache_[divisor_index];
    if (cache.empty())
        cache.assign(l, std::numeric_limits<double>::quiet_NaN());
    double& slot = cache[c];
    if (std::isnan(slot))
        slot = kloosterman_direct(l, 1, static_cast<std::int64_t>(c)).real();
    return slot;
}

ComplexValue LambdaEvaluator::odd_part(std::uint64_t n, std::uint64_t m)
{
    return odd_decomposition(odd_, n, m, divisors_, quarter_,
                             [this](std::size_t i, std::uint64_t c) { return kloosterman_unit(i, c); });
}

ComplexValue LambdaEvaluator::operator()(std::int64_t n, std::int64_t m)
{
    const std::uint64_t n_odd = reduce_mod(n, odd_);
    const std::uint64_t m_odd = reduce_mod(m, odd_);
    if (two_power_ == 1)
        return odd_part(n_odd, m_odd);
    if (two_solutions_.size() == 0)
        return {0.0, 0.0};

    const auto two_n = static_cast<std::int64_t>(mul_mod(reduce_mod(n, two_power_), odd_inverse_mod_two_, two_power_));
    const auto two_m = static_cast<std::int64_t>(mul_mod(reduce_mod(m, two_power_), odd_inverse_mod_two_, two_power_));
    const ComplexValue two_factor = lambda_direct(two_solutions_, two_n, two_m);
    return two_factor * odd_part(mul_mod(n_odd, two_inverse_mod_odd_, odd_),
                                 mul_mod(m_odd, two_inverse_mod_odd_, odd_));
}

ComplexValue lambda_any(std::uint64_t q, std::int64_t n, std::int64_t m)
{
    LambdaEvaluator evaluator(q);
    return evaluator(n, m);
}

}  // namespace sqf
