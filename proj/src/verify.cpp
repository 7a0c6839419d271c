#include "sqf/verify.hpp"

#include "sqf/asymptotic.hpp"
#include "sqf/counting.hpp"
#include "sqf/exp_sums.hpp"
#include "sqf/lambda_sums.hpp"
#include "sqf/nt_core.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace sqf {

namespace {

using Clock = std::chrono::steady_clock;

// Accumulates pass/fail counts for one suite and remembers the first few
// failures for the report.
class Tally {
public:
    explicit Tally(std::string name) : start_(Clock::now()) { result_.name = std::move(name); }

    void check(bool ok, const std::function<std::string()>& what)
    {
        ++result_.checks;
        if (ok)
            return;
        ++result_.failures;
        if (failures_.size() < 3)
            failures_.push_back(what());
    }

    SuiteResult finish(const std::string& summary)
    {
        result_.passed = result_.failures == 0;
        std::ostringstream detail;
        detail << summary;
        for (const auto& f : failures_)
            detail << "; FAIL " << f;
        result_.detail = detail.str();
        result_.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start_).count();
        return result_;
    }

private:
    SuiteResult result_;
    std::vector<std::string> failures_;
    Clock::time_point start_;
};

std::string show(ComplexValue z)
{
    std::ostringstream os;
    os.precision(10);
    os << "(" << z.real() << "," << z.imag() << ")";
    return os.str();
}

std::int64_t uniform(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi)
{
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

// Random (n, m) for modulus q: half uniform in [0, q), half scaled by a
// random divisor so that gcd(q, n, m) > 1 is exercised too.
std::pair<std::int64_t, std::int64_t> random_pair(std::mt19937_64& rng, std::uint64_t q,
                                                  const std::vector<std::uint64_t>& divisors)
{
    const auto qs = static_cast<std::int64_t>(q);
    std::int64_t n = uniform(rng, 0, qs - 1);
    std::int64_t m = uniform(rng, 0, qs - 1);
    if (uniform(rng, 0, 1) == 1) {
        const auto d = static_cast<std::int64_t>(divisors[uniform(rng, 0, static_cast<std::int64_t>(divisors.size()) - 1)]);
        n = (n * d) % qs;
        m = (m * d) % qs;
    }
    return {n, m};
}

// tiny slack for floating-point ties such as |K(1; n, m)| = 1 = bound
bool within(double value, double bound)
{
    return value <= bound * (1.0 + 1e-12) + 1e-9;
}

}  // namespace

SuiteResult verify_oracle_equivalence(const VerifyOptions& options)
{
    Tally tally("oracle-equivalence");
    std::vector<std::uint64_t> Hs;
    for (std::uint64_t H = 1; H <= 50; ++H)
        Hs.push_back(H);
    Hs.insert(Hs.end(), {100, 150, 200});

    CountOptions count{options.threads, default_memory_budget};
    for (std::uint64_t H : Hs) {
        const auto direct = count_pairs_direct(H, count);
        const auto mobius = count_pairs_mobius(H, count);
        tally.check(direct.S == mobius.S, [&] {
            return "H=" + std::to_string(H) + " sieve=" + std::to_string(direct.S) +
                   " mobius=" + std::to_string(mobius.S);
        });
    }
    return tally.finish("H in 1..50,100,150,200");
}

SuiteResult verify_lambda_agreement(const VerifyOptions& options)
{
    Tally tally("lambda-agreement");
    std::mt19937_64 rng(options.seed + 2);
    for (std::uint64_t q = 1; q <= 601; ++q) {
        if (q % 8 == 0)
            continue;
        const auto divisors = factorize(static_cast<std::int64_t>(q)).divisors();
        const auto solutions = solve_circle(q);
        const UnitCircle circle(q);
        LambdaEvaluator any(q);
        const double tol = lambda_tolerance(q);

        std::vector<std::pair<std::int64_t, std::int64_t>> pairs{{0, 0}};
        for (int i = 0; i < 10; ++i)
            pairs.push_back(random_pair(rng, q, divisors));

        for (const auto& [n, m] : pairs) {
            const ComplexValue direct = lambda_direct(solutions, circle, n, m);
            const ComplexValue via_any = any(n, m);
            tally.check(std::abs(direct - via_any) <= tol, [&] {
                return "any q=" + std::to_string(q) + " n=" + std::to_string(n) + " m=" +
                       std::to_string(m) + " direct=" + show(direct) + " any=" + show(via_any);
            });
            if (q % 2 == 1) {
                const ComplexValue fast = lambda_fast_odd(q, n, m);
                tally.check(std::abs(direct - fast) <= tol, [&] {
                    return "fast q=" + std::to_string(q) + " n=" + std::to_string(n) + " m=" +
                           std::to_string(m) + " direct=" + show(direct) + " fast=" + show(fast);
                });
            }
        }
    }
    return tally.finish("q <= 601, 8 !| q, (0,0) + 10 random pairs, tol 1e-5 q");
}

SuiteResult verify_bounds(const VerifyOptions& options)
{
    Tally tally("bounds");
    std::mt19937_64 rng(options.seed + 3);
    double worst_weil = 0.0, worst_lambda = 0.0;

    for (std::uint64_t q = 1; q <= 2000; ++q) {
        const auto f = factorize(static_cast<std::int64_t>(q));
        const auto divisors = f.divisors();
        const double t = static_cast<double>(divisors.size());
        const double sq = std::sqrt(static_cast<double>(q));
        const UnitCircle circle(q);
        for (int i = 0; i < 20; ++i) {
            const auto [n, m] = random_pair(rng, q, divisors);
            const std::int64_t args[] = {static_cast<std::int64_t>(q), n, m};
            const double g = static_cast<double>(gcd_many(args));
            const double value = std::abs(kloosterman_direct(circle, n, m));
            const double bound = t * sq * std::sqrt(g);
            worst_weil = std::max(worst_weil, value / bound);
            tally.check(within(value, bound), [&, n = n, m = m] {
                return "Weil q=" + std::to_string(q) + " n=" + std::to_string(n) + " m=" + std::to_string(m);
            });
        }
    }

    for (std::uint64_t q = 1; q <= 1500; ++q) {
        if (q % 8 == 0)
            continue;
        const auto divisors = factorize(static_cast<std::int64_t>(q)).divisors();
        const double t = static_cast<double>(divisors.size());
        const double sq = std::sqrt(static_cast<double>(q));
        const auto solutions = solve_circle(q);
        const UnitCircle circle(q);
        for (int i = 0; i < 20; ++i) {
            const auto [n, m] = random_pair(rng, q, divisors);
            const std::int64_t args[] = {static_cast<std::int64_t>(q), n, m};
            const double g = static_cast<double>(gcd_many(args));
            const double value = std::abs(lambda_direct(solutions, circle, n, m));
            const double bound = 16.0 * t * t * sq * std::sqrt(g);
            worst_lambda = std::max(worst_lambda, value / bound);
            tally.check(within(value, bound), [&, n = n, m = m] {
                return "lambda q=" + std::to_string(q) + " n=" + std::to_string(n) + " m=" + std::to_string(m);
            });
        }
    }

    std::ostringstream summary;
    summary << "Weil q <= 2000 max |K|/bound=" << worst_weil
            << ", lambda q <= 1500 max |lambda|/bound=" << worst_lambda;
    return tally.finish(summary.str());
}

SuiteResult verify_gauss_identities(const VerifyOptions&)
{
    Tally tally("gauss-identities");
    UnitCircleCache cache;

    for (std::uint64_t q = 1; q <= 300; ++q) {
        const UnitCircle& circle = cache.get(q);
        const auto qs = static_cast<std::int64_t>(q);
        for (std::int64_t n = 0; n < qs; ++n) {
            for (std::int64_t m = 0; m < qs; ++m) {
                const ComplexValue direct = gauss_direct(circle, n, m);
                const ComplexValue reduced = gauss_reduce(q, n, m, cache);
                tally.check(approx_equal(direct, reduced), [&] {
                    return "reduce q=" + std::to_string(q) + " n=" + std::to_string(n) + " m=" +
                           std::to_string(m) + " " + show(direct) + " vs " + show(reduced);
                });
            }
        }
    }

    for (std::uint64_t q = 1; q <= 301; q += 2) {
        const UnitCircle& circle = cache.get(q);
        const auto qs = static_cast<std::int64_t>(q);
        for (std::int64_t n = 0; n < qs; ++n) {
            if (std::gcd(q, static_cast<std::uint64_t>(n)) != 1)
                continue;
            for (std::int64_t m = 0; m < qs; ++m) {
                const ComplexValue direct = gauss_direct(circle, n, m);
                const ComplexValue closed = gauss_closed_odd(q, n, m);
                tally.check(approx_equal(direct, closed), [&] {
                    return "closed q=" + std::to_string(q) + " n=" + std::to_string(n) + " m=" +
                           std::to_string(m) + " " + show(direct) + " vs " + show(closed);
                });
            }
        }
    }

    for (std::uint64_t q = 1; q <= 2001; q += 2) {
        const ComplexValue g = gauss_direct(q, 1, 0);
        const double expected = (q % 4 == 1 ? 1.0 : -1.0) * static_cast<double>(q);
        const ComplexValue square = g * g;
        tally.check(std::abs(square - expected) <= 1e-6 * static_cast<double>(q), [&] {
            return "square q=" + std::to_string(q) + " G^2=" + show(square);
        });
    }
    return tally.finish("reduce q <= 300, closed form odd q <= 301, G(q;1)^2 odd q <= 2001");
}

SuiteResult verify_multiplicativity(const VerifyOptions& options)
{
    Tally tally("multiplicativity");
    std::mt19937_64 rng(options.seed + 5);
    int pairs = 0;
    while (pairs < 100) {
        const auto q1 = static_cast<std::uint64_t>(uniform(rng, 2, 100));
        const auto q2 = static_cast<std::uint64_t>(uniform(rng, 2, static_cast<std::int64_t>(10'000 / q1)));
        if (std::gcd(q1, q2) != 1)
            continue;
        ++pairs;
        const std::uint64_t q = q1 * q2;
        const std::int64_t n = uniform(rng, -static_cast<std::int64_t>(q), static_cast<std::int64_t>(q));
        const std::int64_t m = uniform(rng, -static_cast<std::int64_t>(q), static_cast<std::int64_t>(q));
        const ComplexValue product = lambda_multiplicative(q1, q2, n, m);
        const ComplexValue direct = lambda_direct(q, n, m);
        tally.check(std::abs(product - direct) <= lambda_tolerance(q), [&] {
            return "q1=" + std::to_string(q1) + " q2=" + std::to_string(q2) + " n=" + std::to_string(n) +
                   " m=" + std::to_string(m) + " " + show(product) + " vs " + show(direct);
        });
    }
    return tally.finish("100 random coprime pairs, q1 q2 <= 10^4");
}

SuiteResult verify_constant(const VerifyOptions&)
{
    Tally tally("constant");
    const auto coarse = constant_c(10'000);
    const auto fine = constant_c(20'000);
    const double step = std::abs(fine.value - coarse.value);
    tally.check(step <= coarse.tail_bound, [&] { return "product refinement exceeds tail bound"; });
    tally.check(fine.tail_bound < coarse.tail_bound, [&] { return "tail bound did not decrease"; });
    for (std::uint64_t P : {100, 1000}) {
        const auto a = constant_c(P), b = constant_c(2 * P);
        tally.check(std::abs(b.value - a.value) <= a.tail_bound && b.tail_bound < a.tail_bound,
                    [&] { return "refinement at P=" + std::to_string(P) + " exceeds tail bound"; });
    }

    const double series = dirichlet_partial_sum(500);
    const double series_tail = dirichlet_tail_bound(500);
    const double gap = std::abs(series - coarse.value);
    tally.check(gap <= series_tail + coarse.tail_bound, [&] { return "series and product disagree"; });

    std::ostringstream summary;
    summary.precision(12);
    summary << "c(1e4)=" << coarse.value << " +- " << coarse.tail_bound << ", |c(2e4)-c(1e4)|=" << step
            << ", series(500)=" << series << " gap=" << gap << " allowed=" << series_tail + coarse.tail_bound;
    return tally.finish(summary.str());
}

SuiteResult verify_asymptotic_scan(const VerifyOptions& options)
{
    Tally tally("asymptotic-scan");
    const std::uint64_t ladder[] = {250, 500, 1000, 2000, 4000};
    const auto report = error_scan(ladder, default_product_cutoff, {options.threads, default_memory_budget});

    std::ostringstream summary;
    summary.precision(6);
    for (const auto& row : report.rows) {
        const double H = static_cast<double>(row.H);
        const double envelope = 5.0 * std::pow(H, 1.5);
        tally.check(std::abs(row.E) <= envelope, [&] {
            return "H=" + std::to_string(row.H) + " |E| above 5 H^1.5";
        });
        summary << "H=" << row.H << " E=" << row.E << " ";
    }
    tally.check(report.alpha.has_value() && *report.alpha <= 1.6, [&] {
        return report.alpha ? "alpha=" + std::to_string(*report.alpha) + " > 1.6" : std::string("alpha not fitted");
    });
    summary << "alpha=" << (report.alpha ? *report.alpha : std::nan(""));
    return tally.finish(summary.str());
}

SuiteResult verify_rho_truncation(const VerifyOptions& options)
{
    Tally tally("rho-truncation");
    std::mt19937_64 rng(options.seed + 8);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    double worst = 0.0;
    for (double D : {10.0, 100.0, 1000.0}) {
        int drawn = 0;
        while (drawn < 1000) {
            const double t = dist(rng);
            const double dist_to_int = std::abs(t - std::round(t));
            if (dist_to_int < 1e-3)
                continue;
            ++drawn;
            const double err = std::abs(rho(t) - rho_fourier(D, t));
            const double envelope = std::min(1.0, 1.0 / (D * dist_to_int));
            worst = std::max(worst, err / envelope);
            tally.check(err <= 3.0 * envelope, [&] {
                return "D=" + std::to_string(D) + " t=" + std::to_string(t);
            });
        }
    }
    return tally.finish("D in {10,100,1000}, 1000 t each, max err/envelope=" + std::to_string(worst));
}

SuiteResult verify_harmonic_envelope(const VerifyOptions&)
{
    Tally tally("harmonic-envelope");
    const std::uint64_t Ds[] = {2, 10, 100, 1000};
    double worst_u = 0.0, worst_v = 0.0;
    for (std::uint64_t q = 1; q <= 500; ++q) {
        if (q % 8 == 0)
            continue;
        const auto sums = harmonic_lambda_sums(q, Ds);
        for (std::size_t i = 0; i < sums.size(); ++i) {
            const double scale = std::pow(static_cast<double>(q), 0.7) * std::pow(static_cast<double>(Ds[i]), 0.2);
            const double ru = sums[i].U / scale, rv = sums[i].V / scale;
            worst_u = std::max(worst_u, ru);
            worst_v = std::max(worst_v, rv);
            tally.check(ru <= 20.0, [&] { return "U q=" + std::to_string(q) + " D=" + std::to_string(Ds[i]); });
            tally.check(rv <= 20.0, [&] { return "V q=" + std::to_string(q) + " D=" + std::to_string(Ds[i]); });
        }
    }
    std::ostringstream summary;
    summary << "q <= 500, D in {2,10,100,1000}: max U/(q^0.7 D^0.2)=" << worst_u
            << ", max V/(q^0.7 D^0.2)=" << worst_v;
    return tally.finish(summary.str());
}

SuiteResult verify_lift_law(const VerifyOptions&)
{
    Tally tally("lift-law");
    for (std::uint64_t p : primes_up_to(47)) {
        const std::uint64_t q = p * p;
        // plain double loop over [1, q]^2
        std::uint64_t scanned = 0;
        for (std::uint64_t x = 1; x <= q; ++x)
            for (std::uint64_t y = 1; y <= q; ++y)
                scanned += (x * x + y * y + 1) % q == 0;
        const std::uint64_t value = lambda_p_squared(p);
        tally.check(value == scanned, [&] {
            return "p=" + std::to_string(p) + " lambda(p^2)=" + std::to_string(value) + " scan=" + std::to_string(scanned);
        });
        if (p % 2 == 1) {
            const std::uint64_t closed = p % 4 == 1 ? p * (p - 1) : p * (p + 1);
            tally.check(scanned == closed, [&] { return "p=" + std::to_string(p) + " closed form"; });
            tally.check(scanned == p * count_circle_solutions(p), [&] { return "p=" + std::to_string(p) + " p lambda(p)"; });
        }
    }
    tally.check(count_circle_solutions(4) == 0, [] { return std::string("lambda(4) != 0"); });
    return tally.finish("primes p <= 47 against exhaustive scan; lambda(4) = 0");
}

std::vector<std::string_view> suite_names()
{
    return {"oracle-equivalence", "lambda-agreement", "bounds",           "gauss-identities",
            "multiplicativity",   "constant",         "asymptotic-scan",  "rho-truncation",
            "harmonic-envelope",  "lift-law"};
}

std::vector<SuiteResult> run_suites(std::span<const std::string> names, const VerifyOptions& options)
{
    using Suite = SuiteResult (*)(const VerifyOptions&);
    const std::pair<std::string_view, Suite> table[] = {
        {"oracle-equivalence", verify_oracle_equivalence},
        {"lambda-agreement", verify_lambda_agreement},
        {"bounds", verify_bounds},
        {"gauss-identities", verify_gauss_identities},
        {"multiplicativity", verify_multiplicativity},
        {"constant", verify_constant},
        {"asymptotic-scan", verify_asymptotic_scan},
        {"rho-truncation", verify_rho_truncation},
        {"harmonic-envelope", verify_harmonic_envelope},
        {"lift-law", verify_lift_law},
    };

    for (const auto& name : names) {
        const bool known = std::any_of(std::begin(table), std::end(table),
                                       [&](const auto& entry) { return entry.first == name; });
        if (!known)
            throw std::invalid_argument("unknown verification suite: " + name);
    }

    std::vector<SuiteResult> results;
    for (const auto& [name, suite] : table) {
        const bool selected = names.empty() ||
                              std::find(names.begin(), names.end(), std::string(name)) != names.end();
        if (selected)
            results.push_back(suite(options));
    }
    return results;
}

}  // namespace sqf
