#pragma once

// Cross-oracle verification suites. Each suite pits two independent
// evaluation routes (or an evaluator and a proven bound) against each other
// over a fixed grid and reports how many checks failed.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sqf {

struct VerifyOptions {
    std::uint64_t seed = 20100172;
    unsigned threads = 1;
};

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::uint64_t checks = 0;
    std::uint64_t failures = 0;
    std::string detail;
    double elapsed_seconds = 0.0;
};

SuiteResult verify_oracle_equivalence(const VerifyOptions& options);
SuiteResult verify_lambda_agreement(const VerifyOptions& options);
SuiteResult verify_bounds(const VerifyOptions& options);
SuiteResult verify_gauss_identities(const VerifyOptions& options);
SuiteResult verify_multiplicativity(const VerifyOptions& options);
SuiteResult verify_constant(const VerifyOptions& options);
SuiteResult verify_asymptotic_scan(const VerifyOptions& options);
SuiteResult verify_rho_truncation(const VerifyOptions& options);
SuiteResult verify_harmonic_envelope(const VerifyOptions& options);
SuiteResult verify_lift_law(const VerifyOptions& options);

// Suite names in execution order.
std::vector<std::string_view> suite_names();

// Runs the named suites (all of them when names is empty). Throws
// std::invalid_argument on an unknown name.
std::vector<SuiteResult> run_suites(std::span<const std::string> names, const VerifyOptions& options);

}  // namespace sqf
