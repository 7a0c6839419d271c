// Runs the ten acceptance criteria and prints one PASS/FAIL line each.

#include "sqf/verify.hpp"

#include <cstdio>
#include <string>
#include <vector>

int main()
{
    const sqf::VerifyOptions options;
    const auto names = sqf::suite_names();
    int failed = 0;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::vector<std::string> one{std::string(names[i])};
        const auto result = sqf::run_suites(one, options).front();
        std::printf("criterion %2zu %-18s %s  checks=%llu failures=%llu  %.1f s  %s\n", i + 1,
                    result.name.c_str(), result.passed ? "PASS" : "FAIL",
                    static_cast<unsigned long long>(result.checks),
                    static_cast<unsigned long long>(result.failures), result.elapsed_seconds,
                    result.detail.c_str());
        std::fflush(stdout);
        failed += result.passed ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(names.size()) - failed, names.size());
    return failed == 0 ? 0 : 1;
}
