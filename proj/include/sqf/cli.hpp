#pragma once

// Command-line front end: argument parsing, dispatch, and the csv/json/text
// report writers (plus CSV readers so reports can be round-tripped).

#include "sqf/asymptotic.hpp"
#include "sqf/counting.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqf::cli {

enum class Command { count, lambda, constant, scan, verify };
enum class OutputFormat { csv, json, text };
enum class MethodChoice { value_sieve, mobius_identity, both };

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int budget = 2;
inline constexpr int verification = 3;
}  // namespace exit_code

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    Command command = Command::count;
    std::optional<std::uint64_t> H;
    std::optional<std::uint64_t> q;
    std::optional<std::int64_t> n;
    std::optional<std::int64_t> m;
    std::optional<std::uint64_t> P;
    std::vector<std::uint64_t> H_ladder;
    MethodChoice method = MethodChoice::both;
    OutputFormat output_format = OutputFormat::text;
    unsigned threads = 1;
    std::uint64_t memory_budget = default_memory_budget;
    std::uint64_t seed = 20100172;
    std::vector<std::string> suites;  // verify only; empty means all
};

// Throws UsageError when a field required by the command is missing or
// out of range.
void validate(const RunConfig& config);

// Executes a validated config, writing the report to out and diagnostics to
// err. Returns one of the exit_code values.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses argv (flags override SQF_MEMORY_BUDGET / SQF_THREADS from the
// environment), validates, and runs.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// --- report I/O ------------------------------------------------------------

// header H,S,method,elapsed_seconds
void write_count_csv(std::ostream& out, std::span<const PairCountReport> reports);
std::vector<PairCountReport> parse_count_csv(std::istream& in);

// header H,S,E,elapsed_seconds, footer "# alpha=<fit>,c=<value>,P=<cutoff>"
void write_scan_csv(std::ostream& out, const ScanReport& report);
// tail_bound is not part of the CSV and is recomputed from P.
ScanReport parse_scan_csv(std::istream& in);

// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

}  // namespace sqf::cli
