#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sqf/cli.hpp"

#include <json.hpp>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

using namespace sqf;
using namespace sqf::cli;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "sqfree");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("count reports both methods")
{
    const auto r = invoke({"count", "--H", "2"});
    CHECK(r.code == exit_code::ok);
    CHECK(r.out.find("S(2) = 3  [value-sieve") != std::string::npos);
    CHECK(r.out.find("S(2) = 3  [mobius-identity") != std::string::npos);
    CHECK(r.out.find("methods agree") != std::string::npos);
}

TEST_CASE("count --method both gives byte-identical S in csv")
{
    for (const char* H : {"1", "17", "150"}) {
        const auto r = invoke({"count", "--H", H, "--method", "both", "--output-format", "csv"});
        REQUIRE(r.code == exit_code::ok);
        std::istringstream in(r.out);
        const auto reports = parse_count_csv(in);
        REQUIRE(reports.size() == 2);
        CHECK(reports[0].S == reports[1].S);
        CHECK(reports[0].method == CountMethod::value_sieve);
        CHECK(reports[1].method == CountMethod::mobius_identity);
    }
}

TEST_CASE("count json mirrors PairCountReport")
{
    const auto r = invoke({"--output-format", "json", "count", "--H", "3", "--method", "value-sieve"});
    REQUIRE(r.code == exit_code::ok);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 1);
    CHECK(doc[0]["H"] == 3);
    CHECK(doc[0]["S"] == 8);
    CHECK(doc[0]["method"] == "value-sieve");
    CHECK(doc[0].contains("elapsed_seconds"));
}

TEST_CASE("lambda command")
{
    const auto r = invoke({"lambda", "--q", "15", "--n", "0", "--m", "0", "--output-format", "json"});
    REQUIRE(r.code == exit_code::ok);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["agree"] == true);
    std::vector<std::string> names;
    for (const auto& ev : doc["evaluators"]) {
        names.push_back(ev["name"]);
        CHECK(ev["re"].get<double>() == doctest::Approx(16.0));
        CHECK(std::abs(ev["im"].get<double>()) < 1e-9);
    }
    CHECK(names == std::vector<std::string>{"direct", "fast-odd", "any", "multiplicative"});

    const auto even = invoke({"lambda", "--q", "16", "--n", "1", "--m", "2", "--output-format", "json"});
    REQUIRE(even.code == exit_code::ok);
    CHECK(nlohmann::json::parse(even.out)["evaluators"].size() == 1);

    const auto text = invoke({"lambda", "--q", "3", "--n", "1", "--m", "0"});
    CHECK(text.out.find("-2.000000000") != std::string::npos);
    CHECK(text.out.find("evaluators agree") != std::string::npos);
}

TEST_CASE("constant command")
{
    const auto r = invoke({"constant", "--P", "3", "--output-format", "json"});
    REQUIRE(r.code == exit_code::ok);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["cutoff"] == 3);
    CHECK(doc["value"].get<double>() == doctest::Approx(23.0 / 27.0));
    CHECK(doc["tail_bound"].get<double>() > 0.0);

    const auto text = invoke({"constant", "--P", "3"});
    CHECK(text.out.find("0.851851851852 +- ") != std::string::npos);
}

TEST_CASE("scan csv round-trips")
{
    const auto r = invoke({"scan", "--ladder", "20,40,80,160,320", "--P", "1000", "--output-format", "csv"});
    REQUIRE(r.code == exit_code::ok);
    CHECK(r.out.rfind("H,S,E,elapsed_seconds\n", 0) == 0);
    CHECK(r.out.find("# alpha=") != std::string::npos);

    std::istringstream in(r.out);
    const auto parsed = parse_scan_csv(in);
    const std::uint64_t ladder[] = {20, 40, 80, 160, 320};
    const auto direct = error_scan(ladder, 1000);
    REQUIRE(parsed.rows.size() == direct.rows.size());
    for (std::size_t i = 0; i < parsed.rows.size(); ++i) {
        CHECK(parsed.rows[i].H == direct.rows[i].H);
        CHECK(parsed.rows[i].S == direct.rows[i].S);
        CHECK(parsed.rows[i].E == direct.rows[i].E);
        CHECK(parsed.rows[i].used_in_fit == direct.rows[i].used_in_fit);
    }
    CHECK(parsed.alpha == direct.alpha);
    CHECK(parsed.c.value == direct.c.value);
    CHECK(parsed.c.cutoff == direct.c.cutoff);
    CHECK(parsed.c.tail_bound == direct.c.tail_bound);

    // writing the parsed report again reproduces everything but the timings
    std::ostringstream again;
    write_scan_csv(again, parsed);
    std::istringstream in2(again.str());
    const auto reparsed = parse_scan_csv(in2);
    for (std::size_t i = 0; i < parsed.rows.size(); ++i)
        CHECK(reparsed.rows[i].elapsed_seconds == parsed.rows[i].elapsed_seconds);
}

TEST_CASE("scan csv without a fitted exponent")
{
    ScanReport report;
    report.rows.push_back({10, 90, -1.5, 0.25, true});
    report.c = {1000, 0.78, 1e-4};
    std::ostringstream out;
    write_scan_csv(out, report);
    CHECK(out.str().find("# alpha=nan,c=0.78,P=1000") != std::string::npos);
    std::istringstream in(out.str());
    const auto parsed = parse_scan_csv(in);
    CHECK_FALSE(parsed.alpha.has_value());
    CHECK(parsed.rows[0].elapsed_seconds == 0.25);
}

TEST_CASE("count csv round-trips")
{
    const std::vector<PairCountReport> reports{{5, 20, CountMethod::value_sieve, 0.1},
                                               {5, 20, CountMethod::mobius_identity, 1.0 / 3.0}};
    std::ostringstream out;
    write_count_csv(out, reports);
    std::istringstream in(out.str());
    const auto parsed = parse_count_csv(in);
    REQUIRE(parsed.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(parsed[i].H == reports[i].H);
        CHECK(parsed[i].S == reports[i].S);
        CHECK(parsed[i].method == reports[i].method);
        CHECK(parsed[i].elapsed_seconds == reports[i].elapsed_seconds);
    }
    std::istringstream bad("H,S\n1,2\n");
    CHECK_THROWS(parse_count_csv(bad));
}

TEST_CASE("format_double round-trips")
{
    for (double v : {0.0, 1.0 / 3.0, -1e-300, 6.02214076e23, 0.1 + 0.2})
        CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("usage errors exit 1")
{
    CHECK(invoke({}).code == exit_code::usage);
    CHECK(invoke({"count"}).code == exit_code::usage);
    CHECK(invoke({"count", "--H", "0"}).code == exit_code::usage);
    CHECK(invoke({"count", "--H", "5", "--method", "guess"}).code == exit_code::usage);
    CHECK(invoke({"lambda", "--q", "5", "--n", "1"}).code == exit_code::usage);
    CHECK(invoke({"constant"}).code == exit_code::usage);
    CHECK(invoke({"constant", "--P", "1"}).code == exit_code::usage);
    CHECK(invoke({"scan", "--ladder", "10,5"}).code == exit_code::usage);
    CHECK(invoke({"verify", "--suite", "nope"}).code == exit_code::usage);
    CHECK(invoke({"frobnicate"}).code == exit_code::usage);
    CHECK(invoke({"count", "--H", "3", "--output-format", "xml"}).code == exit_code::usage);
    CHECK(invoke({"--help"}).code == exit_code::ok);
}

TEST_CASE("budget exhaustion exits 2")
{
    const auto r = invoke({"count", "--H", "1000", "--memory-budget", "1000"});
    CHECK(r.code == exit_code::budget);
    CHECK(r.err.find("budget") != std::string::npos);
}

TEST_CASE("environment overrides and flag precedence")
{
    ::setenv("SQF_MEMORY_BUDGET", "1000", 1);
    CHECK(invoke({"count", "--H", "1000", "--method", "value-sieve"}).code == exit_code::budget);
    CHECK(invoke({"count", "--H", "1000", "--method", "value-sieve", "--memory-budget", "100000000"}).code ==
          exit_code::ok);
    ::setenv("SQF_MEMORY_BUDGET", "lots", 1);
    CHECK(invoke({"count", "--H", "10"}).code == exit_code::usage);
    ::unsetenv("SQF_MEMORY_BUDGET");

    ::setenv("SQF_THREADS", "3", 1);
    CHECK(invoke({"count", "--H", "50"}).code == exit_code::ok);
    ::setenv("SQF_THREADS", "0", 1);
    CHECK(invoke({"count", "--H", "50"}).code == exit_code::usage);
    CHECK(invoke({"count", "--H", "50", "--threads", "2"}).code == exit_code::ok);
    ::unsetenv("SQF_THREADS");
}

TEST_CASE("verify runs selected suites")
{
    const auto r = invoke({"verify", "--suite", "lift-law,oracle-equivalence", "--output-format", "json"});
    CHECK(r.code == exit_code::ok);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.size() == 2);
    for (const auto& s : doc)
        CHECK(s["passed"] == true);

    const auto text = invoke({"verify", "--suite", "rho-truncation", "--seed", "99"});
    CHECK(text.code == exit_code::ok);
    CHECK(text.out.rfind("PASS rho-truncation", 0) == 0);
}

TEST_CASE("validate rejects missing fields directly")
{
    RunConfig config;
    config.command = Command::scan;
    CHECK_THROWS_AS(validate(config), UsageError);
    config.H_ladder = {10, 20};
    CHECK_NOTHROW(validate(config));
    config.threads = 0;
    CHECK_THROWS_AS(validate(config), UsageError);
}
