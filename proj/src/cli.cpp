#include "sqf/cli.hpp"

#include "sqf/lambda_sums.hpp"
#include "sqf/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace sqf::cli {

namespace {

using nlohmann::json;

std::string_view to_string(Command c)
{
    switch (c) {
    case Command::count: return "count";
    case Command::lambda: return "lambda";
    case Command::constant: return "constant";
    case Command::scan: return "scan";
    case Command::verify: return "verify";
    }
    return "?";
}

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, sep))
        fields.push_back(field);
    if (!line.empty() && line.back() == sep)
        fields.emplace_back();
    return fields;
}

template <typename T>
T parse_number(const std::string& text)
{
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw std::invalid_argument("malformed number in CSV: '" + text + "'");
    return value;
}

double parse_double(const std::string& text)
{
    if (text == "nan")
        return std::nan("");
    return parse_number<double>(text);
}

CountMethod parse_method(const std::string& text)
{
    if (text == "value-sieve")
        return CountMethod::value_sieve;
    if (text == "mobius-identity")
        return CountMethod::mobius_identity;
    throw std::invalid_argument("unknown counting method '" + text + "'");
}

std::optional<std::uint64_t> env_number(const char* name)
{
    const char* raw = std::getenv(name);
    if (raw == nullptr || *raw == '\0')
        return std::nullopt;
    std::uint64_t v = 0;
    const std::string text(raw);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw UsageError(std::string(name) + " is not a non-negative integer: " + text);
    return v;
}

json to_json(const PairCountReport& r)
{
    return {{"H", r.H}, {"S", r.S}, {"method", std::string(sqf::to_string(r.method))},
            {"elapsed_seconds", r.elapsed_seconds}};
}

json to_json(const EulerProductEstimate& c)
{
    return {{"cutoff", c.cutoff}, {"value", c.value}, {"tail_bound", c.tail_bound}};
}

json to_json(const SuiteResult& s)
{
    return {{"name", s.name},         {"passed", s.passed}, {"checks", s.checks},
            {"failures", s.failures}, {"detail", s.detail}, {"elapsed_seconds", s.elapsed_seconds}};
}

// --- commands --------------------------------------------------------------

int run_count(const RunConfig& config, std::ostream& out)
{
    const CountOptions options{config.threads, config.memory_budget};
    std::vector<PairCountReport> reports;
    if (config.method != MethodChoice::mobius_identity)
        reports.push_back(count_pairs_direct(*config.H, options));
    if (config.method != MethodChoice::value_sieve)
        reports.push_back(count_pairs_mobius(*config.H, options));
    const bool agree = reports.size() < 2 || reports[0].S == reports[1].S;

    switch (config.output_format) {
    case OutputFormat::csv:
        write_count_csv(out, reports);
        break;
    case OutputFormat::json: {
        json arr = json::array();
        for (const auto& r : reports)
            arr.push_back(to_json(r));
        out << arr.dump(2) << "\n";
        break;
    }
    case OutputFormat::text:
        for (const auto& r : reports)
            out << "S(" << r.H << ") = " << r.S << "  [" << sqf::to_string(r.method) << ", "
                << std::fixed << std::setprecision(3) << r.elapsed_seconds << " s]\n";
        if (reports.size() == 2)
            out << (agree ? "methods agree\n" : "METHODS DISAGREE\n");
        break;
    }
    return agree ? exit_code::ok : exit_code::verification;
}

int run_lambda(const RunConfig& config, std::ostream& out)
{
    const std::uint64_t q = *config.q;
    const std::int64_t n = *config.n, m = *config.m;
    std::vector<std::pair<std::string, ComplexValue>> values;
    values.emplace_back("direct", lambda_direct(q, n, m));
    if (q % 2 == 1)
        values.emplace_back("fast-odd", lambda_fast_odd(q, n, m));
    if (q % 8 != 0)
        values.emplace_back("any", lambda_any(q, n, m));
    const auto factors = factorize(static_cast<std::int64_t>(q)).factors();
    if (factors.size() >= 2) {
        std::uint64_t q1 = 1;
        for (unsigned i = 0; i < factors.front().exponent; ++i)
            q1 *= factors.front().prime;
        values.emplace_back("multiplicative", lambda_multiplicative(q1, q / q1, n, m));
    }

    const double tol = lambda_tolerance(q);
    bool agree = true;
    for (const auto& [name, v] : values)
        agree = agree && std::abs(v - values.front().second) <= tol;

    switch (config.output_format) {
    case OutputFormat::csv:
        out << "q,n,m,evaluator,re,im\n";
        for (const auto& [name, v] : values)
            out << q << "," << n << "," << m << "," << name << "," << format_double(v.real()) << ","
                << format_double(v.imag()) << "\n";
        out << "# agree=" << (agree ? "true" : "false") << ",tolerance=" << format_double(tol) << "\n";
        break;
    case OutputFormat::json: {
        json evaluators = json::array();
        for (const auto& [name, v] : values)
            evaluators.push_back({{"name", name}, {"re", v.real()}, {"im", v.imag()}});
        out << json{{"q", q}, {"n", n}, {"m", m}, {"evaluators", evaluators}, {"agree", agree},
                    {"tolerance", tol}}
                   .dump(2)
            << "\n";
        break;
    }
    case OutputFormat::text:
        out << "lambda(" << q << "; " << n << ", " << m << ")\n";
        for (const auto& [name, v] : values)
            out << "  " << std::left << std::setw(16) << name << std::right << std::fixed
                << std::setprecision(9) << v.real() << " " << std::showpos << v.imag() << std::noshowpos
                << "i\n";
        out << (agree ? "evaluators agree" : "EVALUATORS DISAGREE") << " (tolerance "
            << std::scientific << std::setprecision(2) << tol << ")\n";
        break;
    }
    return agree ? exit_code::ok : exit_code::verification;
}

int run_constant(const RunConfig& config, std::ostream& out)
{
    const auto c = constant_c(*config.P);
    switch (config.output_format) {
    case OutputFormat::csv:
        out << "P,value,tail_bound\n"
            << c.cutoff << "," << format_double(c.value) << "," << format_double(c.tail_bound) << "\n";
        break;
    case OutputFormat::json:
        out << to_json(c).dump(2) << "\n";
        break;
    case OutputFormat::text:
        out << "c(P=" << c.cutoff << ") = " << std::fixed << std::setprecision(12) << c.value
            << " +- " << std::scientific << std::setprecision(3) << c.tail_bound << "\n";
        break;
    }
    return exit_code::ok;
}

int run_scan(const RunConfig& config, std::ostream& out)
{
    const std::uint64_t P = config.P.value_or(default_product_cutoff);
    const auto report = error_scan(config.H_ladder, P, {config.threads, config.memory_budget});
    switch (config.output_format) {
    case OutputFormat::csv:
        write_scan_csv(out, report);
        break;
    case OutputFormat::json: {
        json rows = json::array();
        for (const auto& r : report.rows)
            rows.push_back({{"H", r.H}, {"S", r.S}, {"E", r.E}, {"elapsed_seconds", r.elapsed_seconds},
                            {"used_in_fit", r.used_in_fit}});
        json doc{{"rows", rows}, {"c", to_json(report.c)}};
        doc["alpha"] = report.alpha ? json(*report.alpha) : json(nullptr);
        out << doc.dump(2) << "\n";
        break;
    }
    case OutputFormat::text:
        out << std::setw(10) << "H" << std::setw(14) << "S" << std::setw(16) << "E" << std::setw(12)
            << "E/H^(4/3)" << std::setw(10) << "seconds" << "\n";
        for (const auto& r : report.rows) {
            const double H = static_cast<double>(r.H);
            out << std::setw(10) << r.H << std::setw(14) << r.S << std::setw(16) << std::fixed
                << std::setprecision(2) << r.E << std::setw(12) << std::setprecision(4)
                << r.E / std::pow(H, 4.0 / 3.0) << std::setw(10) << std::setprecision(3)
                << r.elapsed_seconds << (r.used_in_fit ? "" : "  (E = 0, excluded)") << "\n";
        }
        out << "c(P=" << report.c.cutoff << ") = " << std::setprecision(12) << report.c.value << " +- "
            << std::scientific << std::setprecision(3) << report.c.tail_bound << "\n";
        if (report.alpha)
            out << "fitted alpha = " << std::fixed << std::setprecision(4) << *report.alpha << "\n";
        else
            out << "fitted alpha unavailable (need >= 4 rows with E != 0)\n";
        break;
    }
    return exit_code::ok;
}

int run_verify(const RunConfig& config, std::ostream& out)
{
    const auto results = run_suites(config.suites, {config.seed, config.threads});
    bool all = true;
    for (const auto& r : results)
        all = all && r.passed;

    switch (config.output_format) {
    case OutputFormat::csv:
        out << "suite,passed,checks,failures,elapsed_seconds,detail\n";
        for (const auto& r : results) {
            std::string detail = r.detail;
            for (char& ch : detail)
                if (ch == '"')
                    ch = '\'';
            out << r.name << "," << (r.passed ? "true" : "false") << "," << r.checks << "," << r.failures
                << "," << format_double(r.elapsed_seconds) << ",\"" << detail << "\"\n";
        }
        break;
    case OutputFormat::json: {
        json arr = json::array();
        for (const auto& r : results)
            arr.push_back(to_json(r));
        out << arr.dump(2) << "\n";
        break;
    }
    case OutputFormat::text:
        for (const auto& r : results)
            out << (r.passed ? "PASS " : "FAIL ") << std::left << std::setw(20) << r.name << std::right
                << " checks=" << r.checks << " failures=" << r.failures << " (" << std::fixed
                << std::setprecision(1) << r.elapsed_seconds << " s)  " << r.detail << "\n";
        break;
    }
    return all ? exit_code::ok : exit_code::verification;
}

}  // namespace

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

void validate(const RunConfig& config)
{
    auto need = [&](bool present, const char* what) {
        if (!present)
            throw UsageError(std::string(to_string(config.command)) + " requires " + what);
    };
    switch (config.command) {
    case Command::count:
        need(config.H.has_value(), "--H");
        if (*config.H == 0)
            throw UsageError("--H must be positive");
        break;
    case Command::lambda:
        need(config.q && config.n && config.m, "--q, --n and --m");
        if (*config.q == 0)
            throw UsageError("--q must be positive");
        break;
    case Command::constant:
        need(config.P.has_value(), "--P");
        if (*config.P < 2)
            throw UsageError("--P must be at least 2");
        break;
    case Command::scan:
        need(!config.H_ladder.empty(), "--ladder");
        for (std::size_t i = 0; i < config.H_ladder.size(); ++i) {
            if (config.H_ladder[i] == 0 || (i > 0 && config.H_ladder[i] <= config.H_ladder[i - 1]))
                throw UsageError("--ladder must be positive and strictly increasing");
        }
        if (config.P && *config.P < 2)
            throw UsageError("--P must be at least 2");
        break;
    case Command::verify: {
        const auto known = suite_names();
        for (const auto& s : config.suites)
            if (std::find(known.begin(), known.end(), s) == known.end())
                throw UsageError("unknown suite '" + s + "'");
        break;
    }
    }
    if (config.threads == 0)
        throw UsageError("--threads must be positive");
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    try {
        validate(config);
        switch (config.command) {
        case Command::count: return run_count(config, out);
        case Command::lambda: return run_lambda(config, out);
        case Command::constant: return run_constant(config, out);
        case Command::scan: return run_scan(config, out);
        case Command::verify: return run_verify(config, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const BudgetExceeded& e) {
        err << "budget exceeded: " << e.what() << "\n";
        return exit_code::budget;
    } catch (const std::bad_alloc&) {
        err << "budget exceeded: out of memory\n";
        return exit_code::budget;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_code::verification;
    }
    return exit_code::usage;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    RunConfig config;
    try {
        if (auto v = env_number("SQF_MEMORY_BUDGET"))
            config.memory_budget = *v;
        if (auto v = env_number("SQF_THREADS"))
            config.threads = static_cast<unsigned>(*v);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    }

    CLI::App app{"Squarefree values of x^2 + y^2 + 1: exact counts, exponential sums, and asymptotics"};
    app.require_subcommand(1);
    app.fallthrough();

    const std::map<std::string, OutputFormat> formats{
        {"csv", OutputFormat::csv}, {"json", OutputFormat::json}, {"text", OutputFormat::text}};
    const std::map<std::string, MethodChoice> methods{{"value-sieve", MethodChoice::value_sieve},
                                                      {"mobius-identity", MethodChoice::mobius_identity},
                                                      {"both", MethodChoice::both}};

    app.add_option("--output-format", config.output_format, "csv, json or text")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    app.add_option("--threads", config.threads, "worker threads (env SQF_THREADS)");
    app.add_option("--memory-budget", config.memory_budget, "sieve memory ceiling in bytes (env SQF_MEMORY_BUDGET)");
    app.add_option("--seed", config.seed, "seed for randomized verification grids");

    std::uint64_t H = 0, q = 0, P = 0;
    std::int64_t n = 0, m = 0;

    auto* count = app.add_subcommand("count", "exact S(H)");
    auto* H_opt = count->add_option("--H", H, "box size");
    count->add_option("--method", config.method, "value-sieve, mobius-identity or both")
        ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));

    auto* lambda = app.add_subcommand("lambda", "lambda(q; n, m) by every applicable evaluator");
    auto* q_opt = lambda->add_option("--q", q, "modulus");
    auto* n_opt = lambda->add_option("--n", n, "first frequency");
    auto* m_opt = lambda->add_option("--m", m, "second frequency");

    auto* constant = app.add_subcommand("constant", "Euler product for c up to a prime cutoff");
    auto* P_opt = constant->add_option("--P", P, "prime cutoff");

    auto* scan = app.add_subcommand("scan", "E(H) = S(H) - c H^2 over a ladder and its fitted exponent");
    scan->add_option("--ladder,--H-ladder", config.H_ladder, "comma-separated H values")->delimiter(',');
    auto* scan_P = scan->add_option("--P", P, "prime cutoff for c (default 100000)");

    auto* verify = app.add_subcommand("verify", "cross-oracle property suites");
    verify->add_option("--suite", config.suites, "run only the named suite(s)")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::usage;
    }

    if (count->parsed()) {
        config.command = Command::count;
        if (H_opt->count())
            config.H = H;
    } else if (lambda->parsed()) {
        config.command = Command::lambda;
        if (q_opt->count())
            config.q = q;
        if (n_opt->count())
            config.n = n;
        if (m_opt->count())
            config.m = m;
    } else if (constant->parsed()) {
        config.command = Command::constant;
        if (P_opt->count())
            config.P = P;
    } else if (scan->parsed()) {
        config.command = Command::scan;
        if (scan_P->count())
            config.P = P;
    } else {
        config.command = Command::verify;
    }
    return run(config, out, err);
}

void write_count_csv(std::ostream& out, std::span<const PairCountReport> reports)
{
    out << "H,S,method,elapsed_seconds\n";
    for (const auto& r : reports)
        out << r.H << "," << r.S << "," << sqf::to_string(r.method) << "," << format_double(r.elapsed_seconds)
            << "\n";
}

std::vector<PairCountReport> parse_count_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != "H,S,method,elapsed_seconds")
        throw std::invalid_argument("count CSV: unexpected header");
    std::vector<PairCountReport> reports;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#')
            continue;
        const auto f = split(line, ',');
        if (f.size() != 4)
            throw std::invalid_argument("count CSV: expected 4 fields in '" + line + "'");
        reports.push_back({parse_number<std::uint64_t>(f[0]), parse_number<std::uint64_t>(f[1]),
                           parse_method(f[2]), parse_double(f[3])});
    }
    return reports;
}

void write_scan_csv(std::ostream& out, const ScanReport& report)
{
    out << "H,S,E,elapsed_seconds\n";
    for (const auto& r : report.rows)
        out << r.H << "," << r.S << "," << format_double(r.E) << "," << format_double(r.elapsed_seconds) << "\n";
    out << "# alpha=" << (report.alpha ? format_double(*report.alpha) : std::string("nan"))
        << ",c=" << format_double(report.c.value) << ",P=" << report.c.cutoff << "\n";
}

ScanReport parse_scan_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line) || line != "H,S,E,elapsed_seconds")
        throw std::invalid_argument("scan CSV: unexpected header");
    ScanReport report;
    bool footer = false;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line.rfind("# ", 0) == 0) {
            std::map<std::string, std::string> kv;
            for (const auto& item : split(line.substr(2), ',')) {
                const auto eq = item.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("scan CSV: malformed footer '" + line + "'");
                kv[item.substr(0, eq)] = item.substr(eq + 1);
            }
            if (!kv.count("alpha") || !kv.count("c") || !kv.count("P"))
                throw std::invalid_argument("scan CSV: footer missing alpha, c or P");
            const double alpha = parse_double(kv["alpha"]);
            if (!std::isnan(alpha))
                report.alpha = alpha;
            report.c.cutoff = parse_number<std::uint64_t>(kv["P"]);
            report.c.value = parse_double(kv["c"]);
            report.c.tail_bound = constant_c(report.c.cutoff).tail_bound;
            footer = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 4)
            throw std::invalid_argument("scan CSV: expected 4 fields in '" + line + "'");
        ScanRow row{parse_number<std::uint64_t>(f[0]), parse_number<std::uint64_t>(f[1]), parse_double(f[2]),
                    parse_double(f[3]), false};
        row.used_in_fit = row.E != 0.0;
        report.rows.push_back(row);
    }
    if (!footer)
        throw std::invalid_argument("scan CSV: missing footer");
    return report;
}

}  // namespace sqf::cli
