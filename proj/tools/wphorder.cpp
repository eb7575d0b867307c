// wphorder: command-line front end over the C interface.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wph/wph.h"

namespace {

namespace fs = std::filesystem;

enum Exit { exit_ok = 0, exit_hypothesis = 1, exit_budget = 2, exit_acceptance = 3, exit_usage = 64 };

struct Range {
    std::int64_t lo = 0;
    std::int64_t hi = -1;
};

// "7" or "3..12"
std::optional<Range> parse_range(const std::string& text)
{
    try {
        const auto dots = text.find("..");
        std::size_t used = 0;
        if (dots == std::string::npos) {
            const auto v = std::stoll(text, &used);
            if (used != text.size())
                return std::nullopt;
            return Range{v, v};
        }
        const auto lo = std::stoll(text.substr(0, dots), &used);
        if (used != dots)
            return std::nullopt;
        const auto rest = text.substr(dots + 2);
        const auto hi = std::stoll(rest, &used);
        if (used != rest.size())
            return std::nullopt;
        return Range{lo, hi};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

std::uint64_t env_seed()
{
    wph_options defaults;
    wph_options_default(&defaults);
    if (const char* s = std::getenv("WPH_SEED")) {
        try {
            return std::stoull(s);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring unparsable WPH_SEED\n";
        }
    }
    return defaults.seed;
}

struct CommonArgs {
    std::vector<std::int64_t> weights;
    std::int64_t degree = 0;
    std::string family;
    bool normalize = false;
    wph_options opts{};
    bool compact = false;

    void attach(CLI::App* cmd, bool with_family = true)
    {
        wph_options_default(&opts);
        opts.seed = env_seed();
        if (with_family) {
            cmd->add_option("--weights,-w", weights, "weights a_0,...,a_{n+1}")->delimiter(',');
            cmd->add_option("--degree,-d", degree, "degree d");
            cmd->add_option("--family", family, "family text, e.g. \"3,7,2,4,5 d=37\"");
            cmd->add_flag("--normalize", normalize, "well-form the family first");
        }
        cmd->add_option("--seed", opts.seed, "random seed (default: $WPH_SEED or built-in)");
        cmd->add_option("--oracle-budget", opts.oracle_budget, "signature classes per oracle run");
        cmd->add_option("--monomial-budget", opts.monomial_budget, "monomials per enumeration");
        cmd->add_option("--cycle-budget", opts.cycle_budget, "cycles per enumeration");
        cmd->add_flag("--timings", opts.timings, "include wall-clock timings");
        cmd->add_flag("--compact", compact, "one-line JSON");
    }

    void finish()
    {
        opts.indent = compact ? -1 : 2;
    }
};

// Returns null after printing a message; exit code in `code`.
wph_family* load_family(const CommonArgs& args, int& code)
{
    wph_family* fam = nullptr;
    wph_status st;
    if (!args.family.empty()) {
        st = wph_family_parse(args.family.c_str(), &fam);
    } else {
        if (args.weights.empty() || args.degree == 0) {
            std::cerr << "error: give --weights and --degree, or --family\n";
            code = exit_usage;
            return nullptr;
        }
        st = wph_family_new(args.weights.data(), args.weights.size(), args.degree, &fam);
    }
    if (st != WPH_OK) {
        std::cerr << "error: " << wph_status_string(st) << ": " << wph_last_error() << "\n";
        code = st == WPH_E_PARSE ? exit_usage : exit_hypothesis;
        return nullptr;
    }
    if (args.normalize) {
        wph_family* normal = nullptr;
        st = wph_family_normalize(fam, &normal);
        wph_family_free(fam);
        if (st != WPH_OK) {
            std::cerr << "error: " << wph_status_string(st) << ": " << wph_last_error() << "\n";
            code = exit_hypothesis;
            return nullptr;
        }
        fam = normal;
    }
    return fam;
}

int exit_for(wph_outcome outcome)
{
    switch (outcome) {
    case WPH_OUTCOME_OK: return exit_ok;
    case WPH_OUTCOME_HYPOTHESIS: return exit_hypothesis;
    case WPH_OUTCOME_BUDGET: return exit_budget;
    }
    return exit_ok;
}

int report_failure(wph_status st)
{
    std::cerr << "error: " << wph_status_string(st) << ": " << wph_last_error() << "\n";
    switch (st) {
    case WPH_E_HYPOTHESIS: return exit_hypothesis;
    case WPH_E_BUDGET: return exit_budget;
    case WPH_E_USAGE:
    case WPH_E_PARSE:
    case WPH_E_NOT_PRIME_POWER: return exit_usage;
    default: return exit_hypothesis;
    }
}

int print_and_free(char* json)
{
    std::fwrite(json, 1, std::strlen(json), stdout);
    std::fputc('\n', stdout);
    wph_string_free(json);
    return std::fflush(stdout) == 0 ? 0 : 1;
}

int cmd_orders(CommonArgs& args)
{
    int code = 0;
    wph_family* fam = load_family(args, code);
    if (!fam)
        return code;
    char* json = nullptr;
    wph_outcome outcome = WPH_OUTCOME_OK;
    const auto st = wph_orders_report(fam, &args.opts, &json, &outcome);
    wph_family_free(fam);
    if (st != WPH_OK)
        return report_failure(st);
    print_and_free(json);
    return exit_for(outcome);
}

int cmd_check(CommonArgs& args, std::uint64_t order)
{
    int code = 0;
    wph_family* fam = load_family(args, code);
    if (!fam)
        return code;
    char* json = nullptr;
    wph_outcome outcome = WPH_OUTCOME_OK;
    const auto st = wph_check_report(fam, order, &args.opts, &json, &outcome);
    wph_family_free(fam);
    if (st != WPH_OK)
        return report_failure(st);
    print_and_free(json);
    return exit_for(outcome);
}

int cmd_klein(CommonArgs& args)
{
    int code = 0;
    wph_family* fam = load_family(args, code);
    if (!fam)
        return code;
    char* json = nullptr;
    const auto st = wph_klein_report(fam, &args.opts, &json);
    wph_family_free(fam);
    if (st != WPH_OK)
        return report_failure(st);
    print_and_free(json);
    return exit_ok;
}

// ------------------------------------------------------------------ scan

struct ScanArgs {
    std::string dim;
    std::int64_t max_weight = 0;
    std::int64_t max_degree = 0;
    std::string degree;
    bool divides_d = false;
    bool coprime = false;
    std::string output;
    std::string cursor;
    unsigned jobs = 1;
    std::size_t chunk = 64;
};

struct FamilySpec {
    std::vector<std::int64_t> weights;
    std::int64_t degree;
};

bool scan_accepts(const FamilySpec& spec, const ScanArgs& args)
{
    wph_family* fam = nullptr;
    if (wph_family_new(spec.weights.data(), spec.weights.size(), spec.degree, &fam) != WPH_OK)
        return false; // gcd of the weights is not 1
    bool ok = wph_family_well_formed(fam) && wph_family_lin_finite(fam)
              && !wph_family_linear_cone(fam) && spec.degree >= 3
              && (spec.weights.size() == 3 || wph_family_mm_hypothesis(fam));
    for (auto w : spec.weights) {
        if (args.divides_d && spec.degree % w != 0)
            ok = false;
        if (args.coprime && std::gcd(w, spec.degree) != 1)
            ok = false;
    }
    wph_family_free(fam);
    return ok;
}

// Families in (n, a, d) order; weight tuples are nondecreasing.
std::vector<FamilySpec> scan_families(const ScanArgs& args, Range dims, Range degrees)
{
    std::vector<FamilySpec> out;
    for (auto n = dims.lo; n <= dims.hi; ++n) {
        const auto vars = static_cast<std::size_t>(n + 2);
        std::vector<std::int64_t> a(vars, 1);
        std::function<void(std::size_t, std::int64_t)> fill = [&](std::size_t i, std::int64_t lo) {
            if (i == vars) {
                for (auto d = degrees.lo; d <= degrees.hi; ++d) {
                    FamilySpec spec{a, d};
                    if (scan_accepts(spec, args))
                        out.push_back(std::move(spec));
                }
                return;
            }
            for (auto w = lo; w <= args.max_weight; ++w) {
                a[i] = w;
                fill(i + 1, w);
            }
        };
        fill(0, 1);
    }
    return out;
}

struct Cursor {
    std::size_t records = 0;
    std::uint64_t offset = 0;
};

std::optional<Cursor> read_cursor(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        return std::nullopt;
    try {
        const auto j = nlohmann::json::parse(in);
        return Cursor{j.at("records").get<std::size_t>(), j.at("offset").get<std::uint64_t>()};
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

bool write_atomically(const std::string& path, const std::string& content)
{
    const auto tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << content;
        out.flush();
        if (!out)
            return false;
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    return !ec;
}

std::string scan_record(const FamilySpec& spec, const wph_options& opts, bool& budget_hit)
{
    wph_family* fam = nullptr;
    wph_family_new(spec.weights.data(), spec.weights.size(), spec.degree, &fam);
    char* json = nullptr;
    wph_outcome outcome = WPH_OUTCOME_OK;
    const auto st = wph_orders_report(fam, &opts, &json, &outcome);
    wph_family_free(fam);
    if (st != WPH_OK) {
        budget_hit = true;
        nlohmann::ordered_json err;
        err["weights"] = spec.weights;
        err["degree"] = spec.degree;
        err["error"] = std::string(wph_status_string(st)) + ": " + wph_last_error();
        return err.dump();
    }
    std::string line(json);
    wph_string_free(json);
    budget_hit = outcome == WPH_OUTCOME_BUDGET;
    return line;
}

int cmd_scan(const ScanArgs& args, CommonArgs& common)
{
    const auto dims = parse_range(args.dim);
    if (!dims || dims->lo < 1 || dims->hi < dims->lo || dims->hi > 14) {
        std::cerr << "error: --dim takes N or a..b with 1 <= a <= b <= 14\n";
        return exit_usage;
    }
    Range degrees{3, args.max_degree};
    if (!args.degree.empty()) {
        const auto r = parse_range(args.degree);
        if (!r) {
            std::cerr << "error: --degree takes D or a..b\n";
            return exit_usage;
        }
        degrees = *r;
    } else if (args.max_degree <= 0) {
        std::cerr << "error: give --max-degree or --degree\n";
        return exit_usage;
    }
    if (args.max_weight < 1) {
        std::cerr << "error: --max-weight is required and must be positive\n";
        return exit_usage;
    }
    if (!args.cursor.empty() && args.output.empty()) {
        std::cerr << "error: --cursor needs --output\n";
        return exit_usage;
    }
    common.opts.indent = -1;

    const auto families = scan_families(args, *dims, degrees);

    Cursor start;
    if (!args.cursor.empty()) {
        if (auto c = read_cursor(args.cursor))
            start = *c;
    }
    if (start.records > families.size())
        start = Cursor{};

    std::FILE* out = stdout;
    std::string final_path, write_path;
    if (!args.output.empty()) {
        final_path = args.output;
        if (args.cursor.empty()) {
            write_path = final_path + ".partial";
            out = std::fopen(write_path.c_str(), "wb");
        } else {
            write_path = final_path;
            if (start.records > 0 && fs::exists(final_path)) {
                std::error_code ec;
                fs::resize_file(final_path, start.offset, ec);
                if (ec) {
                    std::cerr << "error: cannot truncate " << final_path << "\n";
                    return exit_usage;
                }
                out = std::fopen(final_path.c_str(), "ab");
            } else {
                start = Cursor{};
                out = std::fopen(final_path.c_str(), "wb");
            }
        }
        if (!out) {
            std::cerr << "error: cannot open " << write_path << "\n";
            return exit_usage;
        }
    }

    const unsigned jobs = std::max(1u, args.jobs);
    bool any_budget = false;
    Cursor cursor = start;
    for (std::size_t begin = start.records; begin < families.size(); begin += args.chunk) {
        const auto end = std::min(families.size(), begin + std::max<std::size_t>(1, args.chunk));
        std::vector<std::string> lines(end - begin);
        std::vector<char> budget(end - begin, 0);
        std::atomic<std::size_t> next{begin};
        auto worker = [&] {
            for (auto k = next++; k < end; k = next++) {
                bool hit = false;
                lines[k - begin] = scan_record(families[k], common.opts, hit);
                budget[k - begin] = hit;
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 1; t < jobs; ++t)
            pool.emplace_back(worker);
        worker();
        for (auto& t : pool)
            t.join();
        for (std::size_t k = 0; k < lines.size(); ++k) {
            std::fputs(lines[k].c_str(), out);
            std::fputc('\n', out);
            cursor.offset += lines[k].size() + 1;
            any_budget = any_budget || budget[k];
        }
        std::fflush(out);
        cursor.records = end;
        if (!args.cursor.empty()) {
            nlohmann::ordered_json c;
            c["records"] = cursor.records;
            c["offset"] = cursor.offset;
            c["total"] = families.size();
            if (!write_atomically(args.cursor, c.dump() + "\n")) {
                std::cerr << "error: cannot write cursor " << args.cursor << "\n";
                return exit_usage;
            }
        }
    }
    if (out != stdout) {
        std::fclose(out);
        if (args.cursor.empty()) {
            std::error_code ec;
            fs::rename(write_path, final_path, ec);
            if (ec) {
                std::cerr << "error: cannot rename " << write_path << "\n";
                return exit_usage;
            }
        }
    }
    return any_budget ? exit_budget : exit_ok;
}

// ------------------------------------------------------------------ suite

int cmd_paper_examples(bool list, const std::vector<std::string>& only,
                       const std::vector<std::string>& inject)
{
    const auto size = wph_suite_size();
    auto known = [&](const std::string& name) {
        for (std::size_t i = 0; i < size; ++i) {
            if (name == wph_suite_name(i))
                return true;
        }
        return false;
    };
    for (const auto& name : only) {
        if (!known(name)) {
            std::cerr << "error: unknown check '" << name << "'\n";
            return exit_usage;
        }
    }
    for (const auto& name : inject) {
        if (!known(name)) {
            std::cerr << "error: unknown check '" << name << "'\n";
            return exit_usage;
        }
    }
    if (list) {
        for (std::size_t i = 0; i < size; ++i)
            std::cout << wph_suite_name(i) << "  " << wph_suite_description(i) << "\n";
        return exit_ok;
    }
    auto contains = [](const std::vector<std::string>& v, const std::string& s) {
        return std::find(v.begin(), v.end(), s) != v.end();
    };
    int failures = 0, ran = 0;
    for (std::size_t i = 0; i < size; ++i) {
        const std::string name = wph_suite_name(i);
        if (!only.empty() && !contains(only, name))
            continue;
        int passed = 0;
        double seconds = 0;
        char* detail = nullptr;
        const auto st = wph_suite_run(i, contains(inject, name) ? 1 : 0, &passed, &seconds, &detail);
        if (st != WPH_OK)
            return report_failure(st);
        ++ran;
        failures += passed ? 0 : 1;
        std::printf("[%s] %-22s %8.2fs  %s\n", passed ? "PASS" : "FAIL", name.c_str(), seconds,
                    detail ? detail : "");
        std::fflush(stdout);
        wph_string_free(detail);
    }
    std::printf("%d/%d checks passed\n", ran - failures, ran);
    return failures ? exit_acceptance : exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Prime-power automorphism orders of weighted hypersurfaces"};
    app.set_version_flag("--version", std::string(wph_version()));
    app.require_subcommand(1);

    CommonArgs orders_args, check_args, klein_args, scan_common;

    auto* orders = app.add_subcommand("orders", "sweep prime-power orders up to a bound");
    orders_args.attach(orders);
    orders->add_option("--max-order", orders_args.opts.max_order,
                       "largest q (default: from the bounds, capped at 4096)");

    std::uint64_t order = 0;
    auto* check = app.add_subcommand("check", "detailed report for one order q");
    check_args.attach(check);
    check->add_option("--order,-q", order, "prime power q")->required();
    check->add_flag("--explain", check_args.opts.explain, "off-chain constraints");
    check->add_flag("--all", check_args.opts.all_chains, "every qualifying chain");

    auto* klein = app.add_subcommand("klein", "Klein hypersurface analysis");
    klein_args.attach(klein);

    ScanArgs scan_args;
    auto* scan = app.add_subcommand("scan", "JSON-lines sweep over a range of families");
    scan_common.attach(scan, false);
    scan->add_option("--dim", scan_args.dim, "dimension n, or a..b")->required();
    scan->add_option("--max-weight", scan_args.max_weight, "largest weight")->required();
    auto* max_degree = scan->add_option("--max-degree", scan_args.max_degree, "degrees 3..D");
    auto* degree = scan->add_option("--degree", scan_args.degree, "degree D or a..b");
    max_degree->excludes(degree);
    scan->add_flag("--divides-d", scan_args.divides_d, "only families with every a_i | d");
    scan->add_flag("--coprime", scan_args.coprime, "only families with gcd(a_i, d) = 1");
    scan->add_option("--output,-o", scan_args.output, "output file (default: stdout)");
    scan->add_option("--cursor", scan_args.cursor, "resume file");
    scan->add_option("--jobs,-j", scan_args.jobs, "worker threads");
    scan->add_option("--chunk", scan_args.chunk, "records per flushed chunk")->check(CLI::PositiveNumber);
    scan->add_option("--max-order", scan_common.opts.max_order, "largest q per family");

    bool list = false;
    std::vector<std::string> only, inject;
    auto* paper = app.add_subcommand("paper-examples", "run the acceptance suite");
    paper->add_flag("--list", list, "list checks without running them");
    paper->add_option("--only", only, "run only these checks");
    paper->add_option("--inject", inject, "compare these checks against a wrong expected value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }

    if (*orders) {
        orders_args.finish();
        return cmd_orders(orders_args);
    }
    if (*check) {
        check_args.finish();
        return cmd_check(check_args, order);
    }
    if (*klein) {
        klein_args.finish();
        return cmd_klein(klein_args);
    }
    if (*scan)
        return cmd_scan(scan_args, scan_common);
    if (*paper)
        return cmd_paper_examples(list, only, inject);
    return exit_usage;
}
