#include "wph/wph.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "checks.hpp"
#include "random.hpp"
#include "report.hpp"

struct wph_family {
    wph::WeightedFamily fam;
};

namespace {

thread_local std::string last_error;

wph_status status_of(wph::ErrorCode code)
{
    using wph::ErrorCode;
    switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::EmptyInput:
        return WPH_E_USAGE;
    case ErrorCode::NotWellFormed:
    case ErrorCode::HypothesisViolated:
    case ErrorCode::NoKleinHypersurface:
    case ErrorCode::EmptySystem:
        return WPH_E_HYPOTHESIS;
    case ErrorCode::BudgetExceeded:
        return WPH_E_BUDGET;
    case ErrorCode::NotNormalizable:
        return WPH_E_NOT_NORMALIZABLE;
    case ErrorCode::NotAPrimePower:
        return WPH_E_NOT_PRIME_POWER;
    case ErrorCode::CoefficientCollision:
    case ErrorCode::PrimalityUndecided:
        return WPH_E_INTERNAL;
    }
    return WPH_E_INTERNAL;
}

wph_status set_error(wph_status status, const std::string& message)
{
    last_error = message;
    return status;
}

// Runs body, translating exceptions into status codes.
template <class F>
wph_status guarded(F&& body)
{
    last_error.clear();
    try {
        return body();
    } catch (const wph::Error& e) {
        return set_error(status_of(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(WPH_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(WPH_E_INTERNAL, e.what());
    }
}

char* duplicate(const std::string& s)
{
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

wph::ReportOptions to_options(const wph_options* opts)
{
    wph_options defaults;
    wph_options_default(&defaults);
    const auto& o = opts ? *opts : defaults;
    wph::ReportOptions r;
    r.seed = o.seed;
    r.budgets.oracle_classes = o.oracle_budget;
    r.budgets.monomials = o.monomial_budget;
    r.budgets.cycles = o.cycle_budget;
    r.max_order = o.max_order;
    r.all_chains = o.all_chains != 0;
    r.explain = o.explain != 0;
    r.timings = o.timings != 0;
    return r;
}

int indent_of(const wph_options* opts)
{
    return opts ? opts->indent : 2;
}

wph_outcome outcome_of(wph::ReportOutcome o)
{
    switch (o) {
    case wph::ReportOutcome::Ok: return WPH_OUTCOME_OK;
    case wph::ReportOutcome::HypothesisViolated: return WPH_OUTCOME_HYPOTHESIS;
    case wph::ReportOutcome::BudgetExhausted: return WPH_OUTCOME_BUDGET;
    }
    return WPH_OUTCOME_OK;
}

} // namespace

extern "C" {

void wph_options_default(wph_options* opts)
{
    if (!opts)
        return;
    const wph::ReportOptions r;
    opts->seed = wph::default_seed;
    opts->oracle_budget = r.budgets.oracle_classes;
    opts->monomial_budget = r.budgets.monomials;
    opts->cycle_budget = r.budgets.cycles;
    opts->max_order = 0;
    opts->all_chains = 0;
    opts->explain = 0;
    opts->timings = 0;
    opts->indent = 2;
}

wph_status wph_family_new(const int64_t* weights, size_t count, int64_t degree, wph_family** out)
{
    return guarded([&] {
        if (!out || (!weights && count))
            return set_error(WPH_E_USAGE, "null argument");
        *out = nullptr;
        try {
            wph::WeightedFamily fam(std::vector<std::int64_t>(weights, weights + count), degree);
            *out = new wph_family{std::move(fam)};
        } catch (const wph::Error& e) {
            if (e.code() == wph::ErrorCode::InvalidArgument)
                return set_error(WPH_E_HYPOTHESIS, e.what());
            throw;
        }
        return WPH_OK;
    });
}

wph_status wph_family_parse(const char* text, wph_family** out)
{
    return guarded([&] {
        if (!text || !out)
            return set_error(WPH_E_USAGE, "null argument");
        *out = nullptr;
        std::pair<std::vector<std::int64_t>, std::int64_t> parts;
        try {
            parts = wph::split_family_text(text);
        } catch (const wph::Error& e) {
            return set_error(WPH_E_PARSE, e.what());
        }
        return wph_family_new(parts.first.data(), parts.first.size(), parts.second, out);
    });
}

void wph_family_free(wph_family* fam)
{
    delete fam;
}

size_t wph_family_size(const wph_family* fam)
{
    return fam ? fam->fam.size() : 0;
}

int64_t wph_family_weight(const wph_family* fam, size_t i)
{
    if (!fam || i >= fam->fam.size())
        return 0;
    return fam->fam.weight(i);
}

int64_t wph_family_degree(const wph_family* fam)
{
    return fam ? fam->fam.degree() : 0;
}

int wph_family_well_formed(const wph_family* fam)
{
    return fam && wph::well_formed(fam->fam);
}

int wph_family_mm_hypothesis(const wph_family* fam)
{
    return fam && wph::mm_hypothesis(fam->fam);
}

int wph_family_lin_finite(const wph_family* fam)
{
    return fam && wph::lin_finite(fam->fam);
}

int wph_family_linear_cone(const wph_family* fam)
{
    return fam && wph::is_linear_cone(fam->fam);
}

int wph_family_quasismooth_exists(const wph_family* fam)
{
    int result = -1;
    const auto status = guarded([&] {
        if (!fam)
            return set_error(WPH_E_USAGE, "null family");
        result = wph::exists_quasismooth(fam->fam) ? 1 : 0;
        return WPH_OK;
    });
    return status == WPH_OK ? result : -1;
}

wph_status wph_family_normalize(const wph_family* fam, wph_family** out)
{
    return guarded([&] {
        if (!fam || !out)
            return set_error(WPH_E_USAGE, "null argument");
        *out = new wph_family{wph::well_form_normalize(fam->fam)};
        return WPH_OK;
    });
}

wph_status wph_orders_report(const wph_family* fam, const wph_options* opts, char** json,
                             wph_outcome* outcome)
{
    return guarded([&] {
        if (!fam || !json)
            return set_error(WPH_E_USAGE, "null argument");
        const auto report = wph::orders_report(fam->fam, to_options(opts));
        *json = duplicate(report.json.dump(indent_of(opts)));
        if (outcome)
            *outcome = outcome_of(report.outcome);
        return WPH_OK;
    });
}

wph_status wph_check_report(const wph_family* fam, uint64_t q, const wph_options* opts,
                            char** json, wph_outcome* outcome)
{
    return guarded([&] {
        if (!fam || !json)
            return set_error(WPH_E_USAGE, "null argument");
        const auto report = wph::check_report(fam->fam, q, to_options(opts));
        *json = duplicate(report.json.dump(indent_of(opts)));
        if (outcome)
            *outcome = outcome_of(report.outcome);
        return WPH_OK;
    });
}

wph_status wph_klein_report(const wph_family* fam, const wph_options* opts, char** json)
{
    return guarded([&] {
        if (!fam || !json)
            return set_error(WPH_E_USAGE, "null argument");
        const auto report = wph::klein_report(fam->fam, to_options(opts));
        *json = duplicate(report.json.dump(indent_of(opts)));
        return WPH_OK;
    });
}

void wph_string_free(char* s)
{
    std::free(s);
}

int wph_is_prime(uint64_t n)
{
    return wph::is_prime(n) ? 1 : 0;
}

const char* wph_last_error(void)
{
    return last_error.c_str();
}

const char* wph_version(void)
{
    return wph::version_string;
}

const char* wph_status_string(wph_status status)
{
    switch (status) {
    case WPH_OK: return "ok";
    case WPH_E_USAGE: return "usage error";
    case WPH_E_PARSE: return "parse error";
    case WPH_E_HYPOTHESIS: return "hypothesis violated";
    case WPH_E_BUDGET: return "budget exceeded";
    case WPH_E_NOT_NORMALIZABLE: return "not normalizable";
    case WPH_E_NOT_PRIME_POWER: return "not a prime power";
    case WPH_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

size_t wph_suite_size(void)
{
    return wph::acceptance_suite().size();
}

const char* wph_suite_name(size_t index)
{
    const auto& suite = wph::acceptance_suite();
    return index < suite.size() ? suite[index].name.c_str() : nullptr;
}

const char* wph_suite_description(size_t index)
{
    const auto& suite = wph::acceptance_suite();
    return index < suite.size() ? suite[index].description.c_str() : nullptr;
}

wph_status wph_suite_run(size_t index, int inject, int* passed, double* seconds, char** detail)
{
    return guarded([&] {
        const auto& suite = wph::acceptance_suite();
        if (index >= suite.size() || !passed)
            return set_error(WPH_E_USAGE, "bad suite index or null argument");
        const auto result = wph::run_check(suite[index], inject != 0);
        *passed = result.passed ? 1 : 0;
        if (seconds)
            *seconds = result.seconds;
        if (detail)
            *detail = duplicate(result.detail);
        return WPH_OK;
    });
}

} // extern "C"
