#ifndef WPH_REPORT_HPP
#define WPH_REPORT_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "klein.hpp"
#include "orders.hpp"

namespace wph {

using Json = nlohmann::ordered_json;

inline constexpr const char* version_string = "1.0.0";

struct ReportOptions {
    std::uint64_t seed = 0;
    Budgets budgets;
    std::uint64_t max_order = 0;       // 0: derived from the bounds
    std::uint64_t max_order_cap = 4096; // applies to the derived value only
    bool all_chains = false;
    bool explain = false;
    bool timings = false;
    std::uint64_t falsifier_budget = 20'000;
};

/// Overall outcome of a report, used for exit codes.
enum class ReportOutcome { Ok, HypothesisViolated, BudgetExhausted };

struct Report {
    Json json;
    ReportOutcome outcome = ReportOutcome::Ok;
};

Json family_json(const WeightedFamily& fam);
Json verdict_json(const OrderVerdict& v);
Json chain_json(const CycleChain& chain);
Json klein_json(const WeightedFamily& fam, bool with_eigenspace,
                std::uint64_t monomial_budget = default_monomial_budget);

Report orders_report(const WeightedFamily& fam, const ReportOptions& opts);
Report check_report(const WeightedFamily& fam, std::uint64_t q, const ReportOptions& opts);
Report klein_report(const WeightedFamily& fam, const ReportOptions& opts);

/// Primes used by the falsifier in reports and acceptance checks.
inline constexpr std::uint64_t falsifier_primes[] = {101, 499, 997};

} // namespace wph

#endif
