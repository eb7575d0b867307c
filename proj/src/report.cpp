#include "report.hpp"

#include <chrono>

namespace wph {

namespace {

Json monomial_list(const MonomialSystem& system)
{
    Json out = Json::array();
    for (const auto& m : system.monomials())
        out.push_back(m.to_string());
    return out;
}

Json signature_json(const PartialSignature& sig)
{
    Json out = Json::array();
    for (const auto& s : sig.sigma) {
        if (s)
            out.push_back(*s);
        else
            out.push_back("*");
    }
    return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point since)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since)
        .count();
}

// Distinct, reproducible coefficient seeds per order.
std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t salt)
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Json bounds_json(const WeightedFamily& fam)
{
    Json out;
    out["divides_d"] = nullptr;
    out["coprime"] = nullptr;
    if (fam.all_weights_divide_degree())
        out["divides_d"] = bound_divides_d(fam).bound_string();
    if (fam.all_weights_coprime_to_degree() && fam.degree() > fam.max_weight())
        out["coprime"] = bound_coprime(fam).bound_string();
    Json mult = Json::object();
    std::map<std::int64_t, int> counts;
    for (auto w : fam.weights())
        ++counts[w];
    for (const auto& [w, c] : counts)
        mult[std::to_string(w)] = c;
    out["multiplicities"] = mult;
    out["max_weight"] = fam.max_weight();
    return out;
}

ReportOutcome outcome_of(const std::vector<OrderVerdict>& verdicts)
{
    for (const auto& v : verdicts) {
        if (v.status == VerdictStatus::HypothesisViolated)
            return ReportOutcome::HypothesisViolated;
    }
    for (const auto& v : verdicts) {
        if (v.status == VerdictStatus::Unresolved)
            return ReportOutcome::BudgetExhausted;
    }
    return ReportOutcome::Ok;
}

Json header(const char* command, const WeightedFamily& fam)
{
    Json out;
    out["version"] = version_string;
    out["command"] = command;
    const auto family = family_json(fam);
    for (const auto& [k, v] : family.items())
        out[k] = v;
    return out;
}

} // namespace

Json family_json(const WeightedFamily& fam)
{
    Json out;
    out["weights"] = fam.weights();
    out["degree"] = fam.degree();
    out["dimension"] = fam.dimension();
    Json h;
    const bool wf = well_formed(fam);
    h["well_formed"] = wf;
    h["mm_hypothesis"] = mm_hypothesis(fam);
    h["order_theory_applies"] = order_theory_applies(fam);
    h["lin_finite"] = lin_finite(fam);
    h["linear_cone"] = is_linear_cone(fam);
    h["quasismooth_exists"] = wf ? Json(exists_quasismooth(fam)) : Json(nullptr);
    h["weights_divide_degree"] = fam.all_weights_divide_degree();
    h["weights_coprime_to_degree"] = fam.all_weights_coprime_to_degree();
    out["hypotheses"] = h;
    return out;
}

Json chain_json(const CycleChain& chain)
{
    Json out;
    out["indices"] = chain.indices;
    out["exponents"] = chain.exponents;
    out["ell"] = chain.ell();
    out["product"] = chain.product().get_str();
    return out;
}

Json verdict_json(const OrderVerdict& v)
{
    Json out;
    out["q"] = v.q.q;
    out["p"] = v.q.p;
    out["r"] = v.q.r;
    out["status"] = status_name(v.status);
    out["provenance"] = v.provenance;
    out["chain"] = v.chain ? chain_json(*v.chain) : Json(nullptr);
    out["signature"] = v.signature ? signature_json(*v.signature) : Json(nullptr);
    out["eigenvalue"] = v.eigenvalue ? Json(*v.eigenvalue) : Json(nullptr);
    out["witness_monomials"] = v.witness ? monomial_list(*v.witness) : Json(nullptr);
    out["notes"] = v.notes;
    return out;
}

Json klein_json(const WeightedFamily& fam, bool with_eigenspace, std::uint64_t monomial_budget)
{
    Json out;
    const auto data = klein_exists(fam);
    out["exists"] = data.has_value();
    if (!data)
        return out;
    out["ordering"] = data->cycle.indices;
    out["exponents"] = data->cycle.exponents;
    out["monomials"] = monomial_list(data->monomials());
    out["cycle_count"] = data->cycle_count;
    out["R"] = data->R.get_str();
    out["quasismooth"] = klein_quasismooth(fam);
    out["subset_criterion"] = general_member_quasismooth(data->monomials());
    out["max_prime"] = nullptr;
    out["max_prime_candidate"] = data->max_prime_candidate
                                     ? Json(data->max_prime_candidate->get_str())
                                     : Json(nullptr);
    try {
        const auto mp = klein_max_prime(fam);
        if (mp.prime)
            out["max_prime"] = *mp.prime;
        out["max_prime_reason"] = mp.reason.empty() ? Json(nullptr) : Json(mp.reason);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::HypothesisViolated)
            throw;
        out["max_prime_reason"] = "hypothesis-violated";
    }
    if (with_eigenspace && out["max_prime"].is_number()) {
        const auto check = klein_eigenspace_check(fam, monomial_budget);
        Json e;
        e["applicable"] = check.applicable;
        if (check.applicable) {
            e["p"] = check.p;
            e["signature"] = signature_json(check.signature);
            e["surviving"] = check.surviving;
            e["total"] = check.total;
            e["monomials"] = monomial_list(*check.survivors);
            e["equals_klein_set"] = check.equals_klein_set;
        } else {
            e["reason"] = check.reason;
        }
        out["eigenspace"] = e;
    }
    return out;
}

Report orders_report(const WeightedFamily& fam, const ReportOptions& opts)
{
    const auto start = std::chrono::steady_clock::now();
    Report report;
    auto& j = report.json;
    j = header("orders", fam);
    j["bounds"] = bounds_json(fam);

    const auto problems = order_hypothesis_violations(fam);
    std::uint64_t max_q = opts.max_order;
    if (max_q == 0 && problems.empty())
        max_q = default_max_order(fam, opts.max_order_cap, opts.budgets);
    j["max_order"] = max_q;

    std::vector<OrderVerdict> verdicts;
    if (problems.empty())
        verdicts = admissible_orders(fam, max_q, opts.budgets);
    Json list = Json::array(), certified = Json::array();
    for (const auto& v : verdicts) {
        list.push_back(verdict_json(v));
        if (v.certified())
            certified.push_back(v.q.q);
    }
    j["verdicts"] = list;
    j["certified"] = certified;
    j["hypothesis_violations"] = problems;
    j["klein"] = klein_json(fam, false, opts.budgets.monomials);
    j["seed"] = opts.seed;
    report.outcome = problems.empty() ? outcome_of(verdicts) : ReportOutcome::HypothesisViolated;
    if (opts.timings)
        j["timings"] = {{"total_ms", elapsed_ms(start)}};
    return report;
}

Report check_report(const WeightedFamily& fam, std::uint64_t q, const ReportOptions& opts)
{
    const auto start = std::chrono::steady_clock::now();
    const auto order = prime_power_decompose(q);
    Report report;
    auto& j = report.json;
    j = header("check", fam);
    j["bounds"] = bounds_json(fam);
    j["max_order"] = q;

    const auto problems = order_hypothesis_violations(fam);
    OrderVerdict v = decide_order(fam, order, opts.budgets);
    j["verdicts"] = Json::array({verdict_json(v)});
    j["certified"] = v.certified() ? Json::array({q}) : Json::array();
    j["hypothesis_violations"] = problems;
    report.outcome = outcome_of({v});

    if (problems.empty()) {
        bool chain_hypotheses = true;
        try {
            chain_digraph(fam, order);
        } catch (const Error&) {
            chain_hypotheses = false;
        }
        j["chain_hypotheses"] = chain_hypotheses;
        if (chain_hypotheses && (opts.all_chains || opts.explain)) {
            try {
                const auto chains = qualifying_chains(fam, order, opts.budgets.cycles);
                if (opts.all_chains) {
                    Json arr = Json::array();
                    for (const auto& c : chains) {
                        Json cj = chain_json(c);
                        cj["signature"] = signature_json(signature_from_chain(fam, c, q));
                        arr.push_back(cj);
                    }
                    j["chains"] = arr;
                }
                if (opts.explain && !chains.empty()) {
                    const auto sig = signature_from_chain(fam, chains.front(), q);
                    Json ex;
                    ex["chain"] = chain_json(chains.front());
                    ex["signature_prefix"] = signature_json(sig);
                    Json constraints = Json::array();
                    for (const auto& c : off_chain_constraints(fam, sig)) {
                        Json cj;
                        cj["variable"] = c.k;
                        cj["partner"] = c.j;
                        cj["exponent"] = c.m;
                        std::string eq = std::to_string(c.m) + "*s" + std::to_string(c.k);
                        if (c.j != c.k)
                            eq += " + s" + std::to_string(c.j);
                        cj["equation"] = eq + " = 0 (mod " + std::to_string(q) + ")";
                        cj["solutions"] = c.solutions;
                        constraints.push_back(cj);
                    }
                    ex["off_chain_constraints"] = constraints;
                    j["explain"] = ex;
                }
            } catch (const Error& e) {
                j["chains_error"] = e.what();
            }
        }
    }

    if (v.certified() && v.signature && v.eigenvalue) {
        const auto sigma = v.signature->padded();
        Json inv = Json::array();
        const auto everything = enumerate_monomials(fam, opts.budgets.monomials);
        for (const auto& m : everything.monomials()) {
            Residue r = 0;
            for (std::size_t i = 0; i < sigma.size(); ++i)
                r = (r + mul_mod(sigma[i], m.e[i] % q, q)) % q;
            if (r == *v.eigenvalue)
                inv.push_back(m.to_string());
        }
        j["invariant_monomials"] = inv;

        const auto coeff_seed = derived_seed(opts.seed, q);
        const auto poly = ExplicitPolynomial::with_random_coefficients(*v.witness, coeff_seed, 100);
        Json fals;
        fals["coefficient_seed"] = coeff_seed;
        fals["max_coefficient"] = 100;
        fals["budget"] = opts.falsifier_budget;
        Json runs = Json::array();
        for (auto p : falsifier_primes) {
            const auto result = singular_point_search(poly, p, opts.falsifier_budget,
                                                      derived_seed(coeff_seed, p));
            Json r;
            r["prime"] = p;
            r["points_tested"] = result.points_tested;
            r["exhaustive"] = result.exhaustive;
            r["singular_point"] = result.point ? Json(*result.point) : Json(nullptr);
            runs.push_back(r);
        }
        fals["runs"] = runs;
        j["falsifier"] = fals;
    }
    j["klein"] = klein_json(fam, false, opts.budgets.monomials);
    j["seed"] = opts.seed;
    if (opts.timings)
        j["timings"] = {{"total_ms", elapsed_ms(start)}};
    return report;
}

Report klein_report(const WeightedFamily& fam, const ReportOptions& opts)
{
    const auto start = std::chrono::steady_clock::now();
    Report report;
    auto& j = report.json;
    j = header("klein", fam);
    j["bounds"] = bounds_json(fam);
    j["verdicts"] = Json::array();
    j["klein"] = klein_json(fam, true, opts.budgets.monomials);
    j["seed"] = opts.seed;
    if (opts.timings)
        j["timings"] = {{"total_ms", elapsed_ms(start)}};
    return report;
}

} // namespace wph
