#include "klein.hpp"

#include <algorithm>

namespace wph {

namespace {

constexpr std::uint64_t cycle_count_cap = 1'000'000;

void full_cycles_from_zero(const ChainDigraph& graph, std::vector<std::size_t>& path,
                           std::vector<std::int64_t>& exps, std::vector<bool>& used,
                           std::optional<CycleChain>& first, std::uint64_t& count)
{
    const auto v = path.back();
    for (const auto& [j, m] : graph[v]) {
        if (count >= cycle_count_cap)
            return;
        if (j == 0 && path.size() == graph.size()) {
            ++count;
            if (!first) {
                exps.push_back(m);
                first = CycleChain{path, exps};
                exps.pop_back();
            }
        } else if (!used[j]) {
            used[j] = true;
            path.push_back(j);
            exps.push_back(m);
            full_cycles_from_zero(graph, path, exps, used, first, count);
            exps.pop_back();
            path.pop_back();
            used[j] = false;
        }
    }
}

} // namespace

MonomialSystem KleinData::monomials() const
{
    return MonomialSystem(family, cycle.monomials(family.size()));
}

std::optional<KleinData> klein_exists(const WeightedFamily& fam)
{
    if (fam.degree() < 2)
        return std::nullopt;
    const auto graph = cycle_digraph(fam);
    std::vector<std::size_t> path{0};
    std::vector<std::int64_t> exps;
    std::vector<bool> used(fam.size(), false);
    used[0] = true;
    std::optional<CycleChain> first;
    std::uint64_t count = 0;
    full_cycles_from_zero(graph, path, exps, used, first, count);
    if (!first)
        return std::nullopt;

    KleinData data{fam, *first, 0, std::nullopt, count};
    data.R = klein_singularity_R(data);
    const long sign = fam.dimension() % 2 == 0 ? -1 : 1; // (-1)^(n+1)
    BigInt numerator = first->product() + sign;
    if (mpz_divisible_ui_p(numerator.get_mpz_t(), static_cast<unsigned long>(fam.degree())))
        data.max_prime_candidate = BigInt(numerator / static_cast<long>(fam.degree()));
    return data;
}

bool klein_quasismooth(const WeightedFamily& fam)
{
    if (!klein_exists(fam))
        fail(ErrorCode::NoKleinHypersurface, "no Klein hypersurface for " + fam.to_string());
    const bool all_ones = std::all_of(fam.weights().begin(), fam.weights().end(),
                                      [](std::int64_t w) { return w == 1; });
    return !(all_ones && fam.degree() == 2 && fam.dimension() % 4 == 2);
}

BigInt klein_singularity_R(const KleinData& data)
{
    // Positions 0..n+1 along the ordering; the sum runs over suffix products.
    const auto& m = data.cycle.exponents;
    const long n = static_cast<long>(m.size()) - 2;
    BigInt R = 1, suffix = 1;
    for (long i = n + 1; i >= 1; --i) {
        suffix *= static_cast<long>(m[static_cast<std::size_t>(i)]);
        if ((n - i) % 2 == 0)
            R += suffix;
        else
            R -= suffix;
    }
    return R;
}

KleinPrime klein_max_prime(const WeightedFamily& fam)
{
    const auto data = klein_exists(fam);
    if (!data)
        fail(ErrorCode::NoKleinHypersurface, "no Klein hypersurface for " + fam.to_string());
    if (!fam.all_weights_coprime_to_degree())
        fail(ErrorCode::HypothesisViolated, "every weight must be coprime to d");
    KleinPrime out;
    if (!data->max_prime_candidate) {
        out.reason = "not-integral";
        return out;
    }
    out.candidate = *data->max_prime_candidate;
    const auto& c = *out.candidate;
    bool prime = false;
    try {
        prime = is_prime(c);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::PrimalityUndecided)
            throw;
        out.reason = "primality-undecided";
        return out;
    }
    if (!prime) {
        out.reason = "not-prime";
        return out;
    }
    if (c <= static_cast<long>(fam.degree())) {
        out.reason = "not-greater-than-d";
        return out;
    }
    if (!c.fits_ulong_p()) {
        out.reason = "too-large";
        return out;
    }
    out.prime = c.get_ui();
    return out;
}

EigenspaceCheck klein_eigenspace_check(const WeightedFamily& fam, std::uint64_t monomial_budget)
{
    EigenspaceCheck out;
    const auto data = klein_exists(fam);
    if (!data)
        fail(ErrorCode::NoKleinHypersurface, "no Klein hypersurface for " + fam.to_string());
    const auto maxp = klein_max_prime(fam);
    if (!maxp.prime) {
        out.reason = maxp.reason;
        return out;
    }
    if (!order_theory_applies(fam)) {
        out.reason = "hypothesis-violated";
        return out;
    }
    const auto p = *maxp.prime;
    out.applicable = true;
    out.p = p;
    out.signature = signature_from_chain(fam, data->cycle, p);
    const auto sigma = out.signature.padded();

    const auto all = enumerate_monomials(fam, monomial_budget);
    out.total = all.size();
    std::vector<Monomial> kept;
    for (const auto& m : all.monomials()) {
        Residue r = 0;
        for (std::size_t i = 0; i < sigma.size(); ++i)
            r = (r + mul_mod(sigma[i], m.e[i] % p, p)) % p;
        if (r == 0)
            kept.push_back(m);
    }
    out.surviving = kept.size();
    out.survivors = MonomialSystem(fam, std::move(kept));
    out.equals_klein_set = out.survivors->monomials() == data->monomials().monomials();
    return out;
}

} // namespace wph
