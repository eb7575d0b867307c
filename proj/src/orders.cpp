#include "orders.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

namespace wph {

BigInt CycleChain::product() const
{
    BigInt p = 1;
    for (auto m : exponents)
        p *= static_cast<long>(m);
    return p;
}

std::uint64_t CycleChain::mask() const noexcept
{
    std::uint64_t out = 0;
    for (auto i : indices)
        out |= std::uint64_t{1} << i;
    return out;
}

std::vector<Monomial> CycleChain::monomials(std::size_t variables) const
{
    std::vector<Monomial> out;
    for (std::size_t t = 0; t < indices.size(); ++t) {
        Monomial m{Exponents(variables, 0)};
        m.e[indices[t]] = static_cast<std::uint32_t>(exponents[t]);
        m.e[indices[(t + 1) % indices.size()]] += 1;
        out.push_back(std::move(m));
    }
    return out;
}

bool chain_is_valid(const WeightedFamily& fam, const CycleChain& chain)
{
    const auto& a = fam.weights();
    const auto len = chain.indices.size();
    if (len < 2 || len > a.size() || chain.exponents.size() != len)
        return false;
    std::uint64_t seen = 0;
    for (auto i : chain.indices) {
        if (i >= a.size() || (seen >> i & 1))
            return false;
        seen |= std::uint64_t{1} << i;
    }
    for (std::size_t t = 0; t < len; ++t) {
        const auto i = chain.indices[t];
        const auto j = chain.indices[(t + 1) % len];
        if (chain.exponents[t] < 1 || a[i] * chain.exponents[t] + a[j] != fam.degree())
            return false;
    }
    return true;
}

bool telescoping_holds(const WeightedFamily& fam, const CycleChain& chain)
{
    BigInt lhs = 1, weights = 1;
    for (auto i : chain.indices) {
        lhs *= static_cast<long>(fam.degree() - fam.weight(i));
        weights *= static_cast<long>(fam.weight(i));
    }
    return lhs == chain.product() * weights;
}

ChainDigraph cycle_digraph(const WeightedFamily& fam)
{
    const auto& a = fam.weights();
    const auto d = fam.degree();
    ChainDigraph graph(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (i == j || d - a[j] < a[i] || (d - a[j]) % a[i] != 0)
                continue;
            graph[i].emplace_back(j, (d - a[j]) / a[i]);
        }
    }
    return graph;
}

ChainDigraph chain_digraph(const WeightedFamily& fam, const PrimePowerOrder& q)
{
    const auto p = static_cast<std::int64_t>(q.p);
    if (fam.degree() % p == 0)
        fail(ErrorCode::HypothesisViolated,
             "p = " + std::to_string(p) + " divides d = " + std::to_string(fam.degree()));
    for (std::size_t i = 0; i < fam.size(); ++i) {
        if ((fam.degree() - fam.weight(i)) % p == 0)
            fail(ErrorCode::HypothesisViolated,
                 "p = " + std::to_string(p) + " divides d - a_" + std::to_string(i) + " = "
                     + std::to_string(fam.degree() - fam.weight(i)));
    }
    return cycle_digraph(fam);
}

namespace {

class CycleWalker {
public:
    CycleWalker(const ChainDigraph& graph, const std::function<bool(const CycleChain&)>& visit,
                std::uint64_t budget)
        : graph_(graph), visit_(visit), budget_(budget), on_path_(graph.size(), false)
    {}

    void run()
    {
        for (root_ = 0; root_ < graph_.size() && !stopped_; ++root_) {
            chain_.indices.assign(1, root_);
            chain_.exponents.clear();
            on_path_[root_] = true;
            extend(root_);
            on_path_[root_] = false;
        }
    }

private:
    void extend(std::size_t v)
    {
        for (const auto& [j, m] : graph_[v]) {
            if (stopped_)
                return;
            if (++steps_ > budget_ * 64)
                fail(ErrorCode::BudgetExceeded, "cycle search exceeded its step budget");
            if (j == root_) {
                if (++emitted_ > budget_)
                    fail(ErrorCode::BudgetExceeded,
                         "more than " + std::to_string(budget_) + " cycles");
                chain_.exponents.push_back(m);
                stopped_ = !visit_(chain_);
                chain_.exponents.pop_back();
            } else if (j > root_ && !on_path_[j]) {
                on_path_[j] = true;
                chain_.indices.push_back(j);
                chain_.exponents.push_back(m);
                extend(j);
                chain_.exponents.pop_back();
                chain_.indices.pop_back();
                on_path_[j] = false;
            }
        }
    }

    const ChainDigraph& graph_;
    const std::function<bool(const CycleChain&)>& visit_;
    std::uint64_t budget_;
    std::uint64_t emitted_ = 0;
    std::uint64_t steps_ = 0;
    std::size_t root_ = 0;
    bool stopped_ = false;
    std::vector<bool> on_path_;
    CycleChain chain_;
};

} // namespace

void for_each_simple_cycle(const ChainDigraph& graph,
                           const std::function<bool(const CycleChain&)>& visit,
                           std::uint64_t budget)
{
    CycleWalker(graph, visit, budget).run();
}

std::vector<Residue> PartialSignature::padded() const
{
    std::vector<Residue> out;
    out.reserve(sigma.size());
    for (const auto& s : sigma)
        out.push_back(s.value_or(0));
    return out;
}

std::string PartialSignature::to_string() const
{
    std::ostringstream out;
    out << '(';
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (i)
            out << ',';
        if (sigma[i])
            out << *sigma[i];
        else
            out << '*';
    }
    out << ')';
    return out.str();
}

std::string Signature::to_string() const
{
    PartialSignature partial{q, {}};
    for (auto s : sigma)
        partial.sigma.emplace_back(s);
    return partial.to_string();
}

bool chain_congruence(const CycleChain& chain, std::uint64_t q)
{
    Residue prod = 1 % q;
    for (auto m : chain.exponents)
        prod = mul_mod(prod, mod_reduce(m, q), q);
    // (-1)^(l+1) with l+1 = chain length
    if (chain.indices.size() % 2 == 1)
        prod = (q - prod) % q;
    return prod == 1 % q;
}

namespace {

void require_order_preconditions(const WeightedFamily& fam)
{
    const auto problems = order_hypothesis_violations(fam);
    if (!problems.empty())
        fail(ErrorCode::HypothesisViolated, problems.front());
}

void require_chain_preconditions(const WeightedFamily& fam)
{
    if (fam.degree() < 3)
        fail(ErrorCode::HypothesisViolated, "the order criteria need d >= 3");
    if (!order_theory_applies(fam))
        fail(ErrorCode::HypothesisViolated,
             "n = 2 with a_0 + a_1 + a_2 + a_3 = d is excluded");
}

} // namespace

std::vector<CycleChain> qualifying_chains(const WeightedFamily& fam, const PrimePowerOrder& q,
                                          std::uint64_t cycle_budget)
{
    require_chain_preconditions(fam);
    const auto graph = chain_digraph(fam, q);
    std::vector<CycleChain> out;
    for_each_simple_cycle(
        graph,
        [&](const CycleChain& c) {
            if (chain_congruence(c, q.q))
                out.push_back(c);
            return true;
        },
        cycle_budget);
    return out;
}

std::optional<CycleChain> necessary_condition(const WeightedFamily& fam, const PrimePowerOrder& q,
                                              std::uint64_t cycle_budget)
{
    require_chain_preconditions(fam);
    const auto graph = chain_digraph(fam, q);
    std::optional<CycleChain> found;
    for_each_simple_cycle(
        graph,
        [&](const CycleChain& c) {
            if (!chain_congruence(c, q.q))
                return true;
            found = c;
            return false;
        },
        cycle_budget);
    return found;
}

PartialSignature signature_from_chain(const WeightedFamily& fam, const CycleChain& chain,
                                      std::uint64_t q)
{
    PartialSignature sig{q, std::vector<std::optional<Residue>>(fam.size())};
    Residue running = 1 % q;
    sig.sigma[chain.indices[0]] = running;
    for (std::size_t j = 0; j + 1 < chain.indices.size(); ++j) {
        running = mul_mod(running, mod_reduce(chain.exponents[j], q), q);
        const Residue value = (j % 2 == 0) ? (q - running) % q : running;
        sig.sigma[chain.indices[j + 1]] = value;
    }
    return sig;
}

bool chain_invariance_check(const CycleChain& chain, std::span<const Residue> sigma,
                            std::uint64_t q)
{
    const auto len = chain.indices.size();
    for (std::size_t t = 0; t < len; ++t) {
        const auto i = chain.indices[t];
        const auto j = chain.indices[(t + 1) % len];
        if (i >= sigma.size() || j >= sigma.size())
            return false;
        const auto lhs = (mul_mod(sigma[i] % q, mod_reduce(chain.exponents[t], q), q) + sigma[j] % q) % q;
        if (lhs != 0)
            return false;
    }
    return true;
}

const char* status_name(VerdictStatus status) noexcept
{
    switch (status) {
    case VerdictStatus::Certified: return "certified";
    case VerdictStatus::Refuted: return "refuted";
    case VerdictStatus::Unresolved: return "unresolved";
    case VerdictStatus::HypothesisViolated: return "hypothesis-violated";
    }
    return "unknown";
}

namespace {

Residue residue_of(const Monomial& m, std::span<const Residue> sigma, std::uint64_t q)
{
    Residue r = 0;
    for (std::size_t i = 0; i < sigma.size(); ++i)
        r = (r + mul_mod(sigma[i], m.e[i] % q, q)) % q;
    return r;
}

Monomial fermat_term(const WeightedFamily& fam, std::size_t k)
{
    Monomial m{Exponents(fam.size(), 0)};
    m.e[k] = static_cast<std::uint32_t>(fam.degree() / fam.weight(k));
    return m;
}

std::vector<Residue> unit_vector(std::size_t size, std::size_t i)
{
    std::vector<Residue> v(size, 0);
    v[i] = 1;
    return v;
}

PartialSignature full(std::uint64_t q, const std::vector<Residue>& sigma)
{
    PartialSignature sig{q, {}};
    for (auto s : sigma)
        sig.sigma.emplace_back(s);
    return sig;
}

} // namespace

bool certificate_is_sound(const WeightedFamily& fam, const OrderVerdict& verdict)
{
    if (!verdict.certified() || !verdict.witness || !verdict.signature || !verdict.eigenvalue)
        return false;
    const auto& system = *verdict.witness;
    if (system.empty() || !(system.family() == fam))
        return false;
    const auto sigma = verdict.signature->padded();
    const auto q = verdict.q.q;
    if (sigma.size() != fam.size())
        return false;
    if (!general_member_quasismooth(system))
        return false;
    for (std::size_t i = 0; i < fam.size(); ++i) {
        if (!required_monomial(system, i))
            return false;
    }
    for (const auto& m : system.monomials()) {
        if (residue_of(m, sigma, q) != *verdict.eigenvalue)
            return false;
    }
    return effective_order(sigma, fam.weights(), q) == q;
}

std::optional<OrderVerdict> sufficient_condition(const WeightedFamily& fam,
                                                 const PrimePowerOrder& q,
                                                 const Budgets& budgets)
{
    const auto chains = qualifying_chains(fam, q, budgets.cycles);
    const std::uint64_t all = (std::uint64_t{1} << fam.size()) - 1;
    for (const auto& chain : chains) {
        const auto chain_mask = chain.mask();
        MonomialSystem cycle_system(fam, chain.monomials(fam.size()));
        if (!general_member_quasismooth(cycle_system, chain_mask))
            continue;
        MonomialSystem witness = cycle_system;
        const auto complement = all & ~chain_mask;
        if (complement) {
            auto rest = enumerate_monomials_in(fam, complement, budgets.monomials);
            if (rest.empty() || !general_member_quasismooth(rest, complement))
                continue;
            witness = witness.merged(rest);
        }
        const auto sigma = signature_from_chain(fam, chain, q.q).padded();
        if (effective_order(sigma, fam.weights(), q.q) != q.q)
            continue;
        OrderVerdict v;
        v.q = q;
        v.status = VerdictStatus::Certified;
        v.provenance = "sufficient";
        v.chain = chain;
        v.signature = full(q.q, sigma);
        v.eigenvalue = 0;
        v.witness = std::move(witness);
        if (complement)
            v.notes.push_back("off-chain variables carry residue 0");
        return v;
    }
    return std::nullopt;
}

OrderVerdict divides_d_criterion(const WeightedFamily& fam, std::uint64_t p)
{
    if (!is_prime(p))
        fail(ErrorCode::InvalidArgument, std::to_string(p) + " is not prime");
    if (!fam.all_weights_divide_degree())
        fail(ErrorCode::HypothesisViolated, "every weight must divide d");
    require_chain_preconditions(fam);
    if (!well_formed(fam))
        fail(ErrorCode::HypothesisViolated, "the family must be well-formed");

    const auto& a = fam.weights();
    const auto d = fam.degree();
    const auto N = fam.size();
    const auto P = static_cast<std::int64_t>(p);

    OrderVerdict v;
    v.q = PrimePowerOrder{p, 1, p};
    v.eigenvalue = 0;

    auto fermat_except = [&](std::uint64_t skip) {
        std::vector<Monomial> terms;
        for (std::size_t k = 0; k < N; ++k) {
            if (!(skip >> k & 1))
                terms.push_back(fermat_term(fam, k));
        }
        return terms;
    };

    // (a) p | d: a Fermat polynomial with the signature e_i, p not dividing a_i.
    if (d % P == 0) {
        for (std::size_t i = 0; i < N; ++i) {
            if (a[i] % P == 0)
                continue;
            v.status = VerdictStatus::Certified;
            v.provenance = "divides-d(a)";
            v.signature = full(p, unit_vector(N, i));
            v.witness = MonomialSystem(fam, fermat_except(0));
            v.notes.push_back("p divides d; Fermat polynomial, signature e_" + std::to_string(i));
            return v;
        }
    }

    // (b) a_i p | d - a_j: x_i^((d-a_j)/a_i) x_j replaces the Fermat term of x_i.
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = 0; j < N; ++j) {
            if (i == j || d - a[j] <= 0 || (d - a[j]) % (a[i] * P) != 0)
                continue;
            auto terms = fermat_except(std::uint64_t{1} << i);
            Monomial near{Exponents(N, 0)};
            near.e[i] = static_cast<std::uint32_t>((d - a[j]) / a[i]);
            near.e[j] = 1;
            terms.push_back(near);
            v.status = VerdictStatus::Certified;
            v.provenance = "divides-d(b)";
            v.signature = full(p, unit_vector(N, i));
            v.witness = MonomialSystem(fam, std::move(terms));
            v.notes.push_back("a_" + std::to_string(i) + "*p divides d - a_" + std::to_string(j));
            return v;
        }
    }

    // (c) a cycle inside one weight class: (1 - d/w)^(l+1) = 1 (mod p).
    std::vector<bool> done(N, false);
    for (std::size_t first = 0; first < N; ++first) {
        if (done[first])
            continue;
        std::vector<std::size_t> members;
        for (std::size_t k = first; k < N; ++k) {
            if (a[k] == a[first]) {
                members.push_back(k);
                done[k] = true;
            }
        }
        const auto D = d / a[first];
        if (D < 2 || members.size() < 2)
            continue;
        const Residue base = mod_reduce(1 - D, p);
        Residue power = base;
        for (std::size_t len = 2; len <= members.size(); ++len) {
            power = mul_mod(power, base, p);
            if (power != 1)
                continue;
            CycleChain chain{{members.begin(), members.begin() + static_cast<long>(len)},
                             std::vector<std::int64_t>(len, D - 1)};
            auto terms = fermat_except(chain.mask());
            for (auto& m : chain.monomials(N))
                terms.push_back(std::move(m));
            v.status = VerdictStatus::Certified;
            v.provenance = "divides-d(c)";
            v.chain = chain;
            v.signature = full(p, signature_from_chain(fam, chain, p).padded());
            v.witness = MonomialSystem(fam, std::move(terms));
            v.notes.push_back("(1 - " + std::to_string(D) + ")^" + std::to_string(len)
                              + " = 1 (mod " + std::to_string(p) + ")");
            return v;
        }
    }

    v.status = VerdictStatus::Refuted;
    v.provenance = "divides-d";
    v.eigenvalue.reset();
    v.notes.push_back("none of the three cases applies");
    return v;
}

bool BoundReport::excludes(std::uint64_t p, std::int64_t degree) const
{
    const BigInt prime(std::to_string(p));
    if (kind == Kind::DividesD)
        return prime > std::get<BigInt>(bound);
    return static_cast<std::int64_t>(p) > degree && BigRational(prime) >= std::get<BigRational>(bound);
}

std::string BoundReport::bound_string() const
{
    if (kind == Kind::DividesD)
        return std::get<BigInt>(bound).get_str();
    return std::get<BigRational>(bound).get_str();
}

namespace {

std::map<std::int64_t, int> weight_multiplicities(const WeightedFamily& fam)
{
    std::map<std::int64_t, int> out;
    for (auto w : fam.weights())
        ++out[w];
    return out;
}

} // namespace

BoundReport bound_divides_d(const WeightedFamily& fam)
{
    if (!fam.all_weights_divide_degree())
        fail(ErrorCode::HypothesisViolated, "every weight must divide d");
    BoundReport report{BoundReport::Kind::DividesD, BigInt(0), weight_multiplicities(fam),
                       fam.max_weight()};
    BigInt best = static_cast<long>(fam.degree());
    for (const auto& [w, count] : report.multiplicities) {
        BigInt term;
        mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(fam.degree() / w - 1),
                      static_cast<unsigned long>(count - 1));
        best = std::max(best, term);
    }
    report.bound = best;
    return report;
}

BoundReport bound_coprime(const WeightedFamily& fam)
{
    if (!fam.all_weights_coprime_to_degree())
        fail(ErrorCode::HypothesisViolated, "every weight must be coprime to d");
    const auto top = fam.max_weight();
    if (fam.degree() <= top)
        fail(ErrorCode::HypothesisViolated, "the coprime bound needs d > max(a)");
    BigRational value(static_cast<long>(top), static_cast<long>(fam.degree() - top));
    for (auto w : fam.weights())
        value *= BigRational(static_cast<long>(fam.degree() - w), static_cast<long>(w));
    value.canonicalize();
    return BoundReport{BoundReport::Kind::Coprime, value, weight_multiplicities(fam), top};
}

std::vector<std::string> order_hypothesis_violations(const WeightedFamily& fam)
{
    std::vector<std::string> out;
    if (fam.degree() < 3)
        out.push_back("d >= 3 is required");
    if (!well_formed(fam))
        out.push_back("the family is not well-formed");
    if (!order_theory_applies(fam))
        out.push_back("n = 2 with a_0 + a_1 + a_2 + a_3 = d is excluded");
    if (!lin_finite(fam))
        out.push_back("the linear automorphism group is not finite");
    if (is_linear_cone(fam))
        out.push_back("the family is a linear cone");
    return out;
}

std::pair<std::vector<Residue>, Residue>
canonical_signature(const WeightedFamily& fam, std::vector<Residue> sigma, Residue h,
                    std::uint64_t q)
{
    const auto& a = fam.weights();
    std::vector<Residue> best = sigma, candidate(sigma.size());
    Residue best_h = h % q;
    for (std::uint64_t u = 1; u < q; ++u) {
        if (std::gcd(u, q) != 1)
            continue;
        for (std::uint64_t c = 0; c < q; ++c) {
            for (std::size_t i = 0; i < sigma.size(); ++i)
                candidate[i] = mul_mod(u, (sigma[i] + mul_mod(c, mod_reduce(a[i], q), q)) % q, q);
            if (candidate < best) {
                best = candidate;
                best_h = mul_mod(u, (h + mul_mod(c, mod_reduce(fam.degree(), q), q)) % q, q);
            }
        }
    }
    return {best, best_h};
}

OrderVerdict oracle_exists_order(const WeightedFamily& fam, const PrimePowerOrder& q,
                                 const Budgets& budgets)
{
    require_order_preconditions(fam);
    const auto Q = q.q;
    const auto N = fam.size();
    const auto& a = fam.weights();
    const auto system = enumerate_monomials(fam, budgets.monomials);
    const auto& monos = system.monomials();
    const auto M = monos.size();

    // Per monomial: support, linear variables, and the variables for which it
    // is of the form x_i^k or x_i^k x_j (a required monomial for i).
    std::vector<std::uint64_t> support(M), linear(M), covers(M);
    std::vector<std::uint32_t> exps(M * N);
    for (std::size_t t = 0; t < M; ++t) {
        const auto& e = monos[t].e;
        support[t] = monos[t].support_mask();
        for (std::size_t i = 0; i < N; ++i) {
            exps[t * N + i] = static_cast<std::uint32_t>(e[i] % Q);
            if (e[i] == 1)
                linear[t] |= std::uint64_t{1} << i;
        }
        const int size = std::popcount(support[t]);
        if (size == 1) {
            covers[t] = support[t];
        } else if (size == 2) {
            for (auto rest = support[t]; rest; rest &= rest - 1) {
                const auto i = static_cast<std::size_t>(std::countr_zero(rest));
                const auto other = support[t] & ~(std::uint64_t{1} << i);
                if (linear[t] & other)
                    covers[t] |= std::uint64_t{1} << i;
            }
        }
    }
    const std::uint64_t all = (std::uint64_t{1} << N) - 1;
    std::vector<std::size_t> covering;
    for (std::size_t t = 0; t < M; ++t) {
        if (covers[t])
            covering.push_back(t);
    }

    // Slice: sigma_{i0} = 0 where a_{i0} is a unit mod q. A class has
    // effective order q iff some remaining entry is a unit; the first unit is
    // scaled to 1, entries before it run over multiples of p.
    std::size_t i0 = 0;
    while (a[i0] % static_cast<std::int64_t>(q.p) == 0)
        ++i0;
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < N; ++i) {
        if (i != i0)
            free.push_back(i);
    }

    OrderVerdict v;
    v.q = q;
    v.provenance = "oracle";

    std::vector<Residue> sigma(N, 0), residues(M);
    std::vector<std::uint32_t> bucket_start(Q + 1), order(M);
    std::vector<std::uint64_t> bucket_covers(Q);
    SupportProfile profile(N);
    std::uint64_t classes = 0;

    for (std::size_t lead = 0; lead < free.size(); ++lead) {
        std::fill(sigma.begin(), sigma.end(), 0);
        sigma[free[lead]] = 1;
        // Odometer positions, fastest first: the tail (any residue), then the
        // head (multiples of p).
        std::vector<std::pair<std::size_t, Residue>> digits;
        for (std::size_t k = free.size(); k-- > lead + 1;)
            digits.push_back({free[k], 1});
        for (std::size_t k = lead; k-- > 0;)
            digits.push_back({free[k], q.p});
        while (true) {
            if (++classes > budgets.oracle_classes) {
                v.status = VerdictStatus::Unresolved;
                v.notes.push_back("oracle budget of " + std::to_string(budgets.oracle_classes)
                                  + " signature classes exhausted");
                return v;
            }
            const auto residue = [&](std::size_t t) {
                std::uint64_t r = 0;
                for (std::size_t i = 0; i < N; ++i)
                    r += static_cast<std::uint64_t>(sigma[i]) * exps[t * N + i];
                return static_cast<Residue>(r % Q);
            };
            // Cheap pass over the required monomials first: most classes have
            // no eigenvalue h covering every variable.
            std::fill(bucket_covers.begin(), bucket_covers.end(), 0);
            for (auto t : covering)
                bucket_covers[residue(t)] |= covers[t];
            bool any = false;
            for (std::uint64_t h = 0; h < Q; ++h)
                any = any || bucket_covers[h] == all;
            if (any) {
                std::fill(bucket_start.begin(), bucket_start.end(), 0);
                for (std::size_t t = 0; t < M; ++t) {
                    residues[t] = residue(t);
                    ++bucket_start[residues[t] + 1];
                }
                for (std::uint64_t h = 0; h < Q; ++h)
                    bucket_start[h + 1] += bucket_start[h];
                {
                    auto fill = bucket_start;
                    for (std::size_t t = 0; t < M; ++t)
                        order[fill[residues[t]]++] = static_cast<std::uint32_t>(t);
                }
                for (std::uint64_t h = 0; h < Q; ++h) {
                    if (bucket_covers[h] != all)
                        continue;
                    profile.clear();
                    for (auto k = bucket_start[h]; k < bucket_start[h + 1]; ++k)
                        profile.add(support[order[k]], linear[order[k]]);
                    if (!profile.passes())
                        continue;
                    std::vector<Monomial> chosen;
                    for (auto k = bucket_start[h]; k < bucket_start[h + 1]; ++k)
                        chosen.push_back(monos[order[k]]);
                    auto [canon, canon_h] = canonical_signature(fam, sigma, h, Q);
                    v.status = VerdictStatus::Certified;
                    v.signature = full(Q, canon);
                    v.eigenvalue = canon_h;
                    v.witness = MonomialSystem(fam, std::move(chosen));
                    v.notes.push_back("found after " + std::to_string(classes)
                                      + " signature classes");
                    return v;
                }
            }
            std::size_t k = 0;
            for (; k < digits.size(); ++k) {
                auto& entry = sigma[digits[k].first];
                entry += digits[k].second;
                if (entry < Q)
                    break;
                entry = 0;
            }
            if (k == digits.size())
                break;
        }
    }
    v.status = VerdictStatus::Refuted;
    v.notes.push_back("all " + std::to_string(classes) + " signature classes of order "
                      + std::to_string(Q) + " exhausted");
    return v;
}

std::uint64_t default_max_order(const WeightedFamily& fam, std::uint64_t cap,
                                const Budgets& budgets)
{
    const auto d = static_cast<std::uint64_t>(fam.degree());
    BigInt limit;
    if (fam.all_weights_divide_degree()) {
        limit = std::get<BigInt>(bound_divides_d(fam).bound);
    } else if (fam.all_weights_coprime_to_degree() && fam.degree() > fam.max_weight()) {
        const auto b = std::get<BigRational>(bound_coprime(fam).bound);
        mpz_cdiv_q(limit.get_mpz_t(), b.get_num_mpz_t(), b.get_den_mpz_t());
    } else {
        // A qualifying cycle forces q | Prod m -+ 1; primes without one divide d or d - a_i.
        limit = 0;
        try {
            for_each_simple_cycle(
                cycle_digraph(fam),
                [&](const CycleChain& c) {
                    limit = std::max(limit, BigInt(c.product() + 1));
                    return limit <= cap;
                },
                budgets.cycles);
        } catch (const Error&) {
            limit = cap;
        }
    }
    limit = std::max(limit, BigInt(static_cast<unsigned long>(d)));
    if (limit > cap)
        return cap;
    return limit.get_ui();
}

BigInt required_monomial_lattice_bound(const WeightedFamily& fam, std::uint64_t limit)
{
    const auto& a = fam.weights();
    const auto d = fam.degree();
    const auto N = fam.size();
    std::vector<std::vector<Exponents>> choices(N);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < N; ++i) {
        if (d % a[i] == 0) {
            Exponents e(N, 0);
            e[i] = static_cast<std::uint32_t>(d / a[i]);
            choices[i].push_back(e);
        }
        for (std::size_t j = 0; j < N; ++j) {
            if (j == i || d - a[j] < a[i] || (d - a[j]) % a[i] != 0)
                continue;
            Exponents e(N, 0);
            e[i] = static_cast<std::uint32_t>((d - a[j]) / a[i]);
            e[j] = 1;
            choices[i].push_back(e);
        }
        if (choices[i].empty())
            return 1; // no quasi-smooth member at all
        total *= choices[i].size();
        if (total > limit)
            return 0;
    }
    BigInt lcm = 1;
    std::vector<std::size_t> pick(N, 0);
    IntMatrix m(N, std::vector<BigInt>(N + 1));
    for (;;) {
        for (std::size_t i = 0; i < N; ++i) {
            const auto& e = choices[i][pick[i]];
            for (std::size_t j = 0; j < N; ++j)
                m[i][j] = e[j];
            m[i][N] = -1;
        }
        const auto s = largest_invariant_factor(m);
        if (s == 0)
            return 0;
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), s.get_mpz_t());
        std::size_t i = 0;
        while (i < N && ++pick[i] == choices[i].size())
            pick[i++] = 0;
        if (i == N)
            break;
    }
    return lcm;
}

namespace {

// Per-family memo; sweeps ask for every q of the same family.
BigInt cached_lattice_bound(const WeightedFamily& fam)
{
    static std::mutex mutex;
    static std::map<std::pair<std::vector<std::int64_t>, std::int64_t>, BigInt> cache;
    const auto key = std::make_pair(fam.weights(), fam.degree());
    {
        std::lock_guard lock(mutex);
        if (auto it = cache.find(key); it != cache.end())
            return it->second;
    }
    auto bound = required_monomial_lattice_bound(fam);
    std::lock_guard lock(mutex);
    if (cache.size() > 4096)
        cache.clear();
    cache.emplace(key, bound);
    return bound;
}

} // namespace

OrderVerdict decide_order(const WeightedFamily& fam, const PrimePowerOrder& q,
                          const Budgets& budgets)
{
    OrderVerdict v;
    v.q = q;
    const auto problems = order_hypothesis_violations(fam);
    if (!problems.empty()) {
        v.status = VerdictStatus::HypothesisViolated;
        v.provenance = "hypotheses";
        v.notes = problems;
        return v;
    }
    try {
        if (fam.all_weights_divide_degree() && q.r == 1) {
            if (bound_divides_d(fam).excludes(q.p, fam.degree())) {
                v.status = VerdictStatus::Refuted;
                v.provenance = "bound-divides-d";
                v.notes.push_back("p exceeds " + bound_divides_d(fam).bound_string());
                return v;
            }
            return divides_d_criterion(fam, q.p);
        }
        if (fam.all_weights_coprime_to_degree()) {
            const auto bound = bound_coprime(fam);
            if (bound.excludes(q.p, fam.degree())) {
                v.status = VerdictStatus::Refuted;
                v.provenance = "bound-coprime";
                v.notes.push_back("p > d and p >= " + bound.bound_string());
                return v;
            }
        }

        bool chain_hypotheses = true;
        try {
            chain_digraph(fam, q);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::HypothesisViolated)
                throw;
            chain_hypotheses = false;
            v.notes.push_back(std::string("cycle criteria skipped: ") + e.what());
        }

        std::optional<CycleChain> necessary;
        if (chain_hypotheses) {
            if (auto certified = sufficient_condition(fam, q, budgets))
                return *certified;
            necessary = necessary_condition(fam, q, budgets.cycles);
            if (!necessary) {
                v.status = VerdictStatus::Refuted;
                v.provenance = "necessary";
                v.notes.push_back("no cycle satisfies the congruence");
                return v;
            }
        }

        const auto lattice = cached_lattice_bound(fam);
        if (lattice != 0 && lattice % static_cast<unsigned long>(q.q) != 0) {
            v.status = VerdictStatus::Refuted;
            v.provenance = "lattice";
            v.notes.push_back("q divides no largest Smith invariant of a required-monomial "
                              "matrix (their lcm is " + lattice.get_str() + ")");
            return v;
        }

        auto oracle = oracle_exists_order(fam, q, budgets);
        oracle.notes.insert(oracle.notes.begin(), v.notes.begin(), v.notes.end());
        if (necessary && !oracle.certified()) {
            oracle.chain = necessary;
            oracle.signature = signature_from_chain(fam, *necessary, q.q);
            oracle.notes.push_back("necessary condition holds along the chain");
        }
        return oracle;
    } catch (const Error& e) {
        v.status = VerdictStatus::Unresolved;
        v.provenance = e.code() == ErrorCode::BudgetExceeded ? "budget" : "error";
        v.chain.reset();
        v.signature.reset();
        v.notes.push_back(std::string(error_code_name(e.code())) + ": " + e.what());
        return v;
    }
}

std::vector<OrderVerdict> admissible_orders(const WeightedFamily& fam, std::uint64_t max_q,
                                            const Budgets& budgets)
{
    std::vector<OrderVerdict> out;
    for (const auto& q : prime_powers_up_to(max_q))
        out.push_back(decide_order(fam, q, budgets));
    return out;
}

std::vector<OffChainConstraint> off_chain_constraints(const WeightedFamily& fam,
                                                      const PartialSignature& sig)
{
    const auto& a = fam.weights();
    const auto d = fam.degree();
    const auto q = sig.q;
    std::vector<OffChainConstraint> out;
    for (std::size_t k = 0; k < fam.size(); ++k) {
        if (sig.sigma[k])
            continue;
        if (d % a[k] == 0) {
            const auto m = d / a[k];
            out.push_back({k, k, m, solve_linear_congruence(mod_reduce(m, q), 0, q)});
        }
        for (std::size_t j = 0; j < fam.size(); ++j) {
            if (j == k || !sig.sigma[j] || d - a[j] < a[k] || (d - a[j]) % a[k] != 0)
                continue;
            const auto m = (d - a[j]) / a[k];
            out.push_back({k, j, m, solve_linear_congruence(mod_reduce(m, q), *sig.sigma[j], q)});
        }
    }
    return out;
}

} // namespace wph
