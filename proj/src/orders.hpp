#ifndef WPH_ORDERS_HPP
#define WPH_ORDERS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ambient.hpp"
#include "quasismooth.hpp"

namespace wph {

/*
 * Ordered distinct indices (i_0, ..., i_l) with positive exponents m_t such
 * that x_{i_t}^{m_t} x_{i_{t+1}} has degree d for every t (indices cyclic).
 */
struct CycleChain {
    std::vector<std::size_t> indices;
    std::vector<std::int64_t> exponents;

    std::size_t ell() const noexcept { return indices.size() - 1; }
    BigInt product() const;
    std::uint64_t mask() const noexcept;

    /// The cycle monomials x_{i_t}^{m_t} x_{i_{t+1}}.
    std::vector<Monomial> monomials(std::size_t variables) const;

    friend bool operator==(const CycleChain&, const CycleChain&) = default;
};

bool chain_is_valid(const WeightedFamily& fam, const CycleChain& chain);

/// Prod (d - a_{i_t}) == (Prod m_t) * (Prod a_{i_t}).
bool telescoping_holds(const WeightedFamily& fam, const CycleChain& chain);

// adjacency[i] lists (j, m) with a_i * m + a_j = d, m >= 1, j != i, ascending in j.
using ChainDigraph = std::vector<std::vector<std::pair<std::size_t, std::int64_t>>>;

/// Edges without any restriction on primes.
ChainDigraph cycle_digraph(const WeightedFamily& fam);

/// Same edges; throws HypothesisViolated when p | d or p | d - a_i.
ChainDigraph chain_digraph(const WeightedFamily& fam, const PrimePowerOrder& q);

inline constexpr std::uint64_t default_cycle_budget = 100'000;

/*
 * Simple cycles of the digraph in lexicographic order of their index tuples,
 * each rooted at its smallest vertex. The visitor returns false to stop.
 * Throws BudgetExceeded after `budget` cycles.
 */
void for_each_simple_cycle(const ChainDigraph& graph,
                           const std::function<bool(const CycleChain&)>& visit,
                           std::uint64_t budget = default_cycle_budget);

/// Residue vector; nullopt marks an entry the construction leaves free.
struct PartialSignature {
    std::uint64_t q = 0;
    std::vector<std::optional<Residue>> sigma;

    std::vector<Residue> padded() const;
    std::string to_string() const;
};

struct Signature {
    std::uint64_t q = 0;
    std::vector<Residue> sigma;

    std::string to_string() const;
    friend bool operator==(const Signature&, const Signature&) = default;
};

/// The pure prime-power condition (-1)^(l+1) Prod m_t = 1 (mod q).
bool chain_congruence(const CycleChain& chain, std::uint64_t q);

std::optional<CycleChain> necessary_condition(const WeightedFamily& fam, const PrimePowerOrder& q,
                                              std::uint64_t cycle_budget = default_cycle_budget);

/// Every qualifying chain, in the same order.
std::vector<CycleChain> qualifying_chains(const WeightedFamily& fam, const PrimePowerOrder& q,
                                          std::uint64_t cycle_budget = default_cycle_budget);

PartialSignature signature_from_chain(const WeightedFamily& fam, const CycleChain& chain,
                                      std::uint64_t q);

bool chain_invariance_check(const CycleChain& chain, std::span<const Residue> sigma,
                            std::uint64_t q);

enum class VerdictStatus { Certified, Refuted, Unresolved, HypothesisViolated };

const char* status_name(VerdictStatus status) noexcept;

struct OrderVerdict {
    PrimePowerOrder q;
    VerdictStatus status = VerdictStatus::Unresolved;
    std::string provenance;
    std::optional<CycleChain> chain;
    std::optional<PartialSignature> signature;
    std::optional<Residue> eigenvalue; // the residue h with sigma . e = h on the witness
    std::optional<MonomialSystem> witness;
    std::vector<std::string> notes;

    bool certified() const noexcept { return status == VerdictStatus::Certified; }
};

/*
 * Checks what a certified verdict promises: the witness passes the subset
 * criterion and has a required monomial for every variable, every witness
 * monomial has residue h, and the signature has effective order q.
 */
bool certificate_is_sound(const WeightedFamily& fam, const OrderVerdict& verdict);

struct Budgets {
    std::uint64_t oracle_classes = 2'000'000;
    std::uint64_t monomials = default_monomial_budget;
    std::uint64_t cycles = default_cycle_budget;
};

std::optional<OrderVerdict> sufficient_condition(const WeightedFamily& fam,
                                                 const PrimePowerOrder& q,
                                                 const Budgets& budgets = {});

/// Theorem-based decision for prime orders when every weight divides d.
OrderVerdict divides_d_criterion(const WeightedFamily& fam, std::uint64_t p);

struct BoundReport {
    enum class Kind { DividesD, Coprime };
    Kind kind;
    std::variant<BigInt, BigRational> bound;
    std::map<std::int64_t, int> multiplicities;
    std::int64_t max_weight = 0;

    /// True when a prime p is excluded by the bound.
    bool excludes(std::uint64_t p, std::int64_t degree) const;
    std::string bound_string() const;
};

BoundReport bound_divides_d(const WeightedFamily& fam);
BoundReport bound_coprime(const WeightedFamily& fam);

/*
 * Exhaustive search over diagonal signatures modulo the weight vector and
 * unit scaling. Certified with the first quasi-smooth eigen-system found,
 * refuted after every class was tried, unresolved when the budget runs out.
 */
OrderVerdict oracle_exists_order(const WeightedFamily& fam, const PrimePowerOrder& q,
                                 const Budgets& budgets = {});

/// Lexicographically least element of the class of sigma; h follows along.
std::pair<std::vector<Residue>, Residue>
canonical_signature(const WeightedFamily& fam, std::vector<Residue> sigma, Residue h,
                    std::uint64_t q);

/// Preconditions of the order criteria, as one message per violation.
std::vector<std::string> order_hypothesis_violations(const WeightedFamily& fam);

/// Upper end of the default sweep; capped at `cap`.
std::uint64_t default_max_order(const WeightedFamily& fam, std::uint64_t cap,
                                const Budgets& budgets = {});

/*
 * lcm, over every choice of one required monomial (x_i^k or x_i^k x_j) per
 * variable, of the largest Smith invariant factor of [A | -1], A the chosen
 * exponent rows. A diagonal signature of effective order q with a
 * quasi-smooth eigen-system forces q to divide it. Zero means no
 * restriction: some choice is rank deficient, or there are more than
 * `limit` choices.
 */
BigInt required_monomial_lattice_bound(const WeightedFamily& fam,
                                       std::uint64_t limit = 200'000);

std::vector<OrderVerdict> admissible_orders(const WeightedFamily& fam, std::uint64_t max_q,
                                            const Budgets& budgets = {});

OrderVerdict decide_order(const WeightedFamily& fam, const PrimePowerOrder& q,
                          const Budgets& budgets = {});

/*
 * For each variable off the chain: the constraints m*s_k + s_j = 0 (mod q)
 * forced by a near-power x_k^m x_j with j on the chain, and their solutions.
 */
struct OffChainConstraint {
    std::size_t k = 0;
    std::size_t j = 0;          // equals k for a pure power x_k^m
    std::int64_t m = 0;
    std::vector<Residue> solutions;
};

std::vector<OffChainConstraint> off_chain_constraints(const WeightedFamily& fam,
                                                      const PartialSignature& sig);

} // namespace wph

#endif
