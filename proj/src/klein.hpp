#ifndef WPH_KLEIN_HPP
#define WPH_KLEIN_HPP

#include <optional>
#include <string>

#include "orders.hpp"

namespace wph {

// The full cyclic polynomial x_{o_0}^{m_0} x_{o_1} + ... + x_{o_{n+1}}^{m_{n+1}} x_{o_0}
// along an ordering o of all variables.
struct KleinData {
    WeightedFamily family;
    CycleChain cycle; // indices = ordering, exponents = m
    BigInt R;
    std::optional<BigInt> max_prime_candidate;
    std::uint64_t cycle_count = 0; // distinct full cycles (capped)

    MonomialSystem monomials() const;
};

/// Lexicographically least full cycle, or none. d = 2 is accepted here.
std::optional<KleinData> klein_exists(const WeightedFamily& fam);

/// False exactly for a = (1,...,1), d = 2, n = 2 (mod 4). Throws NoKleinHypersurface.
bool klein_quasismooth(const WeightedFamily& fam);

/// R = 1 + sum_{i=1}^{n+1} (-1)^(n-i) prod_{j=i}^{n+1} m_j.
BigInt klein_singularity_R(const KleinData& data);

struct KleinPrime {
    std::optional<std::uint64_t> prime;
    std::optional<BigInt> candidate; // (Prod m + (-1)^(n+1)) / d when integral
    std::string reason;              // empty when prime is set
};

/// Throws NoKleinHypersurface, HypothesisViolated (gcd(a_i, d) != 1).
KleinPrime klein_max_prime(const WeightedFamily& fam);

struct EigenspaceCheck {
    bool applicable = false;
    std::string reason;
    std::uint64_t p = 0;
    PartialSignature signature;
    std::size_t surviving = 0;
    std::size_t total = 0;
    std::optional<MonomialSystem> survivors;
    bool equals_klein_set = false;
};

EigenspaceCheck klein_eigenspace_check(const WeightedFamily& fam,
                                       std::uint64_t monomial_budget = default_monomial_budget);

} // namespace wph

#endif
