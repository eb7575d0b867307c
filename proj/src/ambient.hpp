#ifndef WPH_AMBIENT_HPP
#define WPH_AMBIENT_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "arith.hpp"

namespace wph {

/*
 * A weight vector a = (a_0, ..., a_{n+1}) together with a degree d.
 *
 * Weights are kept in input order. Anything that reorders variables (cycle
 * chains, Klein orderings) reports original indices instead of permuting the
 * family. Construction rejects n < 1, non-positive entries and weight
 * vectors whose gcd is not 1.
 */
class WeightedFamily {
public:
    // Bounds keep every weighted-degree computation inside 64 bits.
    static constexpr std::int64_t max_weight_value = 1'000'000;
    static constexpr std::int64_t max_degree_value = 1'000'000'000;
    static constexpr std::size_t max_variables = 16;

    WeightedFamily(std::vector<std::int64_t> weights, std::int64_t degree);

    /// Parses "3,7,2,4,5 d=37" (also accepts "3 7 2 4 5; d=37").
    static WeightedFamily parse(std::string_view text);

    const std::vector<std::int64_t>& weights() const noexcept { return weights_; }
    std::int64_t weight(std::size_t i) const { return weights_.at(i); }
    std::int64_t degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return weights_.size(); }
    int dimension() const noexcept { return static_cast<int>(weights_.size()) - 2; }
    std::int64_t max_weight() const noexcept;

    bool all_weights_divide_degree() const noexcept;
    bool all_weights_coprime_to_degree() const noexcept;

    std::string to_string() const;

    friend bool operator==(const WeightedFamily&, const WeightedFamily&) = default;

private:
    std::vector<std::int64_t> weights_;
    std::int64_t degree_;
};

/// Syntax only: "3,7,2,4,5 d=37" -> ({3,7,2,4,5}, 37). Throws InvalidArgument.
std::pair<std::vector<std::int64_t>, std::int64_t> split_family_text(std::string_view text);

using Exponents = std::vector<std::uint32_t>;

struct Monomial {
    Exponents e;

    std::int64_t weighted_degree(const std::vector<std::int64_t>& weights) const;
    std::uint32_t total_degree() const noexcept;
    std::uint64_t support_mask() const noexcept;
    std::string to_string() const;

    friend auto operator<=>(const Monomial&, const Monomial&) = default;
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/*
 * A finite duplicate-free set of degree-d monomials for one family, stored
 * in descending lexicographic order of exponent vectors.
 */
class MonomialSystem {
public:
    MonomialSystem(WeightedFamily family, std::vector<Monomial> monomials);

    const WeightedFamily& family() const noexcept { return family_; }
    const std::vector<Monomial>& monomials() const noexcept { return monomials_; }
    std::size_t size() const noexcept { return monomials_.size(); }
    bool empty() const noexcept { return monomials_.empty(); }
    bool contains(const Monomial& m) const;

    /// Union with another system over the same family.
    MonomialSystem merged(const MonomialSystem& other) const;

private:
    WeightedFamily family_;
    std::vector<Monomial> monomials_;
};

bool well_formed(const WeightedFamily& fam);

// Divides out common factors of every n+1 weights until the family is
// well-formed; the degree must stay integral at each step.
WeightedFamily well_form_normalize(const WeightedFamily& fam);

/// n >= 3, or n = 2 with a_0 + a_1 + a_2 + a_3 != d.
bool mm_hypothesis(const WeightedFamily& fam);

/// The group of linear automorphisms is finite.
bool lin_finite(const WeightedFamily& fam);

bool is_linear_cone(const WeightedFamily& fam);

// Gate used by every order criterion: the n = 2, a_0+a_1+a_2+a_3 = d case
// is excluded; curves (n = 1) are handled as statements about linear
// automorphisms.
bool order_theory_applies(const WeightedFamily& fam);

inline constexpr std::uint64_t default_monomial_budget = 10'000'000;

/// Every exponent vector of weighted degree d. Throws BudgetExceeded.
MonomialSystem enumerate_monomials(const WeightedFamily& fam,
                                   std::uint64_t budget = default_monomial_budget);

/// Degree-d monomials in the variables of `subset` only.
MonomialSystem enumerate_monomials_in(const WeightedFamily& fam,
                                      std::uint64_t subset_mask,
                                      std::uint64_t budget = default_monomial_budget);

} // namespace wph

#endif
