#ifndef WPH_QUASISMOOTH_HPP
#define WPH_QUASISMOOTH_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ambient.hpp"

namespace wph {

/*
 * Support data of a monomial linear system, packed for the subset test.
 *
 * For a subset I of the variables the general member of the system is
 * quasi-smooth along the stratum {x_i != 0 iff i in I} when either
 *   (a) some monomial is supported inside I, or
 *   (b) at least |I| indices j outside I carry a monomial x^m * x_j with
 *       m supported inside I.
 * The profile stores, as bitsets indexed by variable masks, which supports
 * occur (for (a)) and, per variable j, which supports occur next to a
 * linear factor x_j (for (b)). Subset closure is a zeta transform.
 */
class SupportProfile {
public:
    explicit SupportProfile(std::size_t variables);

    void clear();
    void add(const Monomial& m);
    void add(std::uint64_t support, std::uint64_t linear_variables);

    bool empty() const noexcept { return count_ == 0; }

    /// First subset of `universe` violating both (a) and (b), if any.
    std::optional<std::uint64_t> first_failure(std::uint64_t universe) const;
    bool passes(std::uint64_t universe) const { return !first_failure(universe); }
    bool passes() const { return passes(full_mask()); }

    std::uint64_t full_mask() const noexcept { return (std::uint64_t{1} << vars_) - 1; }

private:
    bool singletons_pass(std::uint64_t universe) const;

    std::size_t vars_;
    std::size_t words_;
    std::size_t count_ = 0;
    std::vector<std::uint64_t> pure_;
    std::vector<std::uint64_t> near_;
    mutable std::vector<std::uint64_t> scratch_;
};

/// Existence of a quasi-smooth member via semigroup membership.
bool exists_quasismooth(const WeightedFamily& fam);

/// Condition (ii) alone: the subset/semigroup test without the linear-cone escape.
bool iano_subset_condition(const WeightedFamily& fam);

bool general_member_quasismooth(const MonomialSystem& system);

/// Subset test restricted to the variables in `universe`; every monomial
/// must be supported inside it.
bool general_member_quasismooth(const MonomialSystem& system, std::uint64_t universe);

std::optional<std::uint64_t> quasismooth_failure(const MonomialSystem& system);

/// A monomial x_i^k or x_i^k x_j of the system, preferring the pure power,
/// then the smallest partner index j.
std::optional<Monomial> required_monomial(const MonomialSystem& system, std::size_t i);

/*
 * A polynomial with explicit nonzero rational coefficients over a monomial
 * system. Coefficients are aligned with system.monomials().
 */
class ExplicitPolynomial {
public:
    ExplicitPolynomial(MonomialSystem system, std::vector<BigRational> coefficients);

    static ExplicitPolynomial with_unit_coefficients(MonomialSystem system);
    /// Coefficients drawn uniformly from [1, max_coefficient].
    static ExplicitPolynomial with_random_coefficients(MonomialSystem system,
                                                       std::uint64_t seed,
                                                       std::uint64_t max_coefficient);

    const MonomialSystem& system() const noexcept { return system_; }
    const std::vector<BigRational>& coefficients() const noexcept { return coefficients_; }

    /// Coefficients reduced modulo a prime; throws CoefficientCollision.
    std::vector<Residue> reduced(std::uint64_t prime) const;

private:
    MonomialSystem system_;
    std::vector<BigRational> coefficients_;
};

struct SingularSearch {
    std::optional<std::vector<Residue>> point;
    bool exhaustive = false;       // every nonzero point was tested
    bool budget_exhausted = false; // the budget ran out before a witness appeared
    std::uint64_t points_tested = 0;
    std::uint64_t seed = 0;
};

/*
 * Looks for a nonzero point of the affine cone over F_p where the
 * polynomial and all its partial derivatives vanish. Exhaustive when
 * p^(n+2) <= budget, otherwise `budget` random nonzero points, half of
 * them uniform and half restricted to a random coordinate stratum.
 * A witness refutes quasi-smoothness of that reduction; no witness proves
 * nothing.
 */
SingularSearch singular_point_search(const ExplicitPolynomial& poly, std::uint64_t field_prime,
                                     std::uint64_t budget, std::uint64_t seed);

/// True iff the polynomial and every partial derivative vanish at the point mod p.
bool is_singular_point(const ExplicitPolynomial& poly, std::uint64_t field_prime,
                       const std::vector<Residue>& point);

} // namespace wph

#endif
