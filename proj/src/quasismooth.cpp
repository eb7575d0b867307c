#include "quasismooth.hpp"

#include <algorithm>
#include <bit>

#include "random.hpp"

namespace wph {

namespace {

constexpr std::uint64_t low_half[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

// After this, bit I is set iff some set bit S satisfies S subset-of I.
void subset_closure(std::uint64_t* words, std::size_t count, std::size_t vars)
{
    for (std::size_t i = 0; i < std::min<std::size_t>(vars, 6); ++i) {
        const unsigned shift = 1u << i;
        for (std::size_t k = 0; k < count; ++k)
            words[k] |= (words[k] & low_half[i]) << shift;
    }
    for (std::size_t i = 6; i < vars; ++i) {
        const std::size_t step = std::size_t{1} << (i - 6);
        for (std::size_t k = 0; k < count; ++k) {
            if (k & step)
                words[k] |= words[k ^ step];
        }
    }
}

inline bool test_bit(const std::uint64_t* words, std::uint64_t index)
{
    return (words[index >> 6] >> (index & 63)) & 1;
}

inline void set_bit(std::uint64_t* words, std::uint64_t index)
{
    words[index >> 6] |= std::uint64_t{1} << (index & 63);
}

} // namespace

SupportProfile::SupportProfile(std::size_t variables)
    : vars_(variables),
      words_(std::max<std::size_t>(1, (std::size_t{1} << variables) / 64)),
      pure_(words_, 0),
      near_(variables * words_, 0)
{
    if (variables == 0 || variables > WeightedFamily::max_variables)
        fail(ErrorCode::InvalidArgument, "unsupported number of variables");
}

void SupportProfile::clear()
{
    std::fill(pure_.begin(), pure_.end(), 0);
    std::fill(near_.begin(), near_.end(), 0);
    count_ = 0;
}

void SupportProfile::add(std::uint64_t support, std::uint64_t linear_variables)
{
    set_bit(pure_.data(), support);
    for (auto rest = linear_variables; rest; rest &= rest - 1) {
        const auto j = static_cast<std::size_t>(std::countr_zero(rest));
        set_bit(near_.data() + j * words_, support & ~(std::uint64_t{1} << j));
    }
    ++count_;
}

void SupportProfile::add(const Monomial& m)
{
    std::uint64_t support = 0, linear = 0;
    for (std::size_t i = 0; i < m.e.size(); ++i) {
        if (m.e[i])
            support |= std::uint64_t{1} << i;
        if (m.e[i] == 1)
            linear |= std::uint64_t{1} << i;
    }
    add(support, linear);
}

bool SupportProfile::singletons_pass(std::uint64_t universe) const
{
    for (auto rest = universe; rest; rest &= rest - 1) {
        const auto i = static_cast<std::size_t>(std::countr_zero(rest));
        const std::uint64_t single = std::uint64_t{1} << i;
        if (test_bit(pure_.data(), single))
            continue;
        bool found = false;
        for (auto others = universe & ~single; others && !found; others &= others - 1) {
            const auto j = static_cast<std::size_t>(std::countr_zero(others));
            const auto* row = near_.data() + j * words_;
            found = test_bit(row, single) || test_bit(row, 0);
        }
        if (!found)
            return false;
    }
    return true;
}

std::optional<std::uint64_t> SupportProfile::first_failure(std::uint64_t universe) const
{
    universe &= full_mask();
    if (universe == 0)
        return std::nullopt;
    const bool quick_reject = !singletons_pass(universe);

    scratch_.assign(pure_.begin(), pure_.end());
    scratch_.insert(scratch_.end(), near_.begin(), near_.end());
    for (std::size_t block = 0; block <= vars_; ++block)
        subset_closure(scratch_.data() + block * words_, words_, vars_);
    const std::uint64_t* pure_closed = scratch_.data();
    const std::uint64_t* near_closed = scratch_.data() + words_;

    std::uint64_t subset = 0;
    do {
        subset = (subset - universe) & universe;
        if (quick_reject && std::popcount(subset) != 1)
            continue;
        if (test_bit(pure_closed, subset))
            continue;
        int partners = 0;
        const int needed = std::popcount(subset);
        for (auto rest = universe & ~subset; rest && partners < needed; rest &= rest - 1) {
            const auto j = static_cast<std::size_t>(std::countr_zero(rest));
            if (test_bit(near_closed + j * words_, subset))
                ++partners;
        }
        if (partners < needed)
            return subset;
    } while (subset != universe);
    return std::nullopt;
}

bool iano_subset_condition(const WeightedFamily& fam)
{
    const auto& a = fam.weights();
    const auto d = fam.degree();
    const std::size_t count = a.size();
    std::vector<std::int64_t> gens;
    for (std::uint64_t subset = 1; subset < (std::uint64_t{1} << count); ++subset) {
        gens.clear();
        for (std::size_t i = 0; i < count; ++i) {
            if (subset >> i & 1)
                gens.push_back(a[i]);
        }
        if (semigroup_contains(gens, d))
            continue;
        int partners = 0;
        for (std::size_t j = 0; j < count; ++j) {
            if (!(subset >> j & 1) && semigroup_contains(gens, d - a[j]))
                ++partners;
        }
        if (partners < std::popcount(subset))
            return false;
    }
    return true;
}

bool exists_quasismooth(const WeightedFamily& fam)
{
    if (!well_formed(fam))
        fail(ErrorCode::NotWellFormed, "exists_quasismooth needs a well-formed family");
    return is_linear_cone(fam) || iano_subset_condition(fam);
}

std::optional<std::uint64_t> quasismooth_failure(const MonomialSystem& system)
{
    if (system.empty())
        fail(ErrorCode::EmptySystem, "quasi-smoothness of an empty linear system");
    SupportProfile profile(system.family().size());
    for (const auto& m : system.monomials())
        profile.add(m);
    return profile.first_failure(profile.full_mask());
}

bool general_member_quasismooth(const MonomialSystem& system)
{
    return !quasismooth_failure(system);
}

bool general_member_quasismooth(const MonomialSystem& system, std::uint64_t universe)
{
    if (system.empty())
        fail(ErrorCode::EmptySystem, "quasi-smoothness of an empty linear system");
    SupportProfile profile(system.family().size());
    for (const auto& m : system.monomials()) {
        if (m.support_mask() & ~universe)
            fail(ErrorCode::InvalidArgument,
                 "monomial " + m.to_string() + " leaves the variable subset");
        profile.add(m);
    }
    return profile.passes(universe);
}

std::optional<Monomial> required_monomial(const MonomialSystem& system, std::size_t i)
{
    if (i >= system.family().size())
        fail(ErrorCode::InvalidArgument, "variable index out of range");
    std::optional<Monomial> best;
    std::size_t best_partner = system.family().size();
    for (const auto& m : system.monomials()) {
        if (m.e[i] == 0)
            continue;
        const auto support = m.support_mask();
        const auto others = support & ~(std::uint64_t{1} << i);
        if (others == 0)
            return m;
        if (std::popcount(others) == 1) {
            const auto j = static_cast<std::size_t>(std::countr_zero(others));
            if (m.e[j] == 1 && j < best_partner) {
                best = m;
                best_partner = j;
            }
        }
    }
    return best;
}

ExplicitPolynomial::ExplicitPolynomial(MonomialSystem system, std::vector<BigRational> coefficients)
    : system_(std::move(system)), coefficients_(std::move(coefficients))
{
    if (coefficients_.size() != system_.size())
        fail(ErrorCode::InvalidArgument, "one coefficient per monomial is required");
    for (auto& c : coefficients_) {
        c.canonicalize();
        if (c == 0)
            fail(ErrorCode::InvalidArgument, "zero coefficients are not stored");
    }
}

ExplicitPolynomial ExplicitPolynomial::with_unit_coefficients(MonomialSystem system)
{
    std::vector<BigRational> ones(system.size(), BigRational(1));
    return ExplicitPolynomial(std::move(system), std::move(ones));
}

ExplicitPolynomial ExplicitPolynomial::with_random_coefficients(MonomialSystem system,
                                                                std::uint64_t seed,
                                                                std::uint64_t max_coefficient)
{
    Rng rng(seed);
    std::vector<BigRational> coefficients;
    coefficients.reserve(system.size());
    for (std::size_t k = 0; k < system.size(); ++k)
        coefficients.emplace_back(static_cast<unsigned long>(rng.between(1, max_coefficient)));
    return ExplicitPolynomial(std::move(system), std::move(coefficients));
}

std::vector<Residue> ExplicitPolynomial::reduced(std::uint64_t prime) const
{
    if (!is_prime(prime))
        fail(ErrorCode::InvalidArgument, std::to_string(prime) + " is not prime");
    std::vector<Residue> out;
    out.reserve(coefficients_.size());
    for (std::size_t k = 0; k < coefficients_.size(); ++k) {
        const auto num = mod_reduce(coefficients_[k].get_num(), prime);
        const auto den = mod_reduce(coefficients_[k].get_den(), prime);
        if (num == 0 || den == 0)
            fail(ErrorCode::CoefficientCollision,
                 "coefficient of " + system_.monomials()[k].to_string() + " vanishes mod "
                     + std::to_string(prime));
        out.push_back(mul_mod(num, *inverse_mod(den, prime), prime));
    }
    return out;
}

namespace {

class GradientEvaluator {
public:
    GradientEvaluator(const ExplicitPolynomial& poly, std::uint64_t prime)
        : prime_(prime), vars_(poly.system().family().size()), coefficients_(poly.reduced(prime))
    {
        for (const auto& m : poly.system().monomials())
            exponents_.push_back(m.e);
        max_exp_.assign(vars_, 0);
        for (const auto& e : exponents_) {
            for (std::size_t i = 0; i < vars_; ++i)
                max_exp_[i] = std::max(max_exp_[i], e[i]);
        }
        powers_.resize(vars_);
        for (std::size_t i = 0; i < vars_; ++i)
            powers_[i].resize(max_exp_[i] + 1);
    }

    bool singular_at(const std::vector<Residue>& x)
    {
        for (std::size_t i = 0; i < vars_; ++i) {
            auto& row = powers_[i];
            row[0] = 1;
            for (std::size_t k = 1; k < row.size(); ++k)
                row[k] = mul_mod(row[k - 1], x[i], prime_);
        }
        Residue value = 0;
        for (std::size_t t = 0; t < exponents_.size(); ++t) {
            Residue term = coefficients_[t];
            for (std::size_t i = 0; i < vars_; ++i)
                term = mul_mod(term, powers_[i][exponents_[t][i]], prime_);
            value = (value + term) % prime_;
        }
        if (value != 0)
            return false;
        for (std::size_t i = 0; i < vars_; ++i) {
            Residue partial = 0;
            for (std::size_t t = 0; t < exponents_.size(); ++t) {
                const auto ei = exponents_[t][i];
                if (ei == 0)
                    continue;
                Residue term = mul_mod(coefficients_[t], ei % prime_, prime_);
                for (std::size_t j = 0; j < vars_; ++j) {
                    const auto ej = j == i ? ei - 1 : exponents_[t][j];
                    term = mul_mod(term, powers_[j][ej], prime_);
                }
                partial = (partial + term) % prime_;
            }
            if (partial != 0)
                return false;
        }
        return true;
    }

private:
    std::uint64_t prime_;
    std::size_t vars_;
    std::vector<Residue> coefficients_;
    std::vector<Exponents> exponents_;
    std::vector<std::uint32_t> max_exp_;
    std::vector<std::vector<Residue>> powers_;
};

} // namespace

bool is_singular_point(const ExplicitPolynomial& poly, std::uint64_t field_prime,
                       const std::vector<Residue>& point)
{
    if (point.size() != poly.system().family().size())
        fail(ErrorCode::InvalidArgument, "point has the wrong number of coordinates");
    GradientEvaluator eval(poly, field_prime);
    std::vector<Residue> reduced(point.size());
    for (std::size_t i = 0; i < point.size(); ++i)
        reduced[i] = point[i] % field_prime;
    return eval.singular_at(reduced);
}

SingularSearch singular_point_search(const ExplicitPolynomial& poly, std::uint64_t field_prime,
                                     std::uint64_t budget, std::uint64_t seed)
{
    SingularSearch result;
    result.seed = seed;
    GradientEvaluator eval(poly, field_prime);
    const std::size_t vars = poly.system().family().size();

    // Total number of points, saturating at budget + 1.
    std::uint64_t space = 1;
    for (std::size_t i = 0; i < vars && space <= budget; ++i) {
        if (__builtin_mul_overflow(space, field_prime, &space))
            space = budget + 1;
    }

    std::vector<Residue> x(vars, 0);
    if (budget > 0 && space <= budget) {
        result.exhaustive = true;
        while (true) {
            std::size_t i = vars;
            while (i > 0) {
                --i;
                if (++x[i] < field_prime)
                    break;
                x[i] = 0;
                if (i == 0) {
                    return result;
                }
            }
            ++result.points_tested;
            if (eval.singular_at(x)) {
                result.point = x;
                return result;
            }
        }
    }

    // Odd draws first pick a coordinate stratum uniformly, then nonzero
    // coordinates on it: singular points of non-quasi-smooth members tend to
    // sit on coordinate strata, which uniform sampling almost never hits.
    Rng rng(seed);
    const std::uint64_t strata = (std::uint64_t{1} << vars) - 1;
    for (std::uint64_t k = 0; k < budget; ++k) {
        if (k % 2 == 1) {
            const auto stratum = rng.between(1, strata);
            for (std::size_t i = 0; i < vars; ++i)
                x[i] = (stratum >> i & 1) ? rng.between(1, field_prime - 1) : 0;
        } else {
            bool nonzero = false;
            while (!nonzero) {
                for (auto& c : x) {
                    c = rng.below(field_prime);
                    nonzero = nonzero || c != 0;
                }
            }
        }
        ++result.points_tested;
        if (eval.singular_at(x)) {
            result.point = x;
            return result;
        }
    }
    result.budget_exhausted = true;
    return result;
}

} // namespace wph
