#ifndef WPH_ARITH_HPP
#define WPH_ARITH_HPP

// Exact integer, modular and numerical-semigroup primitives.
//
// Machine integers are used for weights, degrees and moduli (all inputs are
// range-checked at construction); products that can grow without bound are
// carried as GMP integers.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "error.hpp"

namespace wph {

using BigInt = mpz_class;
using BigRational = mpq_class;

using Residue = std::uint64_t;

/// A prime power q = p^r with p verified prime and r >= 1.
struct PrimePowerOrder {
    std::uint64_t p = 0;
    unsigned r = 0;
    std::uint64_t q = 0;

    friend bool operator==(const PrimePowerOrder&, const PrimePowerOrder&) = default;
};

bool is_prime(std::uint64_t n) noexcept;

// Deterministic for values that fit in 64 bits; larger values are decided
// only when a small factor exists, otherwise PrimalityUndecided is thrown.
bool is_prime(const BigInt& n);

PrimePowerOrder prime_power_decompose(std::uint64_t q);
std::optional<PrimePowerOrder> as_prime_power(std::uint64_t q) noexcept;

/// All prime powers 2 <= q <= limit, ascending.
std::vector<PrimePowerOrder> prime_powers_up_to(std::uint64_t limit);

std::int64_t gcd_all(std::span<const std::int64_t> xs);

/// True iff target is a nonnegative integer combination of the generators.
bool semigroup_contains(std::span<const std::int64_t> generators, std::int64_t target);

// Order of sigma in (Z/q)^k modulo the cyclic subgroup generated by the
// weight vector reduced mod q.
std::uint64_t effective_order(std::span<const Residue> sigma,
                              std::span<const std::int64_t> weights,
                              std::uint64_t q);

inline Residue mod_reduce(std::int64_t x, std::uint64_t q) noexcept
{
    const auto m = static_cast<std::int64_t>(q);
    std::int64_t r = x % m;
    return static_cast<Residue>(r < 0 ? r + m : r);
}

inline Residue mul_mod(Residue a, Residue b, std::uint64_t q) noexcept
{
    return static_cast<Residue>((static_cast<unsigned __int128>(a) * b) % q);
}

Residue pow_mod(Residue base, std::uint64_t exp, std::uint64_t q) noexcept;

Residue mod_reduce(const BigInt& x, std::uint64_t q);

/// Inverse of a modulo q, if gcd(a, q) = 1.
std::optional<Residue> inverse_mod(Residue a, std::uint64_t q) noexcept;

/// Solutions x in [0, q) of a*x + b = 0 (mod q), ascending.
std::vector<Residue> solve_linear_congruence(Residue a, Residue b, std::uint64_t q);

std::vector<std::uint64_t> divisors(std::uint64_t n);

std::uint64_t checked_pow(std::uint64_t base, unsigned exp);

using IntMatrix = std::vector<std::vector<BigInt>>;

/// Last Smith invariant factor s_rows of a rows x cols matrix; zero when the
/// rank is below the number of rows.
BigInt largest_invariant_factor(IntMatrix m);

} // namespace wph

#endif
