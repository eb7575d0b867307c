#include <doctest.h>

#include <numeric>

#include "arith.hpp"
#include "random.hpp"

using namespace wph;

namespace {

bool brute_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t k = 2; k * k <= n; ++k) {
        if (n % k == 0)
            return false;
    }
    return true;
}

bool brute_semigroup(const std::vector<std::int64_t>& gens, std::int64_t target)
{
    std::vector<bool> reach(static_cast<std::size_t>(target) + 1, false);
    reach[0] = true;
    for (std::int64_t t = 1; t <= target; ++t) {
        for (auto g : gens) {
            if (g <= t && reach[static_cast<std::size_t>(t - g)])
                reach[static_cast<std::size_t>(t)] = true;
        }
    }
    return reach[static_cast<std::size_t>(target)];
}

} // namespace

TEST_SUITE("arith")
{
    TEST_CASE("is_prime examples")
    {
        CHECK(is_prime(std::uint64_t{23}));
        CHECK_FALSE(is_prime(std::uint64_t{1}));
        CHECK_FALSE(is_prime(std::uint64_t{850}));
        CHECK_FALSE(is_prime(std::uint64_t{0}));
        CHECK(is_prime(std::uint64_t{18446744073709551557ULL}));
        CHECK_FALSE(is_prime(std::uint64_t{18446744073709551555ULL}));
    }

    TEST_CASE("is_prime agrees with trial division")
    {
        for (std::uint64_t n = 0; n < 20'000; ++n)
            REQUIRE_MESSAGE(is_prime(n) == brute_prime(n), n);
    }

    TEST_CASE("is_prime on big integers")
    {
        CHECK(is_prime(BigInt(7)));
        CHECK_FALSE(is_prime(BigInt(51)));
        CHECK_FALSE(is_prime(BigInt(0)));
        BigInt composite("340282366920938463463374607431768211457"); // 2^128 + 1
        composite *= 3;
        CHECK_FALSE(is_prime(composite));
        // 2^127 - 1 has no small factor and does not fit in 64 bits.
        CHECK_THROWS_AS(is_prime(BigInt("170141183460469231731687303715884105727")), Error);
    }

    TEST_CASE("prime_power_decompose examples")
    {
        CHECK(prime_power_decompose(23) == PrimePowerOrder{23, 1, 23});
        CHECK(prime_power_decompose(8) == PrimePowerOrder{2, 3, 8});
        CHECK_THROWS_AS(prime_power_decompose(12), Error);
        CHECK_THROWS_AS(prime_power_decompose(1), Error);
        CHECK_FALSE(as_prime_power(0).has_value());
    }

    TEST_CASE("prime powers recompose")
    {
        const auto powers = prime_powers_up_to(5000);
        std::size_t count = 0;
        for (std::uint64_t q = 2; q <= 5000; ++q) {
            const auto pp = as_prime_power(q);
            if (!pp)
                continue;
            ++count;
            REQUIRE(brute_prime(pp->p));
            REQUIRE(checked_pow(pp->p, pp->r) == q);
            REQUIRE(pp->q == q);
        }
        CHECK(powers.size() == count);
        for (std::size_t i = 1; i < powers.size(); ++i)
            CHECK(powers[i - 1].q < powers[i].q);
    }

    TEST_CASE("gcd_all examples")
    {
        const std::vector<std::int64_t> a{3, 7, 2, 4, 5}, b{2, 4, 6}, c{5};
        CHECK(gcd_all(a) == 1);
        CHECK(gcd_all(b) == 2);
        CHECK(gcd_all(c) == 5);
    }

    TEST_CASE("semigroup_contains examples")
    {
        const std::vector<std::int64_t> g23{2, 3}, g37{3, 7};
        CHECK(semigroup_contains(g23, 6));
        CHECK_FALSE(semigroup_contains(g23, 1));
        CHECK_FALSE(semigroup_contains(g37, 11));
        CHECK(semigroup_contains(g37, 0));
    }

    TEST_CASE("semigroup_contains agrees with dynamic programming")
    {
        Rng rng(7);
        for (int trial = 0; trial < 2000; ++trial) {
            std::vector<std::int64_t> gens(rng.between(1, 4));
            for (auto& g : gens)
                g = static_cast<std::int64_t>(rng.between(1, 30));
            const auto target = static_cast<std::int64_t>(rng.between(0, 200));
            REQUIRE(semigroup_contains(gens, target) == brute_semigroup(gens, target));
        }
    }

    TEST_CASE("effective_order examples")
    {
        const std::vector<std::int64_t> a{3, 7, 2, 4, 5};
        const std::vector<Residue> zero(5, 0), own{3, 7, 2, 4, 5};
        CHECK(effective_order(zero, a, 23) == 1);
        CHECK(effective_order(own, a, 23) == 1);
        const std::vector<Residue> sigma{1, 13, 4, 17, 0};
        CHECK(effective_order(sigma, a, 23) == 23);
        const std::vector<std::int64_t> ones{1, 1, 1};
        const std::vector<Residue> s8{0, 2, 4};
        CHECK(effective_order(s8, ones, 8) == 4);
    }

    TEST_CASE("modular helpers")
    {
        CHECK(mod_reduce(-1, 23) == 22);
        CHECK(mod_reduce(BigInt(-850), 23) == 1);
        CHECK(pow_mod(2, 10, 1000) == 24);
        CHECK(inverse_mod(3, 7) == Residue{5});
        CHECK_FALSE(inverse_mod(2, 8).has_value());
        CHECK(solve_linear_congruence(6, 1, 23) == std::vector<Residue>{19});
        CHECK(solve_linear_congruence(2, 0, 8) == std::vector<Residue>{0, 4});
        CHECK(solve_linear_congruence(2, 1, 8).empty());
        CHECK(divisors(12) == std::vector<std::uint64_t>{1, 2, 3, 4, 6, 12});
        CHECK_THROWS_AS(checked_pow(10, 30), Error);
    }

    TEST_CASE("largest_invariant_factor examples")
    {
        CHECK(largest_invariant_factor({{2, 0}, {0, 3}}) == 6);
        CHECK(largest_invariant_factor({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}) == 12);
        CHECK(largest_invariant_factor({{1, 2}, {2, 4}}) == 0);
        CHECK(largest_invariant_factor({{5, 0, -1}, {0, 5, -1}}) == 5);
        CHECK(largest_invariant_factor({{0, 0, 7}}) == 7);
    }

    TEST_CASE("largest_invariant_factor agrees with determinantal divisors")
    {
        // For two rows s_2 = d_2 / d_1, d_k the gcd of the k x k minors.
        Rng rng(7);
        for (int trial = 0; trial < 2000; ++trial) {
            IntMatrix m(2, std::vector<BigInt>(3));
            std::int64_t d1 = 0;
            for (auto& row : m) {
                for (auto& x : row) {
                    const auto v = static_cast<std::int64_t>(rng.between(0, 12)) - 6;
                    x = v;
                    d1 = std::gcd(d1, v);
                }
            }
            std::int64_t d2 = 0;
            for (int i = 0; i < 3; ++i) {
                for (int j = i + 1; j < 3; ++j) {
                    const BigInt minor = m[0][i] * m[1][j] - m[0][j] * m[1][i];
                    d2 = std::gcd(d2, minor.get_si());
                }
            }
            const BigInt expected = d2 == 0 ? 0 : d2 / d1;
            REQUIRE(largest_invariant_factor(m) == expected);
        }
    }

    TEST_CASE("Rng is reproducible and bounded")
    {
        Rng a(42), b(42);
        for (int i = 0; i < 1000; ++i) {
            const auto x = a.between(3, 9);
            CHECK(x == b.between(3, 9));
            CHECK(x >= 3);
            CHECK(x <= 9);
        }
    }
}
