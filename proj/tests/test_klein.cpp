#include <doctest.h>

#include "klein.hpp"
#include "random.hpp"

using namespace wph;

namespace {

BigInt signed_unit(long k) { return k % 2 == 0 ? BigInt(1) : BigInt(-1); }

// Monomials x_i^m x_{next(i)} with next a single cyclic permutation.
bool is_full_cycle(const MonomialSystem& system)
{
    const auto N = system.family().size();
    if (system.size() != N)
        return false;
    std::vector<std::size_t> next(N, N);
    for (const auto& m : system.monomials()) {
        std::size_t power = N, linear = N;
        for (std::size_t i = 0; i < N; ++i) {
            if (m.e[i] == 0)
                continue;
            if (m.e[i] == 1 && linear == N)
                linear = i;
            else if (power == N)
                power = i;
            else
                return false;
        }
        if (power == N || linear == N || next[power] != N)
            return false;
        next[power] = linear;
    }
    std::size_t at = 0;
    for (std::size_t step = 1; step < N; ++step) {
        at = next[at];
        if (at == 0 || at == N)
            return false;
    }
    return next[at] == 0;
}

} // namespace

TEST_SUITE("klein")
{
    TEST_CASE("klein_exists examples")
    {
        CHECK_FALSE(klein_exists(WeightedFamily({1, 1, 1, 2}, 4)));
        const auto quartic = klein_exists(WeightedFamily({1, 1, 1}, 4));
        REQUIRE(quartic);
        CHECK(quartic->cycle.indices == std::vector<std::size_t>{0, 1, 2});
        CHECK(quartic->cycle.exponents == std::vector<std::int64_t>{3, 3, 3});
        CHECK(quartic->cycle_count == 2);
        const auto cubic = klein_exists(WeightedFamily({1, 1, 1, 1, 1, 1}, 3));
        REQUIRE(cubic);
        CHECK(cubic->cycle.exponents == std::vector<std::int64_t>(6, 2));
        CHECK(cubic->monomials().size() == 6);
    }

    TEST_CASE("klein_quasismooth examples")
    {
        CHECK_FALSE(klein_quasismooth(WeightedFamily({1, 1, 1, 1}, 2)));
        CHECK(klein_quasismooth(WeightedFamily({1, 1, 1, 1, 1, 1}, 2)));
        CHECK(klein_quasismooth(WeightedFamily({1, 1, 1}, 4)));
        CHECK_THROWS_AS(klein_quasismooth(WeightedFamily({1, 1, 1, 2}, 4)), Error);
    }

    TEST_CASE("klein_singularity_R")
    {
        CHECK(klein_exists(WeightedFamily({1, 1, 1, 1}, 2))->R == 0);
        // 1 + 9 - 3 for the Klein quartic.
        CHECK(klein_exists(WeightedFamily({1, 1, 1}, 4))->R == 7);
        for (std::int64_t d : {3, 5, 7, 9}) {
            for (std::size_t vars = 3; vars <= 7; ++vars) {
                const auto data = klein_exists(WeightedFamily(std::vector<std::int64_t>(vars, 1), d));
                REQUIRE(data);
                CHECK(klein_singularity_R(*data) == data->R);
                CHECK(mpz_odd_p(data->R.get_mpz_t()));
            }
        }
    }

    TEST_CASE("R also vanishes on weighted families")
    {
        // K = (x0 + x1)(x2 + x3): unit coefficients give a singular K while a
        // general member of the same span is quasi-smooth.
        const WeightedFamily fam({1, 1, 2, 2}, 3);
        const auto data = klein_exists(fam);
        REQUIRE(data);
        CHECK(data->R == 0);
        CHECK(klein_quasismooth(fam));
        CHECK(general_member_quasismooth(data->monomials()));
        const auto k = ExplicitPolynomial::with_unit_coefficients(data->monomials());
        CHECK(is_singular_point(k, 5, {1, 4, 1, 4}));
        const auto general = ExplicitPolynomial::with_random_coefficients(data->monomials(), 3, 100);
        CHECK_FALSE(singular_point_search(general, 101, 2'000'000, default_seed).point);
    }

    TEST_CASE("klein_max_prime examples")
    {
        CHECK(klein_max_prime(WeightedFamily({1, 1, 1}, 4)).prime == std::uint64_t{7});
        CHECK(klein_max_prime(WeightedFamily({1, 1, 1, 1, 1}, 3)).prime == std::uint64_t{11});
        CHECK(klein_max_prime(WeightedFamily({1, 1, 1, 1}, 3)).prime == std::uint64_t{5});
        const auto quintic = klein_max_prime(WeightedFamily({1, 1, 1, 1}, 5));
        CHECK_FALSE(quintic.prime);
        CHECK(quintic.reason == "not-prime");
        CHECK(quintic.candidate == BigInt(51));
        const auto small = klein_max_prime(WeightedFamily({1, 1, 1, 1}, 2));
        CHECK_FALSE(small.prime);
        CHECK_THROWS_AS(klein_max_prime(WeightedFamily({1, 1, 1, 2}, 4)), Error);
        CHECK_THROWS_AS(klein_max_prime(WeightedFamily({1, 1, 2, 2}, 4)), Error);
    }

    TEST_CASE("max prime stays under the coprime bound and recomposes the product")
    {
        std::size_t primes = 0;
        for (std::size_t vars = 3; vars <= 5; ++vars) {
            std::vector<std::int64_t> a(vars, 1);
            for (;;) {
                for (std::int64_t d = 3; d <= 13; ++d) {
                    if (gcd_all(a) != 1)
                        break;
                    const WeightedFamily fam(a, d);
                    if (!fam.all_weights_coprime_to_degree() || d <= fam.max_weight())
                        continue;
                    const auto data = klein_exists(fam);
                    if (!data)
                        continue;
                    const auto mp = klein_max_prime(fam);
                    if (!mp.prime)
                        continue;
                    ++primes;
                    const auto n = fam.dimension();
                    CHECK(data->cycle.product() == BigInt(d) * *mp.prime - signed_unit(n + 1));
                    CHECK_FALSE(bound_coprime(fam).excludes(*mp.prime, d));
                }
                std::size_t i = 0;
                while (i < vars && a[i] == 4)
                    a[i++] = 1;
                if (i == vars)
                    break;
                ++a[i];
            }
        }
        CHECK(primes > 20);
    }

    TEST_CASE("eigenspace check")
    {
        const auto quartic = klein_eigenspace_check(WeightedFamily({1, 1, 1}, 4));
        REQUIRE(quartic.applicable);
        CHECK(quartic.p == 7);
        CHECK(quartic.surviving == 3);
        CHECK(quartic.total == 15);
        CHECK(quartic.equals_klein_set);
        CHECK(quartic.signature.to_string() == "(1,4,2)");

        const auto cubic = klein_eigenspace_check(WeightedFamily({1, 1, 1, 1, 1}, 3));
        REQUIRE(cubic.applicable);
        CHECK(cubic.surviving == 5);
        CHECK(cubic.total == 35);
        CHECK(cubic.equals_klein_set);

        const auto quintic = klein_eigenspace_check(WeightedFamily({1, 1, 1, 1}, 5));
        CHECK_FALSE(quintic.applicable);
        CHECK(quintic.reason == "not-prime");
    }

    TEST_CASE("eigenspace survivors match the oracle witness")
    {
        const std::vector<WeightedFamily> families{
            WeightedFamily({1, 1, 1}, 4), WeightedFamily({1, 1, 1, 1, 1}, 3),
            WeightedFamily({1, 1, 1}, 5), WeightedFamily({1, 1, 1, 1}, 3),
            WeightedFamily({1, 1, 2}, 5), WeightedFamily({1, 1, 1}, 8)};
        for (const auto& fam : families) {
            const auto check = klein_eigenspace_check(fam);
            if (!check.applicable || !check.equals_klein_set)
                continue;
            const auto v = oracle_exists_order(fam, prime_power_decompose(check.p));
            REQUIRE_MESSAGE(v.certified(), fam.to_string());
            // The oracle reports its lex-least class, which may run the cycle in
            // another order; its witness must still be a full Klein cycle.
            CHECK_MESSAGE(is_full_cycle(*v.witness), fam.to_string());
            CHECK(v.witness->size() == check.survivors->size());
        }
    }
}
