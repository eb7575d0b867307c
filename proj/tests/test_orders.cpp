#include <doctest.h>

#include <bit>
#include <set>

#include "orders.hpp"

using namespace wph;

namespace {

const WeightedFamily counterexample({3, 7, 2, 4, 5}, 37);

PrimePowerOrder pq(std::uint64_t q) { return prime_power_decompose(q); }

// Every signature and eigenvalue, no class reduction.
bool brute_force_order(const WeightedFamily& fam, std::uint64_t q)
{
    const auto all = enumerate_monomials(fam);
    const auto N = fam.size();
    std::vector<Residue> sigma(N, 0);
    for (;;) {
        if (effective_order(sigma, fam.weights(), q) == q) {
            for (Residue h = 0; h < q; ++h) {
                std::vector<Monomial> eigen;
                for (const auto& m : all.monomials()) {
                    Residue r = 0;
                    for (std::size_t i = 0; i < N; ++i)
                        r = (r + sigma[i] * m.e[i]) % q;
                    if (r == h)
                        eigen.push_back(m);
                }
                if (!eigen.empty() && general_member_quasismooth(MonomialSystem(fam, eigen)))
                    return true;
            }
        }
        std::size_t i = 0;
        while (i < N && sigma[i] == q - 1)
            sigma[i++] = 0;
        if (i == N)
            return false;
        ++sigma[i];
    }
}

std::set<std::uint64_t> certified_primes(const WeightedFamily& fam, std::uint64_t max_q)
{
    std::set<std::uint64_t> out;
    for (const auto& v : admissible_orders(fam, max_q)) {
        if (v.q.r == 1 && v.certified())
            out.insert(v.q.q);
    }
    return out;
}

} // namespace

TEST_SUITE("orders")
{
    TEST_CASE("chain digraph edges")
    {
        const auto g = chain_digraph(counterexample, pq(23));
        bool found = false;
        for (const auto& [j, m] : g[0]) {
            if (j == 1) {
                found = true;
                CHECK(m == 10);
            }
        }
        CHECK(found);

        const WeightedFamily fam({1, 1, 1, 2}, 4);
        const auto h = cycle_digraph(fam);
        CHECK(h[3].empty());
        for (const auto& [j, m] : h[3])
            CHECK(fam.weight(j) * 1 + 2 * m == 4);
        for (std::size_t i = 0; i < 3; ++i) {
            bool into_heavy = false;
            for (const auto& [j, m] : h[i])
                into_heavy = into_heavy || (j == 3 && m == 2);
            CHECK(into_heavy);
        }
        CHECK_THROWS_AS(chain_digraph(WeightedFamily({1, 1, 1, 2, 3}, 6), pq(3)), Error);
    }

    TEST_CASE("simple cycles are enumerated once in lexicographic order")
    {
        // Complete digraph on 4 vertices: 6 + 8 + 6 = 20 simple cycles.
        ChainDigraph g(4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                if (i != j)
                    g[i].push_back({j, 1});
        std::vector<std::vector<std::size_t>> seen;
        for_each_simple_cycle(g, [&](const CycleChain& c) {
            seen.push_back(c.indices);
            return true;
        });
        CHECK(seen.size() == 20);
        CHECK(std::is_sorted(seen.begin(), seen.end()));
        for (const auto& c : seen)
            CHECK(*std::min_element(c.begin(), c.end()) == c.front());
        std::set<std::vector<std::size_t>> unique(seen.begin(), seen.end());
        CHECK(unique.size() == seen.size());
        CHECK_THROWS_AS(for_each_simple_cycle(g, [](const CycleChain&) { return true; }, 5),
                        Error);
    }

    TEST_CASE("necessary_condition examples")
    {
        const auto chain = necessary_condition(counterexample, pq(23));
        REQUIRE(chain);
        CHECK(chain->indices == std::vector<std::size_t>{0, 1, 2});
        CHECK(chain->exponents == std::vector<std::int64_t>{10, 5, 17});
        CHECK(chain->product() == 850);
        CHECK(chain_congruence(*chain, 23));
        CHECK(telescoping_holds(counterexample, *chain));

        const WeightedFamily ones6({1, 1, 1, 1, 1, 1}, 3);
        const auto c11 = necessary_condition(ones6, pq(11));
        REQUIRE(c11);
        CHECK(c11->ell() == 4);
        CHECK(c11->product() == 32);
        CHECK_FALSE(necessary_condition(ones6, pq(13)));
    }

    TEST_CASE("signature_from_chain examples")
    {
        const auto chain = *necessary_condition(counterexample, pq(23));
        const auto sig = signature_from_chain(counterexample, chain, 23);
        CHECK(sig.to_string() == "(1,13,4,*,*)");
        CHECK(sig.padded() == std::vector<Residue>{1, 13, 4, 0, 0});

        const WeightedFamily ones6({1, 1, 1, 1, 1, 1}, 3);
        const auto c11 = *necessary_condition(ones6, pq(11));
        const auto s11 = signature_from_chain(ones6, c11, 11);
        CHECK(s11.to_string() == "(1,9,4,3,5,*)");
    }

    TEST_CASE("chain_invariance_check")
    {
        const auto chain = *necessary_condition(counterexample, pq(23));
        std::vector<Residue> sigma{1, 13, 4, 0, 0};
        CHECK(chain_invariance_check(chain, sigma, 23));
        // The zero signature solves the homogeneous system; sigma_0 = 1 rules it out.
        const std::vector<Residue> zero(5, 0);
        CHECK(chain_invariance_check(chain, zero, 23));
        for (std::size_t i = 0; i < 3; ++i) {
            auto bumped = sigma;
            bumped[i] = (bumped[i] + 1) % 23;
            CHECK_FALSE(chain_invariance_check(chain, bumped, 23));
        }
    }

    TEST_CASE("every qualifying chain satisfies its own invariance")
    {
        const std::vector<WeightedFamily> families{counterexample,
                                                   WeightedFamily({1, 1, 1, 1, 1, 1}, 3),
                                                   WeightedFamily({1, 1, 1, 2, 3}, 6),
                                                   WeightedFamily({1, 1, 1, 1, 2}, 4)};
        for (const auto& fam : families) {
            for (std::uint64_t q : {5, 7, 11, 13, 23, 25, 31}) {
                std::vector<CycleChain> chains;
                try {
                    chains = qualifying_chains(fam, pq(q));
                } catch (const Error&) {
                    continue;
                }
                for (const auto& c : chains) {
                    REQUIRE(chain_is_valid(fam, c));
                    REQUIRE(chain_congruence(c, q));
                    REQUIRE(telescoping_holds(fam, c));
                    const auto s = signature_from_chain(fam, c, q);
                    REQUIRE(chain_invariance_check(c, s.padded(), q));
                }
            }
        }
    }

    TEST_CASE("sufficient_condition examples")
    {
        const WeightedFamily ones6({1, 1, 1, 1, 1, 1}, 3);
        const auto v11 = sufficient_condition(ones6, pq(11));
        REQUIRE(v11);
        CHECK(v11->certified());
        CHECK(certificate_is_sound(ones6, *v11));

        const WeightedFamily cf({1, 1, 1, 2, 3}, 6);
        const auto v7 = sufficient_condition(cf, pq(7));
        REQUIRE(v7);
        CHECK(v7->chain->exponents == std::vector<std::int64_t>{5, 5, 5});
        CHECK(v7->witness->contains(Monomial{{0, 0, 0, 3, 0}}));
        CHECK(v7->witness->contains(Monomial{{0, 0, 0, 0, 2}}));
        CHECK(certificate_is_sound(cf, *v7));

        CHECK_FALSE(sufficient_condition(counterexample, pq(23)));
    }

    TEST_CASE("divides_d_criterion examples")
    {
        const WeightedFamily cf({1, 1, 1, 2, 3}, 6);
        const auto v7 = divides_d_criterion(cf, 7);
        CHECK(v7.certified());
        CHECK(v7.provenance == "divides-d(c)");
        CHECK(v7.chain->ell() == 2);
        const auto v5 = divides_d_criterion(cf, 5);
        CHECK(v5.certified());
        CHECK(v5.provenance == "divides-d(b)");
        const auto v11 = divides_d_criterion(cf, 11);
        CHECK(v11.status == VerdictStatus::Refuted);
        for (auto p : {2, 3, 5, 7})
            CHECK(certificate_is_sound(cf, divides_d_criterion(cf, p)));
        CHECK_THROWS_AS(divides_d_criterion(counterexample, 23), Error);
    }

    TEST_CASE("bounds")
    {
        const auto b1 = bound_divides_d(WeightedFamily({1, 1, 1, 2, 3}, 6));
        CHECK(b1.bound_string() == "25");
        CHECK(b1.excludes(29, 6));
        CHECK_FALSE(b1.excludes(23, 6));
        CHECK(bound_divides_d(WeightedFamily({1, 1, 1, 1, 1}, 3)).bound_string() == "16");
        CHECK(bound_coprime(WeightedFamily({1, 1, 1, 1, 1}, 3)).bound_string() == "16");
        CHECK(bound_coprime(WeightedFamily({1, 1, 1}, 4)).bound_string() == "9");
        CHECK(bound_coprime(WeightedFamily({1, 1, 1, 1}, 5)).bound_string() == "64");
        CHECK_THROWS_AS(bound_coprime(WeightedFamily({1, 1, 1, 2, 3}, 6)), Error);
        CHECK_THROWS_AS(bound_divides_d(counterexample), Error);
    }

    TEST_CASE("oracle examples")
    {
        const auto v23 = oracle_exists_order(counterexample, pq(23));
        CHECK(v23.status == VerdictStatus::Refuted);
        CHECK(v23.provenance == "oracle");

        const WeightedFamily ones5({1, 1, 1, 1, 1}, 3);
        const auto v11 = oracle_exists_order(ones5, pq(11));
        REQUIRE(v11.certified());
        CHECK(v11.witness->size() == 5);
        for (const auto& m : v11.witness->monomials()) {
            CHECK(m.total_degree() == 3);
            CHECK(std::popcount(m.support_mask()) == 2);
        }
        CHECK(certificate_is_sound(ones5, v11));

        const auto v7 = oracle_exists_order(WeightedFamily({1, 1, 1, 2, 3}, 6), pq(7));
        CHECK(v7.certified());

        Budgets tiny;
        tiny.oracle_classes = 10;
        const auto cut = oracle_exists_order(counterexample, pq(23), tiny);
        CHECK(cut.status == VerdictStatus::Unresolved);
    }

    TEST_CASE("oracle agrees with brute force over all signatures")
    {
        std::size_t compared = 0, lattice_refuted = 0;
        for (std::size_t vars = 3; vars <= 4; ++vars) {
            std::vector<std::int64_t> a(vars, 1);
            for (;;) {
                if (std::is_sorted(a.begin(), a.end()) && gcd_all(a) == 1) {
                    for (std::int64_t d = 3; d <= (vars == 3 ? 8 : 6); ++d) {
                        const WeightedFamily fam(a, d);
                        if (!order_hypothesis_violations(fam).empty())
                            continue;
                        for (std::uint64_t q : {2, 3, 4, 5, 7}) {
                            if (vars == 4 && q == 7)
                                continue;
                            const auto v = oracle_exists_order(fam, pq(q));
                            REQUIRE(v.status != VerdictStatus::Unresolved);
                            REQUIRE_MESSAGE(v.certified() == brute_force_order(fam, q),
                                            fam.to_string() << " q=" << q);
                            if (v.certified())
                                REQUIRE(certificate_is_sound(fam, v));
                            const auto lattice = required_monomial_lattice_bound(fam);
                            if (lattice != 0 && lattice % static_cast<unsigned long>(q) != 0) {
                                REQUIRE_MESSAGE(!v.certified(), fam.to_string() << " q=" << q);
                                ++lattice_refuted;
                            }
                            ++compared;
                        }
                    }
                }
                std::size_t i = 0;
                while (i < vars && a[i] == 3)
                    a[i++] = 1;
                if (i == vars)
                    break;
                ++a[i];
            }
        }
        CHECK(compared > 50);
        CHECK(lattice_refuted > 0);
    }

    TEST_CASE("required-monomial lattice bound")
    {
        // Fermat-type quintic threefold: only x_i^5 or x_i^4 x_j rows.
        const WeightedFamily quintic({1, 1, 1, 1, 1}, 5);
        const auto b = required_monomial_lattice_bound(quintic);
        CHECK(b != 0);
        CHECK(b % 5 == 0);
        CHECK(b % 7 != 0);
        CHECK(required_monomial_lattice_bound(counterexample) % 23 == 0);
        CHECK(required_monomial_lattice_bound(quintic, 10) == 0);
    }

    TEST_CASE("canonical signatures are class invariants")
    {
        const WeightedFamily fam({1, 1, 2, 3}, 7);
        const std::uint64_t q = 5;
        const std::vector<Residue> sigma{0, 1, 3, 2};
        const auto base = canonical_signature(fam, sigma, 4, q);
        for (Residue c = 0; c < q; ++c) {
            for (Residue u = 1; u < q; ++u) {
                std::vector<Residue> moved(4);
                for (std::size_t i = 0; i < 4; ++i)
                    moved[i] = (u * (sigma[i] + c * fam.weight(i))) % q;
                const auto h = (u * (4 + c * 7)) % q;
                CHECK(canonical_signature(fam, moved, h, q) == base);
            }
        }
    }

    TEST_CASE("admissible_orders reproduces the known tables")
    {
        CHECK(certified_primes(WeightedFamily({1, 1, 1, 1, 1}, 3), 16)
              == std::set<std::uint64_t>{2, 3, 5, 11});
        const WeightedFamily f4({1, 1, 1, 1, 2}, 4);
        CHECK(certified_primes(f4, default_max_order(f4, 4096))
              == std::set<std::uint64_t>{2, 3, 5, 7});
        const WeightedFamily f6({1, 1, 2, 2, 3}, 6);
        CHECK(certified_primes(f6, default_max_order(f6, 4096))
              == std::set<std::uint64_t>{2, 3, 5});
    }

    TEST_CASE("decide_order routing")
    {
        const auto hyp = decide_order(WeightedFamily({1, 1, 1, 1}, 4), pq(5));
        CHECK(hyp.status == VerdictStatus::HypothesisViolated);
        CHECK(hyp.provenance == "hypotheses");
        const auto big = decide_order(WeightedFamily({1, 1, 1, 2, 3}, 6), pq(29));
        CHECK(big.status == VerdictStatus::Refuted);
        const auto nec = decide_order(WeightedFamily({1, 1, 1, 1, 1, 1}, 3), pq(13));
        CHECK(nec.status == VerdictStatus::Refuted);
        const auto ce = decide_order(counterexample, pq(23));
        CHECK(ce.status == VerdictStatus::Refuted);
        CHECK(ce.provenance == "oracle");
        REQUIRE(ce.chain);
        CHECK(ce.signature->to_string() == "(1,13,4,*,*)");
    }

    TEST_CASE("off-chain constraints of the counterexample contradict")
    {
        const auto chain = *necessary_condition(counterexample, pq(23));
        const auto sig = signature_from_chain(counterexample, chain, 23);
        std::set<Residue> from_x1, from_x2;
        for (const auto& c : off_chain_constraints(counterexample, sig)) {
            if (c.k != 4)
                continue;
            if (c.j == 1 && c.m == 6)
                from_x1.insert(c.solutions.begin(), c.solutions.end());
            if (c.j == 2 && c.m == 7)
                from_x2.insert(c.solutions.begin(), c.solutions.end());
        }
        CHECK(from_x1 == std::set<Residue>{17});
        CHECK(from_x2 == std::set<Residue>{6});
    }
}
