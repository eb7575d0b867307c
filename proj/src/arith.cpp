#include "arith.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <utility>

namespace wph {

const char* error_code_name(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NotAPrimePower: return "NotAPrimePower";
    case ErrorCode::NotWellFormed: return "NotWellFormed";
    case ErrorCode::NotNormalizable: return "NotNormalizable";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::EmptySystem: return "EmptySystem";
    case ErrorCode::CoefficientCollision: return "CoefficientCollision";
    case ErrorCode::NoKleinHypersurface: return "NoKleinHypersurface";
    case ErrorCode::PrimalityUndecided: return "PrimalityUndecided";
    }
    return "Unknown";
}

Residue pow_mod(Residue base, std::uint64_t exp, std::uint64_t q) noexcept
{
    if (q == 1)
        return 0;
    Residue result = 1;
    base %= q;
    while (exp) {
        if (exp & 1)
            result = mul_mod(result, base, q);
        base = mul_mod(base, base, q);
        exp >>= 1;
    }
    return result;
}

namespace {

bool miller_rabin_witness(std::uint64_t n, std::uint64_t a, std::uint64_t d, unsigned s) noexcept
{
    Residue x = pow_mod(a % n, d, n);
    if (x == 1 || x == n - 1)
        return false;
    for (unsigned i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1)
            return false;
    }
    return true;
}

} // namespace

bool is_prime(std::uint64_t n) noexcept
{
    if (n < 2)
        return false;
    static constexpr std::uint64_t small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (auto p : small) {
        if (n % p == 0)
            return n == p;
    }
    std::uint64_t d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // This base set is a proof of primality for every n < 3.3e24.
    for (auto a : small) {
        if (miller_rabin_witness(n, a, d, s))
            return false;
    }
    return true;
}

bool is_prime(const BigInt& n)
{
    if (n < 2)
        return false;
    if (mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
        const std::uint64_t v = static_cast<std::uint64_t>(mpz_get_ui(n.get_mpz_t()));
        static_assert(sizeof(unsigned long) == 8, "64-bit unsigned long expected");
        return is_prime(v);
    }
    // A Miller-Rabin witness is a proof of compositeness; a pass is not a proof.
    const int verdict = mpz_probab_prime_p(n.get_mpz_t(), 32);
    if (verdict == 0)
        return false;
    if (verdict == 2)
        return true;
    fail(ErrorCode::PrimalityUndecided,
         "cannot certify primality of " + n.get_str() + " (exceeds 64 bits)");
}

std::optional<PrimePowerOrder> as_prime_power(std::uint64_t q) noexcept
{
    if (q < 2)
        return std::nullopt;
    if (is_prime(q))
        return PrimePowerOrder{q, 1, q};
    // The largest exponent with an exact root gives the smallest base.
    const BigInt big(static_cast<unsigned long>(q));
    for (unsigned r = 63; r >= 2; --r) {
        BigInt root;
        if (mpz_root(root.get_mpz_t(), big.get_mpz_t(), r) != 0 && root >= 2) {
            const auto p = static_cast<std::uint64_t>(root.get_ui());
            if (is_prime(p))
                return PrimePowerOrder{p, r, q};
            return std::nullopt;
        }
    }
    return std::nullopt;
}

PrimePowerOrder prime_power_decompose(std::uint64_t q)
{
    if (q < 2)
        fail(ErrorCode::InvalidArgument, "prime power decomposition needs q >= 2");
    if (auto pp = as_prime_power(q))
        return *pp;
    fail(ErrorCode::NotAPrimePower, std::to_string(q) + " is not a prime power");
}

std::vector<PrimePowerOrder> prime_powers_up_to(std::uint64_t limit)
{
    std::vector<PrimePowerOrder> out;
    if (limit < 2)
        return out;
    for (std::uint64_t p = 2; p <= limit; ++p) {
        if (!is_prime(p))
            continue;
        std::uint64_t q = p;
        unsigned r = 1;
        while (true) {
            out.push_back({p, r, q});
            if (q > limit / p)
                break;
            q *= p;
            ++r;
            if (q > limit)
                break;
        }
    }
    std::sort(out.begin(), out.end(),
              [](const PrimePowerOrder& x, const PrimePowerOrder& y) { return x.q < y.q; });
    return out;
}

std::int64_t gcd_all(std::span<const std::int64_t> xs)
{
    if (xs.empty())
        fail(ErrorCode::EmptyInput, "gcd of an empty list");
    std::int64_t g = 0;
    for (auto x : xs) {
        if (x < 1)
            fail(ErrorCode::InvalidArgument, "gcd_all expects positive integers");
        g = std::gcd(g, x);
    }
    return g;
}

bool semigroup_contains(std::span<const std::int64_t> generators, std::int64_t target)
{
    if (generators.empty())
        fail(ErrorCode::EmptyInput, "semigroup with no generators");
    if (target < 0)
        return false;
    if (target == 0)
        return true;
    for (auto g : generators) {
        if (g < 1)
            fail(ErrorCode::InvalidArgument, "semigroup generators must be positive");
    }
    // Apery set with respect to the smallest generator: least[r] is the
    // smallest semigroup element congruent to r modulo that generator.
    const std::int64_t base = *std::min_element(generators.begin(), generators.end());
    constexpr std::int64_t unreachable = std::numeric_limits<std::int64_t>::max();
    std::vector<std::int64_t> least(static_cast<std::size_t>(base), unreachable);
    least[0] = 0;
    using Item = std::pair<std::int64_t, std::int64_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> frontier;
    frontier.push({0, 0});
    while (!frontier.empty()) {
        auto [value, residue] = frontier.top();
        frontier.pop();
        if (value != least[static_cast<std::size_t>(residue)])
            continue;
        if (value > target)
            break;
        for (auto g : generators) {
            const std::int64_t next = value + g;
            const std::int64_t r = next % base;
            if (next < least[static_cast<std::size_t>(r)]) {
                least[static_cast<std::size_t>(r)] = next;
                frontier.push({next, r});
            }
        }
    }
    return least[static_cast<std::size_t>(target % base)] <= target;
}

std::vector<std::uint64_t> divisors(std::uint64_t n)
{
    std::vector<std::uint64_t> small, large;
    for (std::uint64_t k = 1; k * k <= n; ++k) {
        if (n % k == 0) {
            small.push_back(k);
            if (k != n / k)
                large.push_back(n / k);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

std::uint64_t effective_order(std::span<const Residue> sigma,
                              std::span<const std::int64_t> weights,
                              std::uint64_t q)
{
    if (sigma.size() != weights.size())
        fail(ErrorCode::InvalidArgument, "signature and weights differ in length");
    if (q < 2)
        fail(ErrorCode::InvalidArgument, "modulus must be at least 2");
    std::vector<Residue> reduced(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i)
        reduced[i] = mod_reduce(weights[i], q);

    for (auto k : divisors(q)) {
        for (std::uint64_t c = 0; c < q; ++c) {
            bool hit = true;
            for (std::size_t i = 0; i < sigma.size() && hit; ++i)
                hit = mul_mod(k, sigma[i] % q, q) == mul_mod(c, reduced[i], q);
            if (hit)
                return k;
        }
    }
    return q;
}

Residue mod_reduce(const BigInt& x, std::uint64_t q)
{
    BigInt r;
    mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(q));
    return static_cast<Residue>(r.get_ui());
}

std::optional<Residue> inverse_mod(Residue a, std::uint64_t q) noexcept
{
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(q), new_r = static_cast<std::int64_t>(a % q);
    while (new_r != 0) {
        const std::int64_t quotient = r / new_r;
        t = std::exchange(new_t, t - quotient * new_t);
        r = std::exchange(new_r, r - quotient * new_r);
    }
    if (r != 1)
        return std::nullopt;
    return mod_reduce(t, q);
}

std::vector<Residue> solve_linear_congruence(Residue a, Residue b, std::uint64_t q)
{
    a %= q;
    const Residue rhs = (q - b % q) % q;
    const auto g = std::gcd(a, q);
    std::vector<Residue> out;
    if (g == 0) {
        // a == 0 and q == 0 cannot happen; a == 0 means g == q.
        return out;
    }
    if (rhs % g != 0)
        return out;
    const std::uint64_t q_red = q / g;
    const Residue base = q_red == 1
        ? 0
        : mul_mod(rhs / g, *inverse_mod(a / g, q_red), q_red);
    for (std::uint64_t k = 0; k < g; ++k)
        out.push_back(base + k * q_red);
    return out;
}

BigInt largest_invariant_factor(IntMatrix m)
{
    const std::size_t rows = m.size();
    if (rows == 0)
        return 1;
    const std::size_t cols = m.front().size();
    BigInt last = 0;
    std::size_t rank = 0;
    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        for (;;) {
            // Smallest nonzero entry of the remaining block becomes the pivot.
            std::size_t pi = rows, pj = cols;
            for (std::size_t i = t; i < rows; ++i) {
                for (std::size_t j = t; j < cols; ++j) {
                    if (m[i][j] != 0 && (pi == rows || abs(m[i][j]) < abs(m[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
                }
            }
            if (pi == rows)
                return rank == rows ? last : BigInt(0);
            std::swap(m[t], m[pi]);
            for (auto& row : m)
                std::swap(row[t], row[pj]);

            bool clean = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                if (m[i][t] == 0)
                    continue;
                const BigInt f = m[i][t] / m[t][t];
                for (std::size_t j = t; j < cols; ++j)
                    m[i][j] -= f * m[t][j];
                clean = clean && m[i][t] == 0;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (m[t][j] == 0)
                    continue;
                const BigInt f = m[t][j] / m[t][t];
                for (std::size_t i = t; i < rows; ++i)
                    m[i][j] -= f * m[i][t];
                clean = clean && m[t][j] == 0;
            }
            if (!clean)
                continue;
            // The pivot must divide the rest; otherwise fold the offending row in.
            bool divides = true;
            for (std::size_t i = t + 1; i < rows && divides; ++i) {
                for (std::size_t j = t + 1; j < cols; ++j) {
                    if (m[i][j] % m[t][t] != 0) {
                        for (std::size_t k = t; k < cols; ++k)
                            m[t][k] += m[i][k];
                        divides = false;
                        break;
                    }
                }
            }
            if (divides)
                break;
        }
        last = abs(m[t][t]);
        ++rank;
    }
    return rank == rows ? last : BigInt(0);
}

std::uint64_t checked_pow(std::uint64_t base, unsigned exp)
{
    std::uint64_t result = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (__builtin_mul_overflow(result, base, &result))
            fail(ErrorCode::BudgetExceeded, "integer power overflows 64 bits");
    }
    return result;
}

} // namespace wph
