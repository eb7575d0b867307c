#ifndef WPH_RANDOM_HPP
#define WPH_RANDOM_HPP

#include <cstdint>
#include <random>

namespace wph {

// mt19937_64 is bit-reproducible across standard libraries; the standard
// distributions are not, so bounded draws are done here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound), bound >= 1.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = -bound % bound;
        while (true) {
            const auto x = engine_();
            const auto product = static_cast<unsigned __int128>(x) * bound;
            if (static_cast<std::uint64_t>(product) >= limit)
                return static_cast<std::uint64_t>(product >> 64);
        }
    }

    /// Uniform in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

private:
    std::mt19937_64 engine_;
};

inline constexpr std::uint64_t default_seed = 20240917;

} // namespace wph

#endif
