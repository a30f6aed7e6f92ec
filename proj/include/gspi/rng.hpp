#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace gspi {

/// splitmix64 finalizer, used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for sub-stream (master, i0, i1, ...). Stable across platforms.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept
{
    std::uint64_t s = mix64(master);
    for (auto p : path)
        s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
    return s;
}

/// Random source with platform-independent draws.
///
/// std::mt19937_64's output sequence is fixed by the standard, but the
/// <random> distributions are not, so the conversions live here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace gspi
