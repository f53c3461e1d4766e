#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qlio {

/// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v)
{
    return mix64(h ^ mix64(v));
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::string_view s)
{
    for (char c : s) h = hash_combine(h, static_cast<std::uint8_t>(c));
    return hash_combine(h, s.size());
}

/// Seeded random stream identified by (seed, stream id).
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard, and doubles are built from the top 53 bits directly rather than
/// through std::uniform_real_distribution (whose algorithm is unspecified).
/// Together this gives the same sequence on every conforming platform.
class random_source
{
public:
    explicit random_source(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream), engine_(hash_combine(mix64(seed), stream))
    {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    /// Independent child stream; the parent's position is irrelevant.
    random_source fork(std::uint64_t tag) const
    {
        return random_source(seed_, hash_combine(stream_, tag + 1));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi].
    double uniform(double lo, double hi)
    {
        const double x = lo + (hi - lo) * uniform();
        return x > hi ? hi : x;
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

} // namespace qlio
