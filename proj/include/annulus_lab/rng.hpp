#pragma once

#include <cstdint>

namespace annulus_lab {

/// Counter-based generator: the i-th draw of stream s under seed k is a pure
/// function of (k, s, i), so parallel consumers get reproducible values no
/// matter how the work is split. Mixing is the SplitMix64 finaliser.
class CounterRng
{
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : key_(mix(seed ^ 0x9e3779b97f4a7c15ULL) ^ mix(stream + 0x632be59bd9b4e019ULL))
    {}

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t at(std::uint64_t counter) const noexcept { return mix(key_ ^ mix(counter)); }

    std::uint64_t next() noexcept { return at(counter_++); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo, hi] (inclusive); slight modulo bias is irrelevant here.
    std::int64_t integer(std::int64_t lo, std::int64_t hi) noexcept
    {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % span);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace annulus_lab
