#pragma once

#include <cstdint>

namespace snu {

/// Counter-based deterministic generator. Every draw is a pure function of
/// (seed, stream, counter), so independent streams (e.g. one per scale) can be
/// generated in parallel while staying reproducible across platforms.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

    std::uint64_t next_u64() { return mix(seed_, stream_, counter_++); }

    /// Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, 2^bits) for bits <= 64.
    std::uint64_t next_bits(unsigned bits) {
        if (bits >= 64) return next_u64();
        return next_u64() & ((std::uint64_t{1} << bits) - 1);
    }

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
        // splitmix64 finalizer applied to a distinct-multiplier combination.
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1) +
                          0xBF58476D1CE4E5B9ULL * (counter + 1);
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
};

} // namespace snu
