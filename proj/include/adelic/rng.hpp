#pragma once

#include <cmath>
#include <cstdint>

namespace adelic {

// SplitMix64 stream with keyed construction. Streams derived from distinct
// (seed, k1, k2) triples are statistically independent, so samples can be
// drawn in any order (or in parallel) and still reproduce bit-identically
// for a fixed global seed.
class RngStream {
  public:
    explicit RngStream(std::uint64_t state) : state_(state) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static RngStream keyed(std::uint64_t seed, std::uint64_t k1, std::uint64_t k2) {
        std::uint64_t h = mix(seed + 0x9e3779b97f4a7c15ULL);
        h = mix(h ^ (k1 + 0xbf58476d1ce4e5b9ULL));
        h = mix(h ^ (k2 + 0x94d049bb133111ebULL));
        return RngStream(h);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform on (0, 1]; never returns 0, so log() is always finite.
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform on {0, ..., n-1} by rejection from a power-of-two envelope.
    std::uint64_t next_below(std::uint64_t n) {
        std::uint64_t mask = n - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        for (;;) {
            std::uint64_t v = next_u64() & mask;
            if (v < n) return v;
        }
    }

    double exponential(double rate) { return -std::log(next_unit()) / rate; }

  private:
    std::uint64_t state_;
};

}  // namespace adelic
