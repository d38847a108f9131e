#pragma once

#include <cstdint>

// Counter-based randomness: every variate is a pure function of a key tuple
// (base_seed, stream indices), so simulations are reproducible and
// independent of worker scheduling. Substream derivation:
//   substream(base_seed, i) = splitmix64 state seeded by mixing i into
//   base_seed; per-draw keys mix further indices (sample, vertex, entry).

namespace subdiff::rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ splitmix64(b + 0x51ed270b0a1f2cadULL));
}

inline double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// One uniform variate in [0,1) keyed by up to three stream indices.
inline double uniform(std::uint64_t seed, std::uint64_t i1 = 0, std::uint64_t i2 = 0,
                      std::uint64_t i3 = 0) {
    return to_unit(mix(mix(mix(seed, i1), i2), i3));
}

// Sequential stream over a derived substream, for consumers that need an
// unbounded number of draws.
class Stream {
  public:
    Stream(std::uint64_t seed, std::uint64_t substream = 0)
        : state_(mix(seed, substream)) {}

    double next() { return to_unit(splitmix64(state_ += 0x9e3779b97f4a7c15ULL)); }

    std::uint64_t next_bits() { return splitmix64(state_ += 0x9e3779b97f4a7c15ULL); }

  private:
    std::uint64_t state_;
};

}  // namespace subdiff::rng
