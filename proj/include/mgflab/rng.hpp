#pragma once

#include <cstdint>

namespace mgflab {

/// SplitMix64: the fixed 64-bit generator used for all sampling.
/// One word of state, the standard finalizer constants.  Chosen because it
/// is trivially portable and the whole stream is pinned down by the seed,
/// which reports record for reproducibility.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw in the open interval (0, 1), 53-bit resolution.
    /// Never returns exactly 0 or 1, so quantile transforms stay finite.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

/// Derives the seed of an independent substream.  Equivalent to jumping the
/// base SplitMix64 stream to position `index` and reading one output word,
/// so distinct indices give decorrelated streams.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace mgflab
