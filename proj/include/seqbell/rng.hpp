#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11) plus a
// substream factory. Counter-based generation makes every (seed, stream)
// pair an independent sequence that can be created on demand, so sampling
// stays reproducible no matter how the surrounding loops are ordered.
//
// Layout: the 64-bit seed forms the key; a stream id occupies the high two
// counter words and the block index the low two, giving 2^64 blocks (four
// 32-bit outputs each) per stream.

#include <array>
#include <cstdint>
#include <limits>

namespace seqbell::rng {

class Philox4x32 {
  public:
    using result_type = std::uint64_t;

    Philox4x32(std::uint64_t key, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() {
        return std::numeric_limits<result_type>::max();
    }

    // Two 32-bit lanes per call; a fresh block every second call.
    result_type operator()();

    // One full block for the given block index, independent of generator
    // state (used by the known-answer tests).
    static std::array<std::uint32_t, 4> block(
        const std::array<std::uint32_t, 4>& counter,
        const std::array<std::uint32_t, 2>& key);

  private:
    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t block_index_ = 0;
    std::array<std::uint32_t, 4> lanes_{};
    int next_lane_pair_ = 2;  // 0 or 1 when lanes_ holds an unconsumed block
};

// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x);

// Derives independent generators for (space, index) pairs under one seed.
// Space and index must each fit in 32 bits so distinct pairs are guaranteed
// distinct streams.
struct SubstreamRng {
    std::uint64_t seed = 0;
    std::uint64_t space = 0;

    Philox4x32 stream(std::uint64_t index) const;
};

}  // namespace seqbell::rng
