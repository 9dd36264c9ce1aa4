#include "seqbell/rng.hpp"

#include <stdexcept>

namespace seqbell::rng {

namespace {

constexpr std::uint32_t mult0 = 0xD2511F53u;
constexpr std::uint32_t mult1 = 0xCD9E8D57u;
constexpr std::uint32_t weyl0 = 0x9E3779B9u;  // golden ratio
constexpr std::uint32_t weyl1 = 0xBB67AE85u;  // sqrt(3) - 1

inline void round_once(std::array<std::uint32_t, 4>& c,
                       const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = std::uint64_t(mult0) * c[0];
    const std::uint64_t p1 = std::uint64_t(mult1) * c[2];
    const std::uint32_t hi0 = std::uint32_t(p0 >> 32);
    const std::uint32_t lo0 = std::uint32_t(p0);
    const std::uint32_t hi1 = std::uint32_t(p1 >> 32);
    const std::uint32_t lo1 = std::uint32_t(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> Philox4x32::block(
    const std::array<std::uint32_t, 4>& counter,
    const std::array<std::uint32_t, 2>& key) {
    std::array<std::uint32_t, 4> c = counter;
    std::array<std::uint32_t, 2> k = key;
    round_once(c, k);
    for (int r = 1; r < 10; ++r) {
        k[0] += weyl0;
        k[1] += weyl1;
        round_once(c, k);
    }
    return c;
}

Philox4x32::Philox4x32(std::uint64_t key, std::uint64_t stream)
    : key_{std::uint32_t(key), std::uint32_t(key >> 32)}, stream_(stream) {}

Philox4x32::result_type Philox4x32::operator()() {
    if (next_lane_pair_ == 2) {
        const std::array<std::uint32_t, 4> counter = {
            std::uint32_t(block_index_), std::uint32_t(block_index_ >> 32),
            std::uint32_t(stream_), std::uint32_t(stream_ >> 32)};
        lanes_ = block(counter, key_);
        ++block_index_;
        next_lane_pair_ = 0;
    }
    const int i = 2 * next_lane_pair_;
    ++next_lane_pair_;
    return result_type(lanes_[i]) | (result_type(lanes_[i + 1]) << 32);
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

Philox4x32 SubstreamRng::stream(std::uint64_t index) const {
    if (space > 0xFFFFFFFFull || index > 0xFFFFFFFFull) {
        throw std::invalid_argument("SubstreamRng: space/index exceed 32 bits");
    }
    return Philox4x32(seed, splitmix64((space << 32) | index));
}

}  // namespace seqbell::rng
