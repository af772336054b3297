#pragma once

// Keyed 64-bit mixing primitives shared by the permutation simulators and
// the sketches. Everything here is constexpr and stateless.

#include <bit>
#include <cstdint>

namespace bbmh {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// Domain-separation tags for seed derivation.
namespace tag {
inline constexpr std::uint64_t kPermutation = 0x7065726d75746531ULL;  // "permute1"
inline constexpr std::uint64_t kBucket = 0x6275636b65743031ULL;       // "bucket01"
inline constexpr std::uint64_t kSign = 0x7369676e73747231ULL;         // "signstr1"
inline constexpr std::uint64_t kProjection = 0x70726f6a65637431ULL;   // "project1"
inline constexpr std::uint64_t kSplit = 0x73706c6974303031ULL;        // "split001"
inline constexpr std::uint64_t kShuffle = 0x73687566666c6531ULL;      // "shuffle1"
inline constexpr std::uint64_t kData = 0x6461746167656e31ULL;         // "datagen1"
}  // namespace tag

// rrxmrrxmsx_0 (P. Evensen). A bijection on 64-bit words with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t v) noexcept {
  v ^= std::rotr(v, 25) ^ std::rotr(v, 50);
  v *= 0xA24BAED4963EE407ULL;
  v ^= std::rotr(v, 24) ^ std::rotr(v, 49);
  v *= 0x9FB21C651E98DF25ULL;
  return v ^ (v >> 28);
}

// Two-input derivation: mix64(mix64(parent ^ tag) + (index + 1) * gamma).
// The inner mix decorrelates parents that differ in few bits; the outer one
// is a splitmix-style counter step, so distinct indices never collide.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index,
                                    std::uint64_t domain = 0) noexcept {
  return mix64(mix64(parent ^ domain) + (index + 1) * kGoldenGamma);
}

__extension__ typedef unsigned __int128 uint128_t;

// Keyed hash of an element: a bijection in `element` for a fixed key.
constexpr std::uint64_t keyed_hash(std::uint64_t key, std::uint64_t element) noexcept {
  return mix64(key + element * kGoldenGamma);
}

// Maps a 64-bit hash onto [0, n) by multiply-high.
constexpr std::uint64_t reduce_range(std::uint64_t hash, std::uint64_t n) noexcept {
  return static_cast<std::uint64_t>((static_cast<uint128_t>(hash) * n) >> 64);
}

// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit_interval(std::uint64_t hash) noexcept {
  return static_cast<double>(hash >> 11) * 0x1.0p-53;
}

// Counter-based stream used wherever sequential random draws are needed
// (Fisher-Yates shuffles, data splits, SGD orderings, data generation).
class SplitMixStream {
 public:
  explicit constexpr SplitMixStream(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  // Exactly uniform on [0, n) (Lemire's rejection method). n must be > 0.
  constexpr std::uint64_t bounded(std::uint64_t n) noexcept {
    uint128_t product = static_cast<uint128_t>(next()) * n;
    auto low = static_cast<std::uint64_t>(product);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        product = static_cast<uint128_t>(next()) * n;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  constexpr double uniform() noexcept { return to_unit_interval(next()); }

 private:
  std::uint64_t state_;
};

}  // namespace bbmh
