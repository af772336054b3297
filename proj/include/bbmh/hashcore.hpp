#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace bbmh::hashcore {

// A set of distinct feature indices over the universe {0, ..., D-1}.
class SparseSet {
 public:
  SparseSet() = default;

  // `indices` must be strictly increasing and below `universe_size`.
  SparseSet(std::uint64_t universe_size, std::vector<std::uint64_t> indices);

  // Sorts and deduplicates before validating.
  static SparseSet from_unsorted(std::uint64_t universe_size, std::vector<std::uint64_t> indices);

  std::uint64_t universe_size() const noexcept { return universe_size_; }
  std::span<const std::uint64_t> indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }

  friend bool operator==(const SparseSet&, const SparseSet&) = default;

 private:
  std::uint64_t universe_size_ = 0;
  std::vector<std::uint64_t> indices_;
};

enum class PermutationMode : std::uint8_t {
  // Materialized Fisher-Yates shuffle of [0, D); a true uniform bijection.
  exact_permutation,
  // Keyed 64-bit mixing per element; values live in [0, 2^64).
  hashed_permutation,
};

// Largest universe for which exact permutations are materialized.
inline constexpr std::uint64_t kMaxExactUniverse = std::uint64_t{1} << 20;

// Upper bound on k * D table entries held by one exact-mode family (1 GiB).
inline constexpr std::uint64_t kMaxExactTableEntries = std::uint64_t{1} << 28;

// In hashed mode the minimum is taken over 64-bit outputs, so the effective
// universe of the collision theory is 2^64. This is the closest representable
// value and is what estimate::PairStats should use for hashed signatures.
inline constexpr std::uint64_t kHashedUniverse = ~std::uint64_t{0};

// k seed-derived permutation simulators pi_0 .. pi_{k-1} over [0, D).
// Permutation j depends only on (master_seed, j). Immutable once built.
class HashFamily {
 public:
  HashFamily(std::uint64_t master_seed, std::uint32_t k, std::uint64_t universe_size,
             PermutationMode mode);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint32_t k() const noexcept { return static_cast<std::uint32_t>(keys_.size()); }
  std::uint64_t universe_size() const noexcept { return universe_size_; }
  PermutationMode mode() const noexcept { return mode_; }

  // Key of permutation j (the Fisher-Yates stream seed in exact mode).
  std::uint64_t key(std::uint32_t j) const { return keys_.at(j); }

  // pi_j(element). `element` must be below universe_size().
  std::uint64_t apply(std::uint32_t j, std::uint64_t element) const;

  // Whole image table of permutation j (exact mode only).
  std::span<const std::uint32_t> permutation(std::uint32_t j) const;

  friend bool operator==(const HashFamily&, const HashFamily&) = default;

 private:
  std::uint64_t master_seed_;
  std::uint64_t universe_size_;
  PermutationMode mode_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> table_;  // k * D images, exact mode only
};

HashFamily build_family(std::uint64_t master_seed, std::uint32_t k, std::uint64_t universe_size,
                        PermutationMode mode);

// z_j = min over i in S of pi_j(i), for every j.
struct MinhashSignature {
  std::vector<std::uint64_t> values;

  std::uint32_t k() const noexcept { return static_cast<std::uint32_t>(values.size()); }
  friend bool operator==(const MinhashSignature&, const MinhashSignature&) = default;
};

MinhashSignature minhash(const HashFamily& family, const SparseSet& s);

// Same as above on a raw ascending index list; used by the streaming pipeline.
MinhashSignature minhash(const HashFamily& family, std::span<const std::uint64_t> indices);
MinhashSignature minhash(const HashFamily& family, std::span<const std::uint32_t> indices);

inline constexpr unsigned kMaxBits = 16;

// k values of b bits each, bit-packed little-endian within bytes in index
// order: bit t of value j sits at stream position j*b + t. Pad bits are zero.
class BbitSignature {
 public:
  BbitSignature() = default;

  BbitSignature(unsigned b, std::span<const std::uint16_t> values);

  // Adopts an already packed payload of exactly packed_size(k, b) bytes.
  static BbitSignature from_packed(std::uint32_t k, unsigned b, std::vector<std::uint8_t> packed);

  static std::size_t packed_size(std::uint32_t k, unsigned b) noexcept {
    return (static_cast<std::size_t>(k) * b + 7) / 8;
  }

  std::uint32_t k() const noexcept { return k_; }
  unsigned b() const noexcept { return b_; }
  std::span<const std::uint8_t> packed() const noexcept { return packed_; }

  std::uint16_t value(std::uint32_t j) const;
  std::vector<std::uint16_t> values() const;

  friend bool operator==(const BbitSignature&, const BbitSignature&) = default;

 private:
  std::uint32_t k_ = 0;
  unsigned b_ = 0;
  std::vector<std::uint8_t> packed_;
};

// e_j = z_j mod 2^b.
BbitSignature truncate_b(const MinhashSignature& sig, unsigned b);

// Number of positions j with equal b-bit values.
std::uint32_t match_count(const BbitSignature& a, const BbitSignature& c);

// Number of positions j with z_{a,j} == z_{c,j} (full minwise values).
std::uint32_t match_count(const MinhashSignature& a, const MinhashSignature& c);

}  // namespace bbmh::hashcore
