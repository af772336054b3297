#include "bbmh/hashcore.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "bbmh/error.hpp"
#include "bbmh/mix.hpp"

namespace bbmh::hashcore {

SparseSet::SparseSet(std::uint64_t universe_size, std::vector<std::uint64_t> indices)
    : universe_size_(universe_size), indices_(std::move(indices)) {
  if (universe_size_ == 0) throw InvalidArgument("SparseSet: universe size must be positive");
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= universe_size_) {
      throw InvalidArgument("SparseSet: index " + std::to_string(indices_[i]) +
                            " outside universe of size " + std::to_string(universe_size_));
    }
    if (i > 0 && indices_[i] <= indices_[i - 1]) {
      throw InvalidArgument("SparseSet: indices must be strictly increasing");
    }
  }
}

SparseSet SparseSet::from_unsorted(std::uint64_t universe_size, std::vector<std::uint64_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return SparseSet(universe_size, std::move(indices));
}

HashFamily::HashFamily(std::uint64_t master_seed, std::uint32_t k, std::uint64_t universe_size,
                       PermutationMode mode)
    : master_seed_(master_seed), universe_size_(universe_size), mode_(mode) {
  if (k == 0) throw InvalidArgument("build_family: k must be at least 1");
  if (universe_size == 0) throw InvalidArgument("build_family: D must be at least 1");

  keys_.resize(k);
  for (std::uint32_t j = 0; j < k; ++j) keys_[j] = derive_seed(master_seed, j, tag::kPermutation);

  if (mode != PermutationMode::exact_permutation) return;

  if (universe_size > kMaxExactUniverse) {
    throw InvalidArgument("build_family: exact permutations are limited to D <= 2^20");
  }
  if (static_cast<std::uint64_t>(k) * universe_size > kMaxExactTableEntries) {
    throw InvalidArgument("build_family: k * D exceeds the exact-permutation table budget");
  }
  const auto d = static_cast<std::size_t>(universe_size);
  table_.resize(static_cast<std::size_t>(k) * d);
  for (std::uint32_t j = 0; j < k; ++j) {
    auto* perm = table_.data() + static_cast<std::size_t>(j) * d;
    std::iota(perm, perm + d, std::uint32_t{0});
    SplitMixStream stream(keys_[j]);
    for (std::size_t i = d - 1; i > 0; --i) {
      const auto swap_with = static_cast<std::size_t>(stream.bounded(i + 1));
      std::swap(perm[i], perm[swap_with]);
    }
  }
}

std::uint64_t HashFamily::apply(std::uint32_t j, std::uint64_t element) const {
  if (j >= k()) throw InvalidArgument("HashFamily::apply: permutation index out of range");
  if (element >= universe_size_) throw InvalidArgument("HashFamily::apply: element outside universe");
  if (mode_ == PermutationMode::hashed_permutation) return keyed_hash(keys_[j], element);
  return table_[static_cast<std::size_t>(j) * universe_size_ + element];
}

std::span<const std::uint32_t> HashFamily::permutation(std::uint32_t j) const {
  if (mode_ != PermutationMode::exact_permutation) {
    throw InvalidArgument("HashFamily::permutation: only exact-mode families are materialized");
  }
  if (j >= k()) throw InvalidArgument("HashFamily::permutation: index out of range");
  const auto d = static_cast<std::size_t>(universe_size_);
  return {table_.data() + static_cast<std::size_t>(j) * d, d};
}

HashFamily build_family(std::uint64_t master_seed, std::uint32_t k, std::uint64_t universe_size,
                        PermutationMode mode) {
  return HashFamily(master_seed, k, universe_size, mode);
}

namespace {

template <typename Index>
MinhashSignature minhash_impl(const HashFamily& family, std::span<const Index> indices) {
  if (indices.empty()) throw EmptySetError("minhash: the minimum over an empty set is undefined");
  if (static_cast<std::uint64_t>(indices.back()) >= family.universe_size()) {
    throw InvalidArgument("minhash: set element outside the family's universe");
  }
  const std::uint32_t k = family.k();
  MinhashSignature sig;
  sig.values.assign(k, std::numeric_limits<std::uint64_t>::max());

  if (family.mode() == PermutationMode::hashed_permutation) {
    for (std::uint32_t j = 0; j < k; ++j) {
      const std::uint64_t key = family.key(j);
      std::uint64_t z = std::numeric_limits<std::uint64_t>::max();
      for (const Index i : indices) z = std::min(z, keyed_hash(key, i));
      sig.values[j] = z;
    }
  } else {
    for (std::uint32_t j = 0; j < k; ++j) {
      const auto perm = family.permutation(j);
      std::uint32_t z = std::numeric_limits<std::uint32_t>::max();
      for (const Index i : indices) z = std::min(z, perm[static_cast<std::size_t>(i)]);
      sig.values[j] = z;
    }
  }
  return sig;
}

}  // namespace

MinhashSignature minhash(const HashFamily& family, const SparseSet& s) {
  if (s.empty()) throw EmptySetError("minhash: the minimum over an empty set is undefined");
  return minhash_impl(family, s.indices());
}

MinhashSignature minhash(const HashFamily& family, std::span<const std::uint64_t> indices) {
  return minhash_impl(family, indices);
}

MinhashSignature minhash(const HashFamily& family, std::span<const std::uint32_t> indices) {
  return minhash_impl(family, indices);
}

namespace {

void check_bits(unsigned b) {
  if (b < 1 || b > kMaxBits) {
    throw InvalidArgument("b must lie in [1, 16], got " + std::to_string(b));
  }
}

}  // namespace

BbitSignature::BbitSignature(unsigned b, std::span<const std::uint16_t> values)
    : k_(static_cast<std::uint32_t>(values.size())), b_(b) {
  check_bits(b);
  packed_.assign(packed_size(k_, b_), 0);
  const std::uint32_t limit = std::uint32_t{1} << b;
  std::size_t pos = 0;
  for (const std::uint16_t v : values) {
    if (v >= limit) throw InvalidArgument("BbitSignature: value does not fit in b bits");
    for (unsigned t = 0; t < b; ++t, ++pos) {
      if ((v >> t) & 1u) packed_[pos >> 3] |= static_cast<std::uint8_t>(1u << (pos & 7));
    }
  }
}

BbitSignature BbitSignature::from_packed(std::uint32_t k, unsigned b, std::vector<std::uint8_t> packed) {
  check_bits(b);
  if (packed.size() != packed_size(k, b)) {
    throw FormatError("BbitSignature: payload has " + std::to_string(packed.size()) +
                      " bytes, expected " + std::to_string(packed_size(k, b)));
  }
  const std::size_t used_bits = static_cast<std::size_t>(k) * b;
  if (used_bits % 8 != 0) {
    const auto pad_mask = static_cast<std::uint8_t>(0xFFu << (used_bits % 8));
    if (packed.back() & pad_mask) throw FormatError("BbitSignature: nonzero pad bits");
  }
  BbitSignature sig;
  sig.k_ = k;
  sig.b_ = b;
  sig.packed_ = std::move(packed);
  return sig;
}

std::uint16_t BbitSignature::value(std::uint32_t j) const {
  if (j >= k_) throw InvalidArgument("BbitSignature::value: index out of range");
  std::size_t pos = static_cast<std::size_t>(j) * b_;
  std::uint32_t v = 0;
  for (unsigned t = 0; t < b_; ++t, ++pos) {
    v |= static_cast<std::uint32_t>((packed_[pos >> 3] >> (pos & 7)) & 1u) << t;
  }
  return static_cast<std::uint16_t>(v);
}

std::vector<std::uint16_t> BbitSignature::values() const {
  std::vector<std::uint16_t> out(k_);
  for (std::uint32_t j = 0; j < k_; ++j) out[j] = value(j);
  return out;
}

BbitSignature truncate_b(const MinhashSignature& sig, unsigned b) {
  check_bits(b);
  const std::uint64_t mask = (std::uint64_t{1} << b) - 1;
  std::vector<std::uint16_t> low(sig.values.size());
  for (std::size_t j = 0; j < low.size(); ++j) low[j] = static_cast<std::uint16_t>(sig.values[j] & mask);
  return BbitSignature(b, low);
}

std::uint32_t match_count(const BbitSignature& a, const BbitSignature& c) {
  if (a.k() != c.k() || a.b() != c.b()) {
    throw IncompatibleSignature("match_count: signatures differ in k or b");
  }
  const auto va = a.values();
  const auto vc = c.values();
  std::uint32_t t = 0;
  for (std::size_t j = 0; j < va.size(); ++j) t += (va[j] == vc[j]);
  return t;
}

std::uint32_t match_count(const MinhashSignature& a, const MinhashSignature& c) {
  if (a.k() != c.k()) throw IncompatibleSignature("match_count: signatures differ in k");
  std::uint32_t t = 0;
  for (std::size_t j = 0; j < a.values.size(); ++j) t += (a.values[j] == c.values[j]);
  return t;
}

}  // namespace bbmh::hashcore
