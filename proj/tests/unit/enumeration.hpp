#pragma once

// Brute-force oracle: exact collision counts of the lowest b bits of
// min pi(S1) and min pi(S2) over all D! permutations pi of {0..D-1}.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace bbmh::test {

struct EnumerationCounts {
  std::uint64_t permutations = 0;
  std::vector<std::uint64_t> matches;  // indexed by b, matches[0] unused
};

// Sets are bitmasks over {0..D-1}; counts for b = 1..max_bits.
inline EnumerationCounts enumerate_collisions(unsigned d, std::uint32_t s1, std::uint32_t s2, unsigned max_bits) {
  EnumerationCounts out;
  out.matches.assign(max_bits + 1, 0);
  std::vector<unsigned> pi(d);
  std::iota(pi.begin(), pi.end(), 0u);
  do {
    unsigned z1 = d, z2 = d;
    for (unsigned i = 0; i < d; ++i) {
      if (s1 >> i & 1u) z1 = std::min(z1, pi[i]);
      if (s2 >> i & 1u) z2 = std::min(z2, pi[i]);
    }
    for (unsigned b = 1; b <= max_bits; ++b) {
      const unsigned mask = (1u << b) - 1;
      out.matches[b] += (z1 & mask) == (z2 & mask);
    }
    ++out.permutations;
  } while (std::next_permutation(pi.begin(), pi.end()));
  return out;
}

// Counts for every pair of masks at once: for each permutation, the minimum
// of every subset is built incrementally from its lowest element.
struct AllPairsCounts {
  std::uint64_t permutations = 0;
  // matches[b][s1 * 2^D + s2]
  std::vector<std::vector<std::uint32_t>> matches;
};

inline AllPairsCounts enumerate_all_pairs(unsigned d, unsigned max_bits) {
  const std::uint32_t subsets = 1u << d;
  AllPairsCounts out;
  out.matches.assign(max_bits + 1, std::vector<std::uint32_t>(static_cast<std::size_t>(subsets) * subsets, 0));
  std::vector<unsigned> pi(d);
  std::iota(pi.begin(), pi.end(), 0u);
  std::vector<unsigned> zmin(subsets, d);
  do {
    for (std::uint32_t m = 1; m < subsets; ++m) {
      const unsigned low = static_cast<unsigned>(__builtin_ctz(m));
      zmin[m] = std::min(zmin[m & (m - 1)], pi[low]);
    }
    for (unsigned b = 1; b <= max_bits; ++b) {
      const unsigned mask = (1u << b) - 1;
      auto& row = out.matches[b];
      for (std::uint32_t s1 = 1; s1 < subsets; ++s1) {
        const unsigned e1 = zmin[s1] & mask;
        std::uint32_t* dst = row.data() + static_cast<std::size_t>(s1) * subsets;
        for (std::uint32_t s2 = 1; s2 < subsets; ++s2) dst[s2] += (zmin[s2] & mask) == e1;
      }
    }
    ++out.permutations;
  } while (std::next_permutation(pi.begin(), pi.end()));
  return out;
}

}  // namespace bbmh::test
