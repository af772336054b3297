#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bbmh/estimate.hpp"
#include "bbmh/hashcore.hpp"
#include "bbmh/sketch.hpp"

namespace bbmh::features {

// A 2^b * k dimensional binary vector with exactly one 1 per block of 2^b
// coordinates, stored as its k one-indices (ascending).
//
// Block j holds its 1 at offset 2^b - 1 - e_j, which reproduces the
// most-significant-first layout of the usual worked example. Any fixed
// per-block relabeling gives the same inner products.
struct ExpandedVector {
  std::uint32_t k = 0;
  unsigned b = 0;
  std::vector<std::uint32_t> ones;

  std::uint64_t dim() const noexcept { return (std::uint64_t{1} << b) * k; }
  friend bool operator==(const ExpandedVector&, const ExpandedVector&) = default;
};

ExpandedVector expand(const hashcore::BbitSignature& sig);

// Counts shared one-indices; equals match_count of the underlying signatures.
std::uint32_t inner_product(const ExpandedVector& x, const ExpandedVector& y);

// Sparse binary view for the sketches.
sketch::SparseVector to_sparse_vector(const ExpandedVector& x);

// G[i][j] = <expand(sig_i), expand(sig_j)>; symmetric with diagonal k.
Eigen::MatrixXd gram_matrix(std::span<const hashcore::BbitSignature> sigs);

// VW (s = 1) of the expanded vector at width m.
sketch::SketchVector expand_then_vw(const hashcore::BbitSignature& sig, std::uint32_t m, std::uint64_t seed);

// T-hat = <g1, g2>, an unbiased estimate of the match count.
double estimate_matches_vw(const sketch::SketchVector& g1, const sketch::SketchVector& g2);

// (T-hat / k - C1) / (1 - C2).
double estimate_resemblance_vw(const sketch::SketchVector& g1, const sketch::SketchVector& g2,
                               std::uint32_t k, const estimate::BbitConstants& constants);

}  // namespace bbmh::features
