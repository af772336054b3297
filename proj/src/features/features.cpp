#include "bbmh/features.hpp"

#include "bbmh/error.hpp"

namespace bbmh::features {

ExpandedVector expand(const hashcore::BbitSignature& sig) {
  const std::uint64_t block = std::uint64_t{1} << sig.b();
  if (block * sig.k() > (std::uint64_t{1} << 32)) {
    throw InvalidArgument("expand: 2^b * k exceeds the 32-bit index space");
  }
  ExpandedVector out{sig.k(), sig.b(), std::vector<std::uint32_t>(sig.k())};
  const auto values = sig.values();
  for (std::uint32_t j = 0; j < sig.k(); ++j) {
    out.ones[j] = static_cast<std::uint32_t>(j * block + (block - 1 - values[j]));
  }
  return out;
}

std::uint32_t inner_product(const ExpandedVector& x, const ExpandedVector& y) {
  if (x.k != y.k || x.b != y.b) throw IncompatibleSignature("inner_product: expanded vectors differ in k or b");
  std::uint32_t count = 0;
  std::size_t i = 0, j = 0;
  while (i < x.ones.size() && j < y.ones.size()) {
    if (x.ones[i] < y.ones[j]) {
      ++i;
    } else if (y.ones[j] < x.ones[i]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

sketch::SparseVector to_sparse_vector(const ExpandedVector& x) {
  sketch::SparseVector v;
  v.dim = x.dim();
  v.indices.assign(x.ones.begin(), x.ones.end());
  return v;
}

Eigen::MatrixXd gram_matrix(std::span<const hashcore::BbitSignature> sigs) {
  const auto n = static_cast<Eigen::Index>(sigs.size());
  Eigen::MatrixXd g(n, n);
  if (n == 0) return g;
  for (const auto& s : sigs) {
    if (s.k() != sigs.front().k() || s.b() != sigs.front().b()) {
      throw IncompatibleSignature("gram_matrix: signatures differ in k or b");
    }
  }
  std::vector<ExpandedVector> expanded;
  expanded.reserve(sigs.size());
  for (const auto& s : sigs) expanded.push_back(expand(s));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      g(i, j) = g(j, i) = inner_product(expanded[i], expanded[j]);
    }
  }
  return g;
}

sketch::SketchVector expand_then_vw(const hashcore::BbitSignature& sig, std::uint32_t m, std::uint64_t seed) {
  return sketch::vw_sketch(to_sparse_vector(expand(sig)), m, seed, sketch::SignDistribution::rademacher());
}

double estimate_matches_vw(const sketch::SketchVector& g1, const sketch::SketchVector& g2) {
  return sketch::estimate_inner(g1, g2, sketch::EstimatorKind::vw);
}

double estimate_resemblance_vw(const sketch::SketchVector& g1, const sketch::SketchVector& g2,
                               std::uint32_t k, const estimate::BbitConstants& constants) {
  if (k == 0) throw InvalidArgument("estimate_resemblance_vw: k must be positive");
  const double t_hat = estimate_matches_vw(g1, g2);
  return (t_hat / k - constants.c1) / (1.0 - constants.c2);
}

}  // namespace bbmh::features
