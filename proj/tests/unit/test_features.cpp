#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "bbmh/error.hpp"
#include "bbmh/estimate.hpp"
#include "bbmh/features.hpp"
#include "bbmh/mix.hpp"
#include "test_support.hpp"

using namespace bbmh;
using namespace bbmh::features;
using hashcore::BbitSignature;

namespace {

BbitSignature random_signature(SplitMixStream& rng, std::uint32_t k, unsigned b) {
  std::vector<std::uint16_t> v(k);
  for (auto& x : v) x = static_cast<std::uint16_t>(rng.bounded(std::uint64_t{1} << b));
  return BbitSignature(b, v);
}

std::vector<int> dense_bits(const ExpandedVector& x) {
  std::vector<int> bits(static_cast<std::size_t>(x.dim()), 0);
  for (auto i : x.ones) bits[i] = 1;
  return bits;
}

}  // namespace

TEST(Expand, WorkedExampleLayout) {
  const std::vector<std::uint16_t> e{1, 0, 3};
  const ExpandedVector x = expand(BbitSignature(2, e));
  EXPECT_EQ(x.dim(), 12u);
  EXPECT_EQ(dense_bits(x), (std::vector<int>{0, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0}));
}

TEST(Expand, OneHotPerBlock) {
  SplitMixStream rng(3);
  for (unsigned b : {1u, 4u, 8u, 16u}) {
    const ExpandedVector x = expand(random_signature(rng, 37, b));
    ASSERT_EQ(x.ones.size(), 37u);
    for (std::uint32_t j = 0; j < 37; ++j) EXPECT_EQ(x.ones[j] >> b, j);
  }
}

TEST(Expand, InnerProductEqualsMatchCount) {
  SplitMixStream rng(11);
  for (int t = 0; t < 2000; ++t) {
    const unsigned b = 1 + static_cast<unsigned>(rng.bounded(16));
    const auto k = static_cast<std::uint32_t>(1 + rng.bounded(200));
    const auto x = random_signature(rng, k, b);
    const auto y = random_signature(rng, k, b);
    EXPECT_EQ(inner_product(expand(x), expand(y)), hashcore::match_count(x, y));
    EXPECT_EQ(inner_product(expand(x), expand(x)), k);
  }
}

TEST(Expand, Injective) {
  SplitMixStream rng(12);
  for (int t = 0; t < 500; ++t) {
    const auto x = random_signature(rng, 8, 2);
    const auto y = random_signature(rng, 8, 2);
    EXPECT_EQ(x == y, expand(x) == expand(y));
  }
}

TEST(Gram, SingleSignature) {
  SplitMixStream rng(4);
  const std::vector<BbitSignature> sigs{random_signature(rng, 64, 4)};
  const Eigen::MatrixXd g = gram_matrix(sigs);
  ASSERT_EQ(g.rows(), 1);
  EXPECT_EQ(g(0, 0), 64.0);
}

TEST(Gram, PositiveSemidefiniteOnRandomSets) {
  const std::uint64_t d = 1 << 12;
  const std::uint32_t k = 64;
  const auto family = hashcore::build_family(2024, k, d, hashcore::PermutationMode::exact_permutation);
  SplitMixStream rng(8);
  std::vector<hashcore::MinhashSignature> mins;
  for (int i = 0; i < 50; ++i) {
    std::vector<std::uint64_t> idx;
    const std::uint64_t f = 1 + rng.bounded(400);
    for (std::uint64_t t = 0; t < f; ++t) idx.push_back(rng.bounded(d));
    mins.push_back(hashcore::minhash(family, hashcore::SparseSet::from_unsorted(d, idx)));
  }
  mins[49] = mins[3];
  for (unsigned b : {1u, 2u, 4u, 8u}) {
    std::vector<BbitSignature> sigs;
    for (const auto& z : mins) sigs.push_back(hashcore::truncate_b(z, b));
    const Eigen::MatrixXd g = gram_matrix(sigs);
    EXPECT_TRUE(g.isApprox(g.transpose()));
    for (int i = 0; i < 50; ++i) EXPECT_EQ(g(i, i), k);
    EXPECT_EQ(g(3, 49), k);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-8 * k) << "b=" << b;
  }
}

TEST(Gram, HeterogeneousSignaturesThrow) {
  SplitMixStream rng(5);
  const std::vector<BbitSignature> sigs{random_signature(rng, 8, 2), random_signature(rng, 8, 3)};
  EXPECT_THROW(gram_matrix(sigs), IncompatibleSignature);
}

TEST(ExpandThenVw, WidthAndExactLimit) {
  SplitMixStream rng(6);
  const auto x = random_signature(rng, 50, 4);
  const auto y = random_signature(rng, 50, 4);
  const auto gx = expand_then_vw(x, 128, 9);
  EXPECT_EQ(gx.width(), 128u);
  EXPECT_EQ(gx.s, 1.0);
  // T-hat = sum over one-index pairs (i, j) of r_i r_j [h(i) = h(j)].
  const auto gy = expand_then_vw(y, 128, 9);
  const auto sign = sketch::SignDistribution::rademacher();
  double direct = 0.0;
  for (auto i : expand(x).ones) {
    for (auto j : expand(y).ones) {
      if (sketch::bucket_of(9, i, 128) == sketch::bucket_of(9, j, 128)) {
        direct += sketch::sign_of(9, i, sign) * sketch::sign_of(9, j, sign);
      }
    }
  }
  EXPECT_DOUBLE_EQ(estimate_matches_vw(gx, gy), direct);
}

TEST(ExpandThenVw, ResemblanceEstimateMatchesCountFormula) {
  SplitMixStream rng(7);
  const auto x = random_signature(rng, 20, 2);
  const auto c = estimate::bbit_constants(estimate::PairStats(1000, 100, 100, 50), 2);
  const auto g = expand_then_vw(x, 64, 1);
  const double t = estimate_matches_vw(g, g);
  EXPECT_DOUBLE_EQ(estimate_resemblance_vw(g, g, 20, c), (t / 20 - c.c1) / (1 - c.c2));
}

TEST(MonteCarlo, NarrowVwMatchesCompositionVariance) {
  // m = k: the VW term dominates; compare Var(R-hat_b,vw) / Var(R-hat_b) with the prediction.
  const std::uint32_t k = 50, m = 50;
  const unsigned b = 16;
  const std::uint64_t f = 300, a = 200;
  const hashcore::SparseSet s1(1 << 16, test::take(0, f));
  const hashcore::SparseSet s2(1 << 16, test::take(f - a, f));
  const auto c = estimate::bbit_constants(estimate::PairStats(hashcore::kHashedUniverse, f, f, a), b);
  test::Moments composed;
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    const auto fam = hashcore::build_family(seed, k, 1 << 16, hashcore::PermutationMode::hashed_permutation);
    const auto e1 = hashcore::truncate_b(hashcore::minhash(fam, s1), b);
    const auto e2 = hashcore::truncate_b(hashcore::minhash(fam, s2), b);
    const std::uint64_t vw_seed = derive_seed(seed, 1);
    composed.add(estimate_resemblance_vw(expand_then_vw(e1, m, vw_seed), expand_then_vw(e2, m, vw_seed), k, c));
  }
  EXPECT_LT(test::relative_error(composed.variance(), estimate::variance_bbit_vw(c, k, m)), 0.15);
}
