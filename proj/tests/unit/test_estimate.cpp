#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "bbmh/error.hpp"
#include "bbmh/estimate.hpp"
#include "bbmh/exact_oracle.hpp"
#include "bbmh/hashcore.hpp"
#include "bbmh/mix.hpp"
#include "enumeration.hpp"
#include "test_support.hpp"

using namespace bbmh;
using namespace bbmh::estimate;

TEST(PairStats, Validation) {
  EXPECT_THROW(PairStats(10, 0, 0, 0), InvalidArgument);
  EXPECT_THROW(PairStats(10, 3, 2, 3), InvalidArgument);
  EXPECT_THROW(PairStats(10, 8, 8, 5), InvalidArgument);
  EXPECT_THROW(PairStats(0, 1, 1, 0), InvalidArgument);
  const PairStats s(100, 30, 20, 10);
  EXPECT_DOUBLE_EQ(s.resemblance(), 0.25);
  EXPECT_DOUBLE_EQ(s.r1(), 0.3);
  EXPECT_DOUBLE_EQ(s.r2(), 0.2);
}

TEST(SparsityCoefficient, MatchesDefinition) {
  for (unsigned b : {1u, 2u, 4u, 8u}) {
    for (double r : {0.001, 0.01, 0.1, 0.3, 0.5, 0.9}) {
      const double n = std::ldexp(1.0, static_cast<int>(b));
      const double direct = r * std::pow(1 - r, n - 1) / (1 - std::pow(1 - r, n));
      EXPECT_NEAR(sparsity_coefficient(r, b), direct, 1e-12 * direct) << "b=" << b << " r=" << r;
    }
  }
}

TEST(SparsityCoefficient, ZeroLimitIsContinuous) {
  for (unsigned b : {1u, 2u, 8u, 16u}) {
    const double limit = std::ldexp(1.0, -static_cast<int>(b));
    EXPECT_EQ(sparsity_coefficient(0.0, b), limit);
    // Near zero the value is 2^-b with slope -(2^b - 1)/2^(b+1); the
    // quadratic term is below (2^b r)^2 / 6 relative.
    const double n = std::ldexp(1.0, static_cast<int>(b));
    for (double r : {1e-7, 1e-10, 1e-14}) {
      const double slope = -(n - 1) / (2 * n);
      EXPECT_NEAR(sparsity_coefficient(r, b), limit + slope * r, limit * ((n * r) * (n * r) / 6 + 1e-14));
    }
  }
  EXPECT_THROW(sparsity_coefficient(-0.1, 1), InvalidArgument);
  EXPECT_THROW(sparsity_coefficient(0.1, 0), InvalidArgument);
}

TEST(BbitConstants, IdenticalSetsCollideSurely) {
  for (unsigned b : {1u, 2u, 4u, 8u}) {
    const BbitConstants c = bbit_constants(PairStats(1000, 200, 200, 200), b);
    EXPECT_DOUBLE_EQ(c.c1, c.c2);
    EXPECT_NEAR(c.pb, 1.0, 1e-15);
  }
}

TEST(BbitConstants, FormulaCloseToExactAtD500) {
  const PairStats s(500, 250, 100, 50);
  EXPECT_LT(std::abs(bbit_constants(s, 1).pb - exact_pb(s, 1)), 0.0004);
}

TEST(BbitConstants, FormulaCloseToExactAtD20) {
  const PairStats s(20, 10, 6, 3);
  EXPECT_LT(std::abs(bbit_constants(s, 2).pb - exact_pb(s, 2)), 0.01);
}

TEST(ExactPb, IdenticalSetsGiveOne) {
  for (unsigned b : {1u, 3u, 8u}) EXPECT_NEAR(exact_pb(PairStats(40, 7, 7, 7), b), 1.0, 1e-14);
  EXPECT_EQ(exact_pb_rational(PairStats(12, 5, 5, 5), 2), Rational(1));
}

TEST(ExactPb, WorkedEnumerationExample) {
  // S1 = {0,1,2}, S2 = {2,3}, D = 8; b = 3 keeps every bit of z < 8.
  const auto counts = test::enumerate_collisions(8, 0b0111, 0b1100, 3);
  EXPECT_EQ(counts.permutations, 40320u);
  EXPECT_EQ(counts.matches[3], 10080u);
  EXPECT_EQ(exact_pb_rational(PairStats(8, 3, 2, 1), 3), Rational(1, 4));
  EXPECT_NEAR(exact_pb(PairStats(8, 3, 2, 1), 3), 0.25, 1e-15);
}

TEST(ExactPb, EqualsEnumerationForEveryPairUpToD5) {
  for (unsigned d = 1; d <= 5; ++d) {
    const auto all = test::enumerate_all_pairs(d, 3);
    const std::uint32_t subsets = 1u << d;
    for (std::uint32_t s1 = 1; s1 < subsets; ++s1) {
      for (std::uint32_t s2 = 1; s2 < subsets; ++s2) {
        const PairStats stats(d, std::popcount(s1), std::popcount(s2), std::popcount(s1 & s2));
        for (unsigned b = 1; b <= 3; ++b) {
          const Rational expected(all.matches[b][static_cast<std::size_t>(s1) * subsets + s2], all.permutations);
          ASSERT_EQ(exact_pb_rational(stats, b), expected) << "D=" << d << " s1=" << s1 << " s2=" << s2 << " b=" << b;
        }
      }
    }
  }
}

TEST(ExactPb, MatrixRouteAgrees) {
  SplitMixStream rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const std::uint64_t d = 2 + rng.bounded(80);
    const std::uint64_t f1 = 1 + rng.bounded(d);
    const std::uint64_t f2 = 1 + rng.bounded(d);
    const std::uint64_t lo = f1 + f2 > d ? f1 + f2 - d : 0;
    const std::uint64_t a = lo + rng.bounded(std::min(f1, f2) - lo + 1);
    const PairStats s(d, f1, f2, a);
    const auto pmf = exact_joint_pmf(s);
    double total = 0.0;
    for (double p : pmf) total += p;
    EXPECT_NEAR(total, 1.0, 1e-12);
    for (unsigned b : {1u, 2u, 3u, 5u, 8u}) {
      EXPECT_NEAR(exact_pb(s, b), pb_from_joint_pmf(pmf, d, b), 1e-12) << d << ' ' << f1 << ' ' << f2 << ' ' << a;
    }
  }
}

TEST(ExactPb, DoubleAgreesWithRational) {
  for (std::uint64_t a = 0; a <= 6; ++a) {
    const PairStats s(30, 12, 9, a);
    for (unsigned b : {1u, 2u, 4u}) {
      EXPECT_NEAR(exact_pb(s, b), exact_pb_rational(s, b).convert_to<double>(), 1e-14);
    }
  }
}

TEST(ExactPb, CapacityAndInputChecks) {
  EXPECT_THROW(exact_pb(PairStats(501, 10, 10, 5), 1), OracleCapacityError);
  EXPECT_NO_THROW(exact_pb(PairStats(501, 10, 10, 5), 1, OracleOptions{1000}));
  EXPECT_THROW(exact_pb_rational(PairStats(31, 2, 2, 1), 1), OracleCapacityError);
  EXPECT_THROW(exact_pb(PairStats(20, 0, 5, 0), 1), InvalidArgument);
}

TEST(ExactPb, NoFalseMatchesWhenBitsCoverTheUniverse) {
  // 2^b >= D: lowest b bits of z < D are all of z, so Pb = R exactly.
  const PairStats s(16, 6, 5, 2);
  EXPECT_EQ(exact_pb_rational(s, 4), Rational(2, 9));
  EXPECT_EQ(exact_pb_rational(s, 10), Rational(2, 9));
}

TEST(Estimator, ChainReturnsResemblanceAtTheMean) {
  for (unsigned b : {1u, 2u, 8u}) {
    const PairStats s(1000, 300, 200, 100);
    const BbitConstants c = bbit_constants(s, b);
    const double p_hat = c.pb;
    EXPECT_NEAR((p_hat - c.c1) / (1 - c.c2), s.resemblance(), 1e-14);
  }
}

TEST(Estimator, FullMatchWithIdenticalSetsIsOne) {
  const BbitConstants c = bbit_constants(PairStats(1000, 50, 50, 50), 2);
  EXPECT_NEAR(estimate_resemblance_b(64, 64, c), 1.0, 1e-15);
}

TEST(Estimator, NotClampedButClampedAccessorIs) {
  const BbitConstants c = bbit_constants(PairStats(1000, 50, 50, 10), 1);
  EXPECT_LT(estimate_resemblance_b(0, 10, c), 0.0);
  EXPECT_EQ(estimate_resemblance_b_clamped(0, 10, c), 0.0);
  EXPECT_THROW(estimate_resemblance_b(1, 0, c), InvalidArgument);
  EXPECT_THROW(estimate_resemblance_b(11, 10, c), InvalidArgument);
}

TEST(Variance, MinwiseEdges) {
  EXPECT_EQ(variance_minwise(0.0, 10), 0.0);
  EXPECT_EQ(variance_minwise(1.0, 10), 0.0);
  EXPECT_DOUBLE_EQ(variance_minwise(0.5, 100), 0.0025);
  EXPECT_THROW(variance_minwise(0.5, 0), InvalidArgument);
}

TEST(Variance, ManyBitsApproachMinwise) {
  const PairStats s(1000000, 1000, 800, 400);
  const BbitConstants c = bbit_constants(s, 64);
  EXPECT_LT(c.c1, 1e-300);
  EXPECT_NEAR(variance_bbit(c, 50), variance_minwise(s.resemblance(), 50), 1e-15);
}

TEST(Variance, NonincreasingInBits) {
  const std::uint64_t d = 100000;
  for (double r : {0.0001, 0.01, 0.1, 0.3, 0.5}) {
    const auto f = static_cast<std::uint64_t>(r * d);
    for (double res : {0.05, 0.2, 0.5, 0.8, 0.95}) {
      const auto a = static_cast<std::uint64_t>(std::llround(2.0 * f * res / (1.0 + res)));
      const PairStats s(d, f, f, a);
      double previous = INFINITY;
      for (unsigned b : {1u, 2u, 4u, 8u, 16u}) {
        const double v = variance_bbit(bbit_constants(s, b), 100);
        EXPECT_LE(v, previous * (1 + 1e-12)) << "r=" << r << " R=" << res << " b=" << b;
        previous = v;
      }
    }
  }
}

TEST(Variance, VwCompositionLimits) {
  const BbitConstants c = bbit_constants(PairStats(1 << 20, 500, 400, 300), 4);
  EXPECT_NEAR(variance_bbit_vw(c, 100, std::uint64_t{1} << 62), variance_bbit(c, 100), 1e-15);
  BbitConstants sure = c;
  sure.pb = 1.0;
  EXPECT_EQ(variance_bbit_vw(sure, 1, 7), variance_bbit(sure, 1));
  const double extra = variance_bbit_vw(c, 100, 100) - variance_bbit(c, 100);
  const double expected = (1 + c.pb * c.pb - c.pb * (1 + c.pb) / 100) / (100 * (1 - c.c2) * (1 - c.c2));
  EXPECT_NEAR(extra, expected, 1e-15);
}

// Hashed permutations take minima over 64-bit outputs, so the matching
// theory is evaluated at D = 2^64 - 1.
TEST(MonteCarlo, BbitEstimatorUnbiasedWithPredictedVariance) {
  const std::uint32_t k = 100;
  const std::uint64_t f = 2000, a = 1000;
  const hashcore::SparseSet s1(1 << 16, test::take(0, f));
  const hashcore::SparseSet s2(1 << 16, test::take(f - a, f));
  const PairStats theory(hashcore::kHashedUniverse, f, f, a);
  const BbitConstants c = bbit_constants(theory, 1);
  test::Moments m;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const auto fam = hashcore::build_family(seed, k, 1 << 16, hashcore::PermutationMode::hashed_permutation);
    const auto t = hashcore::match_count(hashcore::truncate_b(hashcore::minhash(fam, s1), 1),
                                         hashcore::truncate_b(hashcore::minhash(fam, s2), 1));
    m.add(estimate_resemblance_b(t, k, c));
  }
  EXPECT_LT(std::abs(m.mean() - theory.resemblance()), 3 * m.standard_error());
  EXPECT_LT(test::relative_error(m.variance(), variance_bbit(c, k)), 0.10);
}
