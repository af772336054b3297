#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "bbmh/analysis.hpp"
#include "bbmh/error.hpp"
#include "bbmh/hashcore.hpp"
#include "bbmh/mix.hpp"
#include "test_support.hpp"

using namespace bbmh;
using namespace bbmh::analysis;

TEST(InnerFromResemblance, RecoversIntersection) {
  for (std::uint64_t a : {0u, 1u, 50u, 99u, 100u}) {
    const estimate::PairStats s(1000, 200, 100, a);
    EXPECT_NEAR(inner_from_resemblance(s.resemblance(), 300.0), static_cast<double>(a), 1e-12);
  }
  EXPECT_THROW(inner_from_resemblance(0.5, 0.0), InvalidArgument);
}

TEST(VarInner, ZeroResemblanceFactor) {
  const estimate::PairStats s(100000, 300, 200, 0);
  const double vb = estimate::variance_bbit(estimate::bbit_constants(s, 4), 50);
  EXPECT_DOUBLE_EQ(var_inner_from_bbit(s, 4, 50), 500.0 * 500.0 * vb);
}

TEST(GRatio, LinearInBits) {
  ComparisonPoint p{1000000, 1000, 500, 200, 8, 32.0};
  const double g32 = g_ratio(p);
  p.bits_per_vw_sample = 16.0;
  EXPECT_EQ(g_ratio(p), g32 / 2);
}

TEST(GRatio, IndependentOfK) {
  const ComparisonPoint p{1000000, 100000, 50000, 20000, 8, 32.0};
  const double g10 = g_ratio(p, 10);
  const double g10000 = g_ratio(p, 10000);
  EXPECT_LT(std::abs(g10 - g10000) / g10, 1e-12);
}

TEST(GRatio, DegeneratePointsAreUndefined) {
  EXPECT_THROW(g_ratio(ComparisonPoint{1000, 50, 50, 50, 8, 32.0}), UndefinedRatioError);
  EXPECT_THROW(g_ratio(ComparisonPoint{1000, 50, 60, 10, 8, 32.0}), InvalidArgument);
  EXPECT_THROW(g_ratio(ComparisonPoint{1000, 50, 40, 41, 8, 32.0}), InvalidArgument);
}

TEST(GRatio, ExceedsOneAcrossTheGrid) {
  ComparisonGrid grid;
  grid.a_steps = 25;
  const auto rows = evaluate_grid(grid);
  ASSERT_GT(rows.size(), 500u);
  for (const auto& r : rows) EXPECT_GT(r.g_vw, 1.0) << r.point.f1 << ' ' << r.point.f2 << ' ' << r.point.a;
}

TEST(GRatio, NearlyIndependentOfD) {
  ComparisonGrid grid;
  grid.a_steps = 20;
  for (const auto& r : evaluate_grid(grid)) {
    ComparisonPoint big = r.point;
    big.D *= 10;
    big.f1 *= 10;
    big.f2 *= 10;
    big.a *= 10;
    // Same f1/D and R at ten times the scale; only the -2a term moves G.
    const double rel = std::abs(g_ratio(big) - r.g_vw) / r.g_vw;
    const double a = static_cast<double>(r.point.a);
    const double p = static_cast<double>(r.point.f1) * static_cast<double>(r.point.f2) + a * a;
    EXPECT_NEAR(rel, 1.8 * a / (p - 2 * a), 1e-9);
    // With f1/D = 1e-4 the sets hold 10 to 100 elements and drift up to 1.7%.
    if (r.point.f1 >= 100000) EXPECT_LT(rel, 0.01) << r.point.f1 << ' ' << r.point.f2 << ' ' << r.point.a;
    EXPECT_LT(rel, 0.017);
  }
}

TEST(Tables, EmptyGridIsHeaderOnly) {
  std::ostringstream out;
  emit_comparison_tables(ComparisonGrid::empty(), out);
  EXPECT_EQ(out.str(), "D,f1,f2,a,b,bits,G_vw\n");
}

TEST(Tables, RowsMatchDirectCalls) {
  ComparisonGrid grid;
  grid.f1_fractions = {0.1};
  grid.f2_fractions = {0.5};
  grid.a_steps = 4;
  std::ostringstream out;
  emit_comparison_tables(grid, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ComparisonPoint p;
    double bits = 0, g = 0;
    char c;
    std::istringstream f(line);
    f >> p.D >> c >> p.f1 >> c >> p.f2 >> c >> p.a >> c >> p.b >> c >> bits >> c >> g;
    p.bits_per_vw_sample = bits;
    EXPECT_EQ(g, g_ratio(p));
    ++rows;
  }
  EXPECT_EQ(rows, 5u);
}

// Delta-method check: the variance of a-hat_b over seeds is near the
// first-order formula.
TEST(MonteCarlo, InnerProductVarianceFromBbit) {
  const std::uint32_t k = 100;
  const std::uint64_t f = 2000, a = 1000;
  const hashcore::SparseSet s1(1 << 16, test::take(0, f));
  const hashcore::SparseSet s2(1 << 16, test::take(f - a, f));
  const estimate::PairStats theory(hashcore::kHashedUniverse, f, f, a);
  const auto c = estimate::bbit_constants(theory, 8);
  test::Moments m;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const auto fam = hashcore::build_family(seed, k, 1 << 16, hashcore::PermutationMode::hashed_permutation);
    const auto t = hashcore::match_count(hashcore::truncate_b(hashcore::minhash(fam, s1), 8),
                                         hashcore::truncate_b(hashcore::minhash(fam, s2), 8));
    m.add(inner_from_resemblance(estimate::estimate_resemblance_b(t, k, c), 2.0 * f));
  }
  EXPECT_LT(test::relative_error(m.variance(), var_inner_from_bbit(theory, 8, k)), 0.15);
}
