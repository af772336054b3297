#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bbmh/estimate.hpp"

namespace bbmh::analysis {

inline constexpr double kDefaultVwBits = 32.0;

// (f1 f2 + a^2 - 2a) / k: VW (s = 1) inner-product variance on binary data.
double var_vw_binary(const estimate::PairStats& stats, std::uint32_t k);

// a-hat = R-hat / (1 + R-hat) * (f1 + f2).
double inner_from_resemblance(double resemblance, double f1_plus_f2);

// [(f1 + f2) / (1 + R)^2]^2 * Var(R-hat_b).
double var_inner_from_bbit(const estimate::PairStats& stats, unsigned b, std::uint32_t k);

struct ComparisonPoint {
  std::uint64_t D = 0;
  std::uint64_t f1 = 0;
  std::uint64_t f2 = 0;
  std::uint64_t a = 0;
  unsigned b = 8;
  double bits_per_vw_sample = kDefaultVwBits;

  // Throws InvalidArgument unless f2 <= f1, a <= f2, f1 + f2 - a <= D, b in [1, 64] and bits > 0.
  void validate() const;
  estimate::PairStats stats() const { return estimate::PairStats(D, f1, f2, a); }
};

struct Comparison {
  double var_vw = 0.0;
  double var_bbit = 0.0;
  double g_vw = 0.0;
};

// Variances at width k and their storage-normalized ratio. Throws
// UndefinedRatioError when either variance is not positive.
Comparison compare(const ComparisonPoint& point, std::uint32_t k);

// Var(a-hat_vw) * bits / (Var(a-hat_b) * b); k cancels.
double g_ratio(const ComparisonPoint& point, std::uint32_t k = 1);

// f2 runs over f2_fractions * f1 and a over [max(0, f1 + f2 - D), f2] in
// steps of ceil(f2 / a_steps), always including f2 itself.
struct ComparisonGrid {
  std::uint64_t D = 1000000;
  std::vector<double> f1_fractions{0.0001, 0.1, 0.5, 0.9};
  std::vector<double> f2_fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::uint64_t a_steps = 100;
  unsigned b = 8;
  double bits_per_vw_sample = kDefaultVwBits;

  static ComparisonGrid empty();
};

std::vector<ComparisonPoint> grid_points(const ComparisonGrid& grid);

struct ComparisonRow {
  ComparisonPoint point;
  double g_vw = 0.0;
};

// Points where the ratio is undefined (a = f1 = f2) are skipped.
std::vector<ComparisonRow> evaluate_grid(const ComparisonGrid& grid);

// CSV with header "D,f1,f2,a,b,bits,G_vw"; an empty grid yields the header only.
void emit_comparison_tables(const ComparisonGrid& grid, std::ostream& out);
void emit_comparison_tables(const ComparisonGrid& grid, const std::string& path);

}  // namespace bbmh::analysis
