#include "bbmh/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "bbmh/error.hpp"

namespace bbmh::analysis {

double var_vw_binary(const estimate::PairStats& stats, std::uint32_t k) {
  if (k == 0) throw InvalidArgument("var_vw_binary: k must be positive");
  const double f1 = static_cast<double>(stats.f1());
  const double f2 = static_cast<double>(stats.f2());
  const double a = static_cast<double>(stats.a());
  return (f1 * f2 + a * a - 2.0 * a) / k;
}

double inner_from_resemblance(double resemblance, double f1_plus_f2) {
  if (!(f1_plus_f2 > 0.0)) throw InvalidArgument("inner_from_resemblance: f1 + f2 must be positive");
  if (resemblance == -1.0) throw InvalidArgument("inner_from_resemblance: R-hat = -1 has no inner product");
  return resemblance / (1.0 + resemblance) * f1_plus_f2;
}

double var_inner_from_bbit(const estimate::PairStats& stats, unsigned b, std::uint32_t k) {
  const double r = stats.resemblance();
  const double factor = static_cast<double>(stats.f1() + stats.f2()) / ((1.0 + r) * (1.0 + r));
  return factor * factor * estimate::variance_bbit(estimate::bbit_constants(stats, b), k);
}

void ComparisonPoint::validate() const {
  if (f2 > f1) throw InvalidArgument("ComparisonPoint: requires f2 <= f1");
  if (a > f2) throw InvalidArgument("ComparisonPoint: requires a <= f2");
  if (f1 + f2 - a > D) throw InvalidArgument("ComparisonPoint: union exceeds D");
  if (b < 1 || b > 64) throw InvalidArgument("ComparisonPoint: b must lie in [1, 64]");
  if (!(bits_per_vw_sample > 0.0)) throw InvalidArgument("ComparisonPoint: bits per VW sample must be positive");
}

Comparison compare(const ComparisonPoint& point, std::uint32_t k) {
  point.validate();
  const estimate::PairStats stats = point.stats();
  Comparison c;
  c.var_vw = var_vw_binary(stats, k);
  c.var_bbit = var_inner_from_bbit(stats, point.b, k);
  if (!(c.var_vw > 0.0) || !(c.var_bbit > 0.0)) {
    throw UndefinedRatioError("g_ratio: a variance vanishes at (f1, f2, a) = (" + std::to_string(point.f1) + ", " +
                              std::to_string(point.f2) + ", " + std::to_string(point.a) + ")");
  }
  c.g_vw = (c.var_vw * point.bits_per_vw_sample) / (c.var_bbit * point.b);
  return c;
}

double g_ratio(const ComparisonPoint& point, std::uint32_t k) { return compare(point, k).g_vw; }

ComparisonGrid ComparisonGrid::empty() {
  ComparisonGrid g;
  g.f1_fractions.clear();
  g.f2_fractions.clear();
  return g;
}

std::vector<ComparisonPoint> grid_points(const ComparisonGrid& grid) {
  std::vector<ComparisonPoint> points;
  for (double r1 : grid.f1_fractions) {
    const auto f1 = static_cast<std::uint64_t>(std::llround(r1 * static_cast<double>(grid.D)));
    if (f1 == 0 || f1 > grid.D) continue;
    for (double frac : grid.f2_fractions) {
      const auto f2 = static_cast<std::uint64_t>(std::llround(frac * static_cast<double>(f1)));
      if (f2 == 0 || f2 > f1) continue;
      const std::uint64_t lo = f1 + f2 > grid.D ? f1 + f2 - grid.D : 0;
      const std::uint64_t steps = std::max<std::uint64_t>(1, grid.a_steps);
      const std::uint64_t stride = std::max<std::uint64_t>(1, (f2 - lo + steps - 1) / steps);
      for (std::uint64_t a = lo;; a += stride) {
        const std::uint64_t aa = std::min(a, f2);
        points.push_back(ComparisonPoint{grid.D, f1, f2, aa, grid.b, grid.bits_per_vw_sample});
        if (aa == f2) break;
      }
    }
  }
  return points;
}

std::vector<ComparisonRow> evaluate_grid(const ComparisonGrid& grid) {
  std::vector<ComparisonRow> rows;
  for (const ComparisonPoint& p : grid_points(grid)) {
    if (p.a == p.f1 && p.a == p.f2) continue;
    rows.push_back(ComparisonRow{p, g_ratio(p)});
  }
  return rows;
}

namespace {

std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

void emit_comparison_tables(const ComparisonGrid& grid, std::ostream& out) {
  out << "D,f1,f2,a,b,bits,G_vw\n";
  for (const ComparisonRow& row : evaluate_grid(grid)) {
    const ComparisonPoint& p = row.point;
    out << p.D << ',' << p.f1 << ',' << p.f2 << ',' << p.a << ',' << p.b << ','
        << shortest(p.bits_per_vw_sample) << ',' << shortest(row.g_vw) << '\n';
  }
  if (!out) throw IoError("emit_comparison_tables: write failed");
}

void emit_comparison_tables(const ComparisonGrid& grid, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  emit_comparison_tables(grid, out);
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace bbmh::analysis
