#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "bbmh/error.hpp"
#include "bbmh/exact_oracle.hpp"

namespace bbmh::estimate {

std::vector<OracleRow> oracle_rows(const OracleGrid& grid) {
  if (grid.D < 2) throw InvalidArgument("oracle grid: D must be at least 2");
  OracleOptions options;
  options.max_universe = std::max<std::uint64_t>(options.max_universe, grid.D);
  std::vector<std::uint64_t> f1s;
  for (double fr : grid.f1_fractions) {
    if (!(fr > 0.0 && fr <= 1.0)) throw InvalidArgument("oracle grid: f1 fractions must lie in (0, 1]");
    f1s.push_back(std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::llround(fr * static_cast<double>(grid.D)))));
  }
  std::vector<OracleRow> rows;
  for (unsigned b : grid.bs) {
    for (std::uint64_t f1 : f1s) {
      for (std::uint64_t f2 = 2; f2 <= f1; ++f2) {
        const std::uint64_t lo = f1 + f2 > grid.D ? f1 + f2 - grid.D : 0;
        for (std::uint64_t a = lo; a <= f2; ++a) {
          const PairStats stats(grid.D, f1, f2, a);
          OracleRow row{grid.D, f1, f2, a, b};
          row.formula = bbit_constants(stats, b).pb;
          row.exact = exact_pb(stats, b, options);
          row.abs_error = std::abs(row.formula - row.exact);
          rows.push_back(row);
        }
      }
    }
  }
  return rows;
}

namespace {
std::string number(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}
}  // namespace

void emit_oracle_table(const std::vector<OracleRow>& rows, std::ostream& out) {
  out << "D,f1,f2,a,b,Pb_formula,Pb_exact,abs_error\n";
  for (const OracleRow& r : rows) {
    out << r.D << ',' << r.f1 << ',' << r.f2 << ',' << r.a << ',' << r.b << ',' << number(r.formula) << ','
        << number(r.exact) << ',' << number(r.abs_error) << '\n';
  }
  if (!out) throw IoError("oracle table: write failed");
}

void emit_oracle_table(const std::vector<OracleRow>& rows, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  emit_oracle_table(rows, out);
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace bbmh::estimate
