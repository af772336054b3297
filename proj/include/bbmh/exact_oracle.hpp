#pragma once

// Exact collision probabilities of the lowest b bits of z1 = min pi(S1) and
// z2 = min pi(S2) under a uniformly random permutation pi of {0..D-1}.
//
// Only the class of each position matters: intersection (a), S1-only
// (f1 - a), S2-only (f2 - a) or outside the union. Reading the permuted
// sequence left to right, z1 = z2 = i needs an intersection element at
// position i after i outside elements; z1 = i < z2 = j needs i outside
// elements, an S1-only element at i, then no S2 element before j.

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bbmh/estimate.hpp"

namespace bbmh::estimate {

struct OracleOptions {
  std::uint64_t max_universe = 500;
};

inline constexpr std::uint64_t kMaxRationalUniverse = 30;

using Rational = boost::multiprecision::cpp_rational;

// Pr(lowest b bits of z1 and z2 agree), O(D * min(2^b, D)) time.
// Requires f1, f2 >= 1 and D <= options.max_universe.
double exact_pb(const PairStats& stats, unsigned b, const OracleOptions& options = {});

// The same probability in exact rational arithmetic, for D <= 30.
Rational exact_pb_rational(const PairStats& stats, unsigned b);

// Row-major D x D matrix of Pr(z1 = i, z2 = j).
std::vector<double> exact_joint_pmf(const PairStats& stats, const OracleOptions& options = {});

// Sums the joint pmf over i = j (mod 2^b); an independent route to exact_pb.
double pb_from_joint_pmf(const std::vector<double>& pmf, std::uint64_t universe_size, unsigned b);

}  // namespace bbmh::estimate

#include <iosfwd>
#include <string>

namespace bbmh::estimate {

// Formula-versus-exact sweep: for each f1 = round(fraction * D) (at least 2),
// f2 = 2..f1 and every feasible a in [max(0, f1 + f2 - D), f2].
struct OracleGrid {
  std::uint64_t D = 20;
  std::vector<unsigned> bs{1, 2, 4};
  std::vector<double> f1_fractions{0.2, 0.5, 0.8};
};

struct OracleRow {
  std::uint64_t D = 0, f1 = 0, f2 = 0, a = 0;
  unsigned b = 0;
  double formula = 0.0;
  double exact = 0.0;
  double abs_error = 0.0;
};

std::vector<OracleRow> oracle_rows(const OracleGrid& grid);

// CSV with header "D,f1,f2,a,b,Pb_formula,Pb_exact,abs_error".
void emit_oracle_table(const std::vector<OracleRow>& rows, std::ostream& out);
void emit_oracle_table(const std::vector<OracleRow>& rows, const std::string& path);

}  // namespace bbmh::estimate
