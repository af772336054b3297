#include "bbmh/exact_oracle.hpp"

#include <string>

#include "bbmh/error.hpp"

namespace bbmh::estimate {

namespace {

void check_oracle_input(const PairStats& stats, unsigned b, std::uint64_t cap) {
  if (b < 1 || b > 64) throw InvalidArgument("exact_pb: b must lie in [1, 64]");
  if (stats.f1() == 0 || stats.f2() == 0) {
    throw InvalidArgument("exact_pb: both sets must be nonempty");
  }
  if (stats.universe_size() > cap) {
    throw OracleCapacityError("exact_pb: D = " + std::to_string(stats.universe_size()) +
                              " exceeds the oracle capacity " + std::to_string(cap));
  }
}

// wait[m] = Pr(the first S-element among m remaining positions sits at an
// offset t with t = period - 1 (mod period)), for a set S of size f.
// Uses  S_r(m) = [r = 0] f/m + (m - f)/m * S_{r-1 mod period}(m - 1).
template <typename Scalar>
std::vector<Scalar> residue_wait(std::uint64_t d, std::uint64_t f, std::uint64_t period) {
  std::vector<Scalar> wait(d, Scalar(0));
  std::vector<Scalar> current(period, Scalar(0));
  std::vector<Scalar> next(period, Scalar(0));
  for (std::uint64_t m = 1; m < d; ++m) {
    if (m < f) continue;  // unreachable: fewer positions than S-elements
    const Scalar hit = Scalar(f) / Scalar(m);
    const Scalar miss = Scalar(m - f) / Scalar(m);
    for (std::uint64_t r = 0; r < period; ++r) {
      const std::uint64_t prev = (r == 0) ? period - 1 : r - 1;
      next[r] = miss * current[prev];
    }
    next[0] += hit;
    std::swap(current, next);
    wait[m] = current[period - 1];
  }
  return wait;
}

template <typename Scalar>
Scalar exact_pb_impl(const PairStats& stats, unsigned b) {
  const std::uint64_t d = stats.universe_size();
  const std::uint64_t a = stats.a();
  const std::uint64_t only1 = stats.f1() - a;
  const std::uint64_t only2 = stats.f2() - a;
  const std::uint64_t outside = d - stats.union_size();

  // Off-diagonal matches need |z1 - z2| to be a positive multiple of 2^b <= D - 1.
  const bool off_diagonal = b < 63 && (std::uint64_t{1} << b) < d;
  std::vector<Scalar> wait2, wait1;
  if (off_diagonal) {
    const std::uint64_t period = std::uint64_t{1} << b;
    wait2 = residue_wait<Scalar>(d, stats.f2(), period);
    wait1 = residue_wait<Scalar>(d, stats.f1(), period);
  }

  Scalar total(0);
  Scalar prefix(1);  // Pr(the first i positions all hold outside elements)
  for (std::uint64_t i = 0; i < d; ++i) {
    if (i > 0) {
      if (outside < i) break;
      prefix *= Scalar(outside - (i - 1)) / Scalar(d - (i - 1));
    }
    const Scalar remaining(d - i);
    total += prefix * Scalar(a) / remaining;
    if (off_diagonal && i + 1 < d) {
      total += prefix * Scalar(only1) / remaining * wait2[d - i - 1];
      total += prefix * Scalar(only2) / remaining * wait1[d - i - 1];
    }
  }
  return total;
}

}  // namespace

double exact_pb(const PairStats& stats, unsigned b, const OracleOptions& options) {
  check_oracle_input(stats, b, options.max_universe);
  return exact_pb_impl<double>(stats, b);
}

Rational exact_pb_rational(const PairStats& stats, unsigned b) {
  check_oracle_input(stats, b, kMaxRationalUniverse);
  return exact_pb_impl<Rational>(stats, b);
}

std::vector<double> exact_joint_pmf(const PairStats& stats, const OracleOptions& options) {
  check_oracle_input(stats, 1, options.max_universe);
  const std::uint64_t d = stats.universe_size();
  const std::uint64_t a = stats.a();
  const std::uint64_t f[2] = {stats.f1(), stats.f2()};
  const std::uint64_t only[2] = {f[0] - a, f[1] - a};
  const std::uint64_t outside = d - stats.union_size();
  const auto idx = [d](std::uint64_t i, std::uint64_t j) { return static_cast<std::size_t>(i * d + j); };

  std::vector<double> pmf(static_cast<std::size_t>(d * d), 0.0);
  double prefix = 1.0;
  for (std::uint64_t i = 0; i < d; ++i) {
    if (i > 0) {
      if (outside < i) break;
      prefix *= static_cast<double>(outside - (i - 1)) / static_cast<double>(d - (i - 1));
    }
    const double remaining = static_cast<double>(d - i);
    pmf[idx(i, i)] = prefix * static_cast<double>(a) / remaining;
    // first = 0: S1-only element at i, then wait for S2 (and symmetrically).
    for (int first = 0; first < 2; ++first) {
      const std::uint64_t other = f[1 - first];
      double head = prefix * static_cast<double>(only[first]) / remaining;
      // Positions i+1 .. j-1 avoid the other set: (D-other-i-1)_t / (D-i-1)_t.
      for (std::uint64_t j = i + 1; j < d && head > 0.0; ++j) {
        const double p = head * static_cast<double>(other) / static_cast<double>(d - j);
        if (first == 0) pmf[idx(i, j)] = p; else pmf[idx(j, i)] = p;
        const std::uint64_t step = j - i - 1;
        if (d - other < i + 1 + step + 1) break;
        head *= static_cast<double>(d - other - i - 1 - step) / static_cast<double>(d - i - 1 - step);
      }
    }
  }
  return pmf;
}

double pb_from_joint_pmf(const std::vector<double>& pmf, std::uint64_t universe_size, unsigned b) {
  if (pmf.size() != universe_size * universe_size) {
    throw InvalidArgument("pb_from_joint_pmf: matrix size does not match D");
  }
  if (b < 1 || b > 64) throw InvalidArgument("pb_from_joint_pmf: b must lie in [1, 64]");
  const std::uint64_t mask = b >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << b) - 1;
  double total = 0.0;
  for (std::uint64_t i = 0; i < universe_size; ++i) {
    for (std::uint64_t j = 0; j < universe_size; ++j) {
      if ((i & mask) == (j & mask)) total += pmf[static_cast<std::size_t>(i * universe_size + j)];
    }
  }
  return total;
}

}  // namespace bbmh::estimate
