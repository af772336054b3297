#include "bbmh/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bbmh/error.hpp"

namespace bbmh::estimate {

PairStats::PairStats(std::uint64_t universe_size, std::uint64_t f1, std::uint64_t f2, std::uint64_t a)
    : d_(universe_size), f1_(f1), f2_(f2), a_(a) {
  if (d_ == 0) throw InvalidArgument("PairStats: D must be positive");
  if (f1 == 0 && f2 == 0) throw InvalidArgument("PairStats: f1 + f2 must be positive");
  if (a > std::min(f1, f2)) throw InvalidArgument("PairStats: a exceeds min(f1, f2)");
  if (f1 > d_ || f2 > d_ || f1 + f2 - a > d_) {
    throw InvalidArgument("PairStats: the union of the sets does not fit in the universe");
  }
}

double PairStats::resemblance() const noexcept {
  return static_cast<double>(a_) / static_cast<double>(f1_ + f2_ - a_);
}

double PairStats::r1() const noexcept { return static_cast<double>(f1_) / static_cast<double>(d_); }
double PairStats::r2() const noexcept { return static_cast<double>(f2_) / static_cast<double>(d_); }

double sparsity_coefficient(double r, unsigned b) {
  if (b < 1 || b > 64) throw InvalidArgument("sparsity_coefficient: b must lie in [1, 64]");
  if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("sparsity_coefficient: r must lie in [0, 1]");
  const double n = std::ldexp(1.0, static_cast<int>(b));
  if (r == 0.0) return 1.0 / n;
  // log1p/expm1 keep full relative precision as r -> 0, where the textbook
  // form 1 - (1-r)^n cancels catastrophically.
  const double log_q = std::log1p(-r);
  const double numer = r * std::exp((n - 1.0) * log_q);
  const double denom = -std::expm1(n * log_q);
  return numer / denom;
}

BbitConstants bbit_constants(const PairStats& stats, unsigned b) {
  if (b < 1 || b > 64) throw InvalidArgument("bbit_constants: b must lie in [1, 64]");
  const double r1 = stats.r1();
  const double r2 = stats.r2();
  BbitConstants c;
  c.b = b;
  c.a1 = sparsity_coefficient(r1, b);
  c.a2 = sparsity_coefficient(r2, b);
  const double w1 = r1 / (r1 + r2);
  const double w2 = r2 / (r1 + r2);
  c.c1 = c.a1 * w2 + c.a2 * w1;
  c.c2 = c.a1 * w1 + c.a2 * w2;
  c.pb = c.c1 + (1.0 - c.c2) * stats.resemblance();
  return c;
}

double estimate_resemblance_b(std::uint32_t matches, std::uint32_t k, const BbitConstants& constants) {
  if (k == 0) throw InvalidArgument("estimate_resemblance_b: k must be positive");
  if (matches > k) throw InvalidArgument("estimate_resemblance_b: more matches than samples");
  if (!(constants.c2 < 1.0)) throw InvalidArgument("estimate_resemblance_b: requires 1 - C2 > 0");
  const double p_hat = static_cast<double>(matches) / static_cast<double>(k);
  return (p_hat - constants.c1) / (1.0 - constants.c2);
}

double estimate_resemblance_b_clamped(std::uint32_t matches, std::uint32_t k,
                                      const BbitConstants& constants) {
  return std::clamp(estimate_resemblance_b(matches, k, constants), 0.0, 1.0);
}

double estimate_resemblance_minwise(std::uint32_t matches, std::uint32_t k) {
  if (k == 0) throw InvalidArgument("estimate_resemblance_minwise: k must be positive");
  if (matches > k) throw InvalidArgument("estimate_resemblance_minwise: more matches than samples");
  return static_cast<double>(matches) / static_cast<double>(k);
}

double variance_minwise(double resemblance, std::uint32_t k) {
  if (k == 0) throw InvalidArgument("variance_minwise: k must be positive");
  if (!(resemblance >= 0.0 && resemblance <= 1.0)) {
    throw InvalidArgument("variance_minwise: R must lie in [0, 1]");
  }
  return resemblance * (1.0 - resemblance) / k;
}

double variance_bbit(const BbitConstants& constants, std::uint32_t k) {
  if (k == 0) throw InvalidArgument("variance_bbit: k must be positive");
  const double scale = 1.0 - constants.c2;
  return constants.pb * (1.0 - constants.pb) / (k * scale * scale);
}

double variance_bbit_vw(const BbitConstants& constants, std::uint32_t k, std::uint64_t m) {
  if (k == 0 || m == 0) throw InvalidArgument("variance_bbit_vw: k and m must be positive");
  const double pb = constants.pb;
  const double scale = 1.0 - constants.c2;
  const double extra = (1.0 + pb * pb - pb * (1.0 + pb) / k) / (static_cast<double>(m) * scale * scale);
  return variance_bbit(constants, k) + extra;
}

}  // namespace bbmh::estimate
