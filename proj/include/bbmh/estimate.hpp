#pragma once

#include <cstdint>

namespace bbmh::estimate {

// Ground-truth statistics of a set pair: universe size D, cardinalities
// f1 = |S1|, f2 = |S2| and intersection a = |S1 n S2|.
class PairStats {
 public:
  // Requires f1 + f2 > 0, a <= min(f1, f2) and f1 + f2 - a <= D.
  PairStats(std::uint64_t universe_size, std::uint64_t f1, std::uint64_t f2, std::uint64_t a);

  std::uint64_t universe_size() const noexcept { return d_; }
  std::uint64_t f1() const noexcept { return f1_; }
  std::uint64_t f2() const noexcept { return f2_; }
  std::uint64_t a() const noexcept { return a_; }
  std::uint64_t union_size() const noexcept { return f1_ + f2_ - a_; }

  // R = a / (f1 + f2 - a).
  double resemblance() const noexcept;
  double r1() const noexcept;
  double r2() const noexcept;

 private:
  std::uint64_t d_, f1_, f2_, a_;
};

struct BbitConstants {
  unsigned b = 0;
  double a1 = 0.0;  // A_{1,b}
  double a2 = 0.0;  // A_{2,b}
  double c1 = 0.0;  // C_{1,b}
  double c2 = 0.0;  // C_{2,b}
  double pb = 0.0;  // P_b = C_{1,b} + (1 - C_{2,b}) R
};

// A_b(r) = r (1-r)^(2^b - 1) / (1 - (1-r)^(2^b)), with A_b(0) = 2^-b.
double sparsity_coefficient(double r, unsigned b);

// Large-D collision probability of the lowest b bits and its constants.
// b may range over [1, 64] so the minwise (b -> 64) limit can be evaluated.
BbitConstants bbit_constants(const PairStats& stats, unsigned b);

// (T/k - C1) / (1 - C2). Not clamped: small k can leave [0, 1].
double estimate_resemblance_b(std::uint32_t matches, std::uint32_t k, const BbitConstants& constants);

// Same estimate clamped into [0, 1].
double estimate_resemblance_b_clamped(std::uint32_t matches, std::uint32_t k,
                                      const BbitConstants& constants);

// Plain minwise estimator T / k.
double estimate_resemblance_minwise(std::uint32_t matches, std::uint32_t k);

// R (1 - R) / k.
double variance_minwise(double resemblance, std::uint32_t k);

// Pb (1 - Pb) / (k (1 - C2)^2).
double variance_bbit(const BbitConstants& constants, std::uint32_t k);

// Variance after re-hashing the expanded vectors with VW (s = 1) at width m:
// variance_bbit + (1/m) (1 + Pb^2 - Pb (1 + Pb) / k) / (1 - C2)^2.
double variance_bbit_vw(const BbitConstants& constants, std::uint32_t k, std::uint64_t m);

}  // namespace bbmh::estimate
