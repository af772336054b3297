#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace bbmh::sketch {

// Sparse real vector in R^D. `values` empty means every listed entry is 1.
struct SparseVector {
  std::uint64_t dim = 0;
  std::vector<std::uint64_t> indices;
  std::vector<double> values;

  static SparseVector binary(std::uint64_t dim, std::vector<std::uint64_t> indices);
  static SparseVector real(std::uint64_t dim, std::vector<std::uint64_t> indices,
                           std::vector<double> values);

  bool is_binary() const noexcept { return values.empty(); }
  std::size_t nonzeros() const noexcept { return indices.size(); }
  double value(std::size_t pos) const noexcept { return values.empty() ? 1.0 : values[pos]; }

  // Throws InvalidArgument unless indices are unique, below dim, and values
  // (when present) are parallel to indices.
  void validate() const;
};

// Random multipliers with E r = 0, E r^2 = 1, E r^3 = 0, E r^4 = s.
//   sparse: sqrt(s) * {+1 w.p. 1/(2s), 0 w.p. 1 - 1/s, -1 w.p. 1/(2s)}, s >= 1
//   normal: standard normal (s = 3)
class SignDistribution {
 public:
  enum class Family : std::uint8_t { sparse, normal };

  static SignDistribution sparse(double s);
  static SignDistribution normal();

  // s = 1: the symmetric +-1 distribution.
  static SignDistribution rademacher() { return sparse(1.0); }

  Family family() const noexcept { return family_; }
  double s() const noexcept { return s_; }

  // Deterministic draw from a 64-bit hash.
  double draw(std::uint64_t hash) const noexcept;

  friend bool operator==(const SignDistribution&, const SignDistribution&) = default;

 private:
  SignDistribution(Family family, double s);
  Family family_;
  double s_;
  double scale_;
};

enum class SketchKind : std::uint8_t { cm = 0, vw = 1, rp = 2 };

enum class EstimatorKind : std::uint8_t { cm, cm_unbiased, vw, rp };

struct SketchVector {
  SketchKind kind = SketchKind::cm;
  double s = 1.0;                    // fourth moment of the multipliers (1 for cm)
  SignDistribution::Family family = SignDistribution::Family::sparse;
  std::uint64_t seed = 0;
  std::vector<double> coords;

  std::uint32_t width() const noexcept { return static_cast<std::uint32_t>(coords.size()); }
  std::size_t nonzeros() const noexcept;
};

// Bucket of index i in a width-k sketch seeded with `seed`: uniform on [0, k).
std::uint32_t bucket_of(std::uint64_t seed, std::uint64_t index, std::uint32_t k);

// Multiplier r_i of index i for VW sketches seeded with `seed`.
double sign_of(std::uint64_t seed, std::uint64_t index, const SignDistribution& sign);

// Projection entry r_{ij} of an RP sketch seeded with `seed`.
double projection_entry(std::uint64_t seed, std::uint64_t index, std::uint32_t column,
                        const SignDistribution& sign);

// w_q = sum_i v_i [h(i) = q].
SketchVector cm_sketch(const SparseVector& v, std::uint32_t k, std::uint64_t seed);

// g_q = sum_i v_i r_i [h(i) = q]; h and r are shared by every vector
// sketched with the same seed.
SketchVector vw_sketch(const SparseVector& v, std::uint32_t k, std::uint64_t seed,
                       const SignDistribution& sign);

// v_j = sum_i u_i r_ij with i.i.d. r_ij.
SketchVector rp_sketch(const SparseVector& v, std::uint32_t k, std::uint64_t seed,
                       const SignDistribution& sign);

// Marginal sums (sum u1, sum u2) needed by the bias-corrected CM estimator.
struct Marginals {
  double sum1 = 0.0;
  double sum2 = 0.0;
};

// Inner-product estimate from two sketches made with the same seed, width
// and kind.
//   cm:           sum_q w1q w2q (biased)
//   cm_unbiased:  k/(k-1) (cm - sum1 sum2 / k); marginals default to the
//                 coordinate sums, which equal the input sums for CM
//   vw:           sum_q g1q g2q
//   rp:           (1/k) sum_j v1j v2j
double estimate_inner(const SketchVector& sk1, const SketchVector& sk2, EstimatorKind kind,
                      std::optional<Marginals> marginals = std::nullopt);

// The sums that determine every mean and variance below.
struct PairMoments {
  double sum1 = 0.0;        // sum u1
  double sum2 = 0.0;        // sum u2
  double sq1 = 0.0;         // sum u1^2
  double sq2 = 0.0;         // sum u2^2
  double inner = 0.0;       // a = sum u1 u2
  double inner_sq = 0.0;    // sum u1^2 u2^2

  static PairMoments of(const SparseVector& u1, const SparseVector& u2);
  // Binary vectors with |u1| = f1, |u2| = f2, overlap a.
  static PairMoments binary(double f1, double f2, double a);
};

// a + (sum1 sum2 - a) / k
double cm_mean(const PairMoments& m, std::uint32_t k);
// (1/k)(1 - 1/k)[sq1 sq2 + a^2 - 2 inner_sq]
double cm_variance(const PairMoments& m, std::uint32_t k);
// [sq1 sq2 + a^2 - 2 inner_sq] / (k - 1)
double cm_unbiased_variance(const PairMoments& m, std::uint32_t k);
// (s - 1) inner_sq + (1/k)[sq1 sq2 + a^2 - 2 inner_sq]
double vw_variance(const PairMoments& m, std::uint32_t k, double s);
// (1/k)[sq1 sq2 + a^2 + (s - 3) inner_sq]
double rp_variance(const PairMoments& m, std::uint32_t k, double s);

}  // namespace bbmh::sketch
