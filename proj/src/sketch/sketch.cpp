#include "bbmh/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bbmh/error.hpp"
#include "bbmh/mix.hpp"

namespace bbmh::sketch {

SparseVector SparseVector::binary(std::uint64_t dim, std::vector<std::uint64_t> indices) {
  SparseVector v{dim, std::move(indices), {}};
  v.validate();
  return v;
}

SparseVector SparseVector::real(std::uint64_t dim, std::vector<std::uint64_t> indices,
                                std::vector<double> values) {
  SparseVector v{dim, std::move(indices), std::move(values)};
  v.validate();
  return v;
}

void SparseVector::validate() const {
  if (!values.empty() && values.size() != indices.size()) {
    throw InvalidArgument("SparseVector: values must parallel indices");
  }
  std::vector<std::uint64_t> sorted(indices);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("SparseVector: duplicate index");
  }
  if (!sorted.empty() && sorted.back() >= dim) throw InvalidArgument("SparseVector: index outside dimension");
}

SignDistribution::SignDistribution(Family family, double s)
    : family_(family), s_(s), scale_(std::sqrt(s)) {}

SignDistribution SignDistribution::sparse(double s) {
  if (!(s >= 1.0) || !std::isfinite(s)) throw InvalidArgument("SignDistribution: s must be >= 1");
  return SignDistribution(Family::sparse, s);
}

SignDistribution SignDistribution::normal() { return SignDistribution(Family::normal, 3.0); }

double SignDistribution::draw(std::uint64_t hash) const noexcept {
  if (family_ == Family::normal) {
    const double u1 = (static_cast<double>(hash >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = to_unit_interval(mix64(hash ^ 0x6e6f726d616c3231ULL));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  const double u = to_unit_interval(hash);
  const double half = 0.5 / s_;
  if (u < half) return scale_;
  if (u < 2.0 * half) return -scale_;
  return 0.0;
}

std::size_t SketchVector::nonzeros() const noexcept {
  return static_cast<std::size_t>(std::count_if(coords.begin(), coords.end(), [](double c) { return c != 0.0; }));
}

namespace {

std::uint64_t bucket_key(std::uint64_t seed) { return derive_seed(seed, 0, tag::kBucket); }
std::uint64_t sign_key(std::uint64_t seed) { return derive_seed(seed, 0, tag::kSign); }
std::uint64_t projection_key(std::uint64_t seed, std::uint32_t column) {
  return derive_seed(seed, column, tag::kProjection);
}

void check_width(std::uint32_t k) {
  if (k == 0) throw InvalidArgument("sketch width k must be at least 1");
}

}  // namespace

std::uint32_t bucket_of(std::uint64_t seed, std::uint64_t index, std::uint32_t k) {
  check_width(k);
  return static_cast<std::uint32_t>(reduce_range(keyed_hash(bucket_key(seed), index), k));
}

double sign_of(std::uint64_t seed, std::uint64_t index, const SignDistribution& sign) {
  return sign.draw(keyed_hash(sign_key(seed), index));
}

double projection_entry(std::uint64_t seed, std::uint64_t index, std::uint32_t column,
                        const SignDistribution& sign) {
  return sign.draw(keyed_hash(projection_key(seed, column), index));
}

SketchVector cm_sketch(const SparseVector& v, std::uint32_t k, std::uint64_t seed) {
  check_width(k);
  SketchVector out{SketchKind::cm, 1.0, SignDistribution::Family::sparse, seed, std::vector<double>(k, 0.0)};
  const std::uint64_t bkey = bucket_key(seed);
  for (std::size_t p = 0; p < v.nonzeros(); ++p) {
    out.coords[reduce_range(keyed_hash(bkey, v.indices[p]), k)] += v.value(p);
  }
  return out;
}

SketchVector vw_sketch(const SparseVector& v, std::uint32_t k, std::uint64_t seed,
                       const SignDistribution& sign) {
  check_width(k);
  SketchVector out{SketchKind::vw, sign.s(), sign.family(), seed, std::vector<double>(k, 0.0)};
  const std::uint64_t bkey = bucket_key(seed);
  const std::uint64_t skey = sign_key(seed);
  for (std::size_t p = 0; p < v.nonzeros(); ++p) {
    const std::uint64_t i = v.indices[p];
    const double r = sign.draw(keyed_hash(skey, i));
    if (r == 0.0) continue;
    out.coords[reduce_range(keyed_hash(bkey, i), k)] += v.value(p) * r;
  }
  return out;
}

SketchVector rp_sketch(const SparseVector& v, std::uint32_t k, std::uint64_t seed,
                       const SignDistribution& sign) {
  check_width(k);
  SketchVector out{SketchKind::rp, sign.s(), sign.family(), seed, std::vector<double>(k, 0.0)};
  for (std::uint32_t j = 0; j < k; ++j) {
    const std::uint64_t key = projection_key(seed, j);
    double acc = 0.0;
    for (std::size_t p = 0; p < v.nonzeros(); ++p) {
      acc += v.value(p) * sign.draw(keyed_hash(key, v.indices[p]));
    }
    out.coords[j] = acc;
  }
  return out;
}

double estimate_inner(const SketchVector& sk1, const SketchVector& sk2, EstimatorKind kind,
                      std::optional<Marginals> marginals) {
  if (sk1.seed != sk2.seed || sk1.width() != sk2.width() || sk1.kind != sk2.kind ||
      sk1.s != sk2.s || sk1.family != sk2.family) {
    throw IncompatibleSketch("estimate_inner: sketches differ in seed, width, kind or distribution");
  }
  const SketchKind expected = [kind] {
    switch (kind) {
      case EstimatorKind::cm:
      case EstimatorKind::cm_unbiased: return SketchKind::cm;
      case EstimatorKind::vw: return SketchKind::vw;
      case EstimatorKind::rp: return SketchKind::rp;
    }
    return SketchKind::cm;
  }();
  if (sk1.kind != expected) throw IncompatibleSketch("estimate_inner: estimator does not match sketch kind");

  const std::uint32_t k = sk1.width();
  double dot = 0.0;
  for (std::uint32_t q = 0; q < k; ++q) dot += sk1.coords[q] * sk2.coords[q];

  switch (kind) {
    case EstimatorKind::cm:
    case EstimatorKind::vw:
      return dot;
    case EstimatorKind::rp:
      return dot / k;
    case EstimatorKind::cm_unbiased: {
      if (k < 2) throw InvalidArgument("estimate_inner: the unbiased CM estimator needs k >= 2");
      Marginals mg;
      if (marginals) {
        mg = *marginals;
      } else {
        for (std::uint32_t q = 0; q < k; ++q) {
          mg.sum1 += sk1.coords[q];
          mg.sum2 += sk2.coords[q];
        }
      }
      return (static_cast<double>(k) / (k - 1)) * (dot - mg.sum1 * mg.sum2 / k);
    }
  }
  return dot;
}

PairMoments PairMoments::of(const SparseVector& u1, const SparseVector& u2) {
  PairMoments m;
  for (std::size_t p = 0; p < u1.nonzeros(); ++p) {
    m.sum1 += u1.value(p);
    m.sq1 += u1.value(p) * u1.value(p);
  }
  for (std::size_t p = 0; p < u2.nonzeros(); ++p) {
    m.sum2 += u2.value(p);
    m.sq2 += u2.value(p) * u2.value(p);
  }
  // Indices are not required to be sorted, so pair entries through a sorted copy.
  std::vector<std::pair<std::uint64_t, double>> e1, e2;
  for (std::size_t p = 0; p < u1.nonzeros(); ++p) e1.emplace_back(u1.indices[p], u1.value(p));
  for (std::size_t p = 0; p < u2.nonzeros(); ++p) e2.emplace_back(u2.indices[p], u2.value(p));
  std::sort(e1.begin(), e1.end());
  std::sort(e2.begin(), e2.end());
  std::size_t i = 0, j = 0;
  while (i < e1.size() && j < e2.size()) {
    if (e1[i].first < e2[j].first) {
      ++i;
    } else if (e2[j].first < e1[i].first) {
      ++j;
    } else {
      const double prod = e1[i].second * e2[j].second;
      m.inner += prod;
      m.inner_sq += prod * prod;
      ++i;
      ++j;
    }
  }
  return m;
}

PairMoments PairMoments::binary(double f1, double f2, double a) {
  return PairMoments{f1, f2, f1, f2, a, a};
}

namespace {

double spread(const PairMoments& m) { return m.sq1 * m.sq2 + m.inner * m.inner - 2.0 * m.inner_sq; }

}  // namespace

double cm_mean(const PairMoments& m, std::uint32_t k) {
  check_width(k);
  return m.inner + (m.sum1 * m.sum2 - m.inner) / k;
}

double cm_variance(const PairMoments& m, std::uint32_t k) {
  check_width(k);
  return (1.0 / k) * (1.0 - 1.0 / k) * spread(m);
}

double cm_unbiased_variance(const PairMoments& m, std::uint32_t k) {
  if (k < 2) throw InvalidArgument("cm_unbiased_variance: k must be at least 2");
  return spread(m) / (k - 1);
}

double vw_variance(const PairMoments& m, std::uint32_t k, double s) {
  check_width(k);
  return (s - 1.0) * m.inner_sq + spread(m) / k;
}

double rp_variance(const PairMoments& m, std::uint32_t k, double s) {
  check_width(k);
  return (m.sq1 * m.sq2 + m.inner * m.inner + (s - 3.0) * m.inner_sq) / k;
}

}  // namespace bbmh::sketch
