#include <algorithm>
#include <cmath>
#include <numeric>

#include "bbmh/error.hpp"
#include "bbmh/mix.hpp"
#include "bbmh/pipeline.hpp"

namespace bbmh::pipeline {

// Expected overlaps: same class |G| q^2 + |P| q^2, other class |G| q^2, and
// a = 2 f R / (1 + R) for two size-f sets with resemblance R.
AnalogPools analog_pools(const AnalogConfig& c) {
  if (c.records == 0 || c.nonzeros == 0) throw InvalidArgument("analog: records and nonzeros must be positive");
  if (!(c.retain > 0.0 && c.retain <= 1.0)) throw InvalidArgument("analog: retain must lie in (0, 1]");
  if (!(c.cross >= 0.0 && c.cross < c.within && c.within < 1.0)) {
    throw InvalidArgument("analog: requires 0 <= cross < within < 1");
  }
  if (!(c.label_noise >= 0.0 && c.label_noise < 0.5)) throw InvalidArgument("analog: label_noise must lie in [0, 0.5)");
  const double f = static_cast<double>(c.nonzeros);
  const double q2 = c.retain * c.retain;
  const double a_cross = 2.0 * f * c.cross / (1.0 + c.cross);
  const double a_within = 2.0 * f * c.within / (1.0 + c.within);
  AnalogPools p;
  p.shared = static_cast<std::uint64_t>(std::llround(a_cross / q2));
  p.per_class = static_cast<std::uint64_t>(std::llround((a_within - a_cross) / q2));
  const double kept = c.retain * static_cast<double>(p.shared + p.per_class);
  if (kept > f) throw InvalidArgument("analog: retain too small for the requested resemblances");
  p.noise = static_cast<std::uint64_t>(std::llround(f - kept));
  if (p.shared + 2 * p.per_class + p.noise >= c.dim) throw InvalidArgument("analog: pools do not fit in dim");
  return p;
}

learn::Dataset generate_analog(const AnalogConfig& c) {
  const AnalogPools pools = analog_pools(c);
  if (c.dim > (std::uint64_t{1} << 32)) throw InvalidArgument("analog: dim exceeds 2^32");

  std::vector<std::uint32_t> universe(static_cast<std::size_t>(c.dim));
  std::iota(universe.begin(), universe.end(), std::uint32_t{0});
  SplitMixStream rng(derive_seed(c.seed, 0, tag::kData));
  for (std::size_t i = universe.size(); i > 1; --i) std::swap(universe[i - 1], universe[rng.bounded(i)]);

  const std::size_t shared_end = static_cast<std::size_t>(pools.shared);
  const std::size_t pos_end = shared_end + static_cast<std::size_t>(pools.per_class);
  const std::size_t neg_end = pos_end + static_cast<std::size_t>(pools.per_class);
  const std::uint64_t noise_range = c.dim - neg_end;

  learn::Dataset data;
  data.dim = c.dim;
  data.records.resize(static_cast<std::size_t>(c.records));
  for (std::uint64_t r = 0; r < c.records; ++r) {
    SplitMixStream rec(derive_seed(c.seed, r + 1, tag::kData));
    learn::Example& ex = data.records[static_cast<std::size_t>(r)];
    ex.label = rec.uniform() < 0.5 ? 1 : -1;
    const std::size_t class_begin = ex.label > 0 ? shared_end : pos_end;
    const std::size_t class_end = ex.label > 0 ? pos_end : neg_end;
    auto& idx = ex.x.indices;
    for (std::size_t i = 0; i < shared_end; ++i) {
      if (rec.uniform() < c.retain) idx.push_back(universe[i]);
    }
    for (std::size_t i = class_begin; i < class_end; ++i) {
      if (rec.uniform() < c.retain) idx.push_back(universe[i]);
    }
    for (std::uint64_t t = 0; t < pools.noise; ++t) {
      idx.push_back(universe[neg_end + static_cast<std::size_t>(rec.bounded(noise_range))]);
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    if (c.label_noise > 0.0 && rec.uniform() < c.label_noise) ex.label = -ex.label;
  }
  return data;
}

}  // namespace bbmh::pipeline
