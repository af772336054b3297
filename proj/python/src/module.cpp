#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bbmh/analysis.hpp"
#include "bbmh/error.hpp"
#include "bbmh/estimate.hpp"
#include "bbmh/exact_oracle.hpp"
#include "bbmh/features.hpp"
#include "bbmh/hashcore.hpp"
#include "bbmh/learn.hpp"
#include "bbmh/pipeline.hpp"
#include "bbmh/sketch.hpp"

namespace py = pybind11;
using namespace bbmh;

namespace {

using Records = std::vector<std::pair<int, std::vector<std::uint32_t>>>;

hashcore::PermutationMode mode_of(const std::string& name) {
  if (name == "hashed") return hashcore::PermutationMode::hashed_permutation;
  if (name == "exact") return hashcore::PermutationMode::exact_permutation;
  throw InvalidArgument("mode must be 'hashed' or 'exact'");
}

learn::Dataset dataset_of(const Records& records, std::uint64_t dim) {
  learn::Dataset d;
  d.dim = dim;
  for (const auto& [label, idx] : records) {
    learn::Example ex;
    ex.label = label;
    ex.x.indices = idx;
    d.records.push_back(std::move(ex));
  }
  return d;
}

Records records_of(const learn::Dataset& d) {
  Records out;
  out.reserve(d.size());
  for (const auto& ex : d.records) out.emplace_back(ex.label, ex.x.indices);
  return out;
}

sketch::SignDistribution sign_of(double s, bool normal) {
  return normal ? sketch::SignDistribution::normal() : sketch::SignDistribution::sparse(s);
}

sketch::SparseVector vector_of(std::uint64_t dim, std::vector<std::uint64_t> idx, std::vector<double> values) {
  return values.empty() ? sketch::SparseVector::binary(dim, std::move(idx))
                        : sketch::SparseVector::real(dim, std::move(idx), std::move(values));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "b-bit minwise hashing, sketches and linear learning";

  // Translators run newest first, so the base class goes first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<EmptySetError>(m, "EmptySetError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def(
      "minhash",
      [](const std::vector<std::uint64_t>& indices, std::uint32_t k, std::uint64_t seed, std::uint64_t universe,
         const std::string& mode) {
        const auto fam = hashcore::build_family(seed, k, universe, mode_of(mode));
        return hashcore::minhash(fam, std::span<const std::uint64_t>(indices)).values;
      },
      py::arg("indices"), py::arg("k"), py::arg("seed") = 1, py::arg("universe") = std::uint64_t{1} << 32,
      py::arg("mode") = "hashed", "Minimum hashed position of the set under each of k permutations.");

  m.def(
      "truncate_b",
      [](const std::vector<std::uint64_t>& values, unsigned b) {
        hashcore::MinhashSignature sig;
        sig.values = values;
        return hashcore::truncate_b(sig, b).values();
      },
      py::arg("values"), py::arg("b"), "Lowest b bits of each minhash value.");

  m.def(
      "match_count",
      [](const std::vector<std::uint16_t>& x, const std::vector<std::uint16_t>& y, unsigned b) {
        return hashcore::match_count(hashcore::BbitSignature(b, x), hashcore::BbitSignature(b, y));
      },
      py::arg("x"), py::arg("y"), py::arg("b"));

  m.def(
      "expand",
      [](const std::vector<std::uint16_t>& values, unsigned b) {
        return features::expand(hashcore::BbitSignature(b, values)).ones;
      },
      py::arg("values"), py::arg("b"), "Positions of the ones in the 2^b * k one-hot expansion.");

  m.def(
      "bbit_constants",
      [](std::uint64_t D, std::uint64_t f1, std::uint64_t f2, std::uint64_t a, unsigned b) {
        const auto c = estimate::bbit_constants(estimate::PairStats(D, f1, f2, a), b);
        return py::dict(py::arg("A1") = c.a1, py::arg("A2") = c.a2, py::arg("C1") = c.c1, py::arg("C2") = c.c2,
                        py::arg("Pb") = c.pb);
      },
      py::arg("D"), py::arg("f1"), py::arg("f2"), py::arg("a"), py::arg("b"));

  m.def(
      "exact_pb",
      [](std::uint64_t D, std::uint64_t f1, std::uint64_t f2, std::uint64_t a, unsigned b) {
        return estimate::exact_pb(estimate::PairStats(D, f1, f2, a), b);
      },
      py::arg("D"), py::arg("f1"), py::arg("f2"), py::arg("a"), py::arg("b"));

  m.def(
      "estimate_resemblance",
      [](std::uint32_t matches, std::uint32_t k, std::uint64_t D, std::uint64_t f1, std::uint64_t f2, unsigned b) {
        // The constants depend on f1, f2 only through r1, r2; a = 0 is a placeholder.
        const auto c = estimate::bbit_constants(estimate::PairStats(D, f1, f2, 0), b);
        return estimate::estimate_resemblance_b(matches, k, c);
      },
      py::arg("matches"), py::arg("k"), py::arg("D"), py::arg("f1"), py::arg("f2"), py::arg("b"));

  m.def(
      "variance_bbit",
      [](std::uint64_t D, std::uint64_t f1, std::uint64_t f2, std::uint64_t a, unsigned b, std::uint32_t k) {
        return estimate::variance_bbit(estimate::bbit_constants(estimate::PairStats(D, f1, f2, a), b), k);
      },
      py::arg("D"), py::arg("f1"), py::arg("f2"), py::arg("a"), py::arg("b"), py::arg("k"));

  m.def(
      "sketch",
      [](const std::string& kind, std::uint64_t dim, std::vector<std::uint64_t> indices, std::vector<double> values,
         std::uint32_t k, std::uint64_t seed, double s, bool normal) {
        const auto v = vector_of(dim, std::move(indices), std::move(values));
        if (kind == "cm") return sketch::cm_sketch(v, k, seed).coords;
        if (kind == "vw") return sketch::vw_sketch(v, k, seed, sign_of(s, normal)).coords;
        if (kind == "rp") return sketch::rp_sketch(v, k, seed, sign_of(s, normal)).coords;
        throw InvalidArgument("kind must be 'cm', 'vw' or 'rp'");
      },
      py::arg("kind"), py::arg("dim"), py::arg("indices"), py::arg("values") = std::vector<double>{},
      py::arg("k"), py::arg("seed") = 1, py::arg("s") = 1.0, py::arg("normal") = false);

  m.def(
      "g_ratio",
      [](std::uint64_t D, std::uint64_t f1, std::uint64_t f2, std::uint64_t a, unsigned b, double bits) {
        analysis::ComparisonPoint p;
        p.D = D;
        p.f1 = f1;
        p.f2 = f2;
        p.a = a;
        p.b = b;
        p.bits_per_vw_sample = bits;
        return analysis::g_ratio(p);
      },
      py::arg("D"), py::arg("f1"), py::arg("f2"), py::arg("a"), py::arg("b") = 8, py::arg("bits") = 32.0);

  m.def(
      "train",
      [](const Records& records, std::uint64_t dim, const std::string& loss, double C, std::uint64_t seed,
         std::uint32_t epochs) {
        learn::TrainConfig cfg;
        cfg.seed = seed;
        cfg.max_epochs = epochs;
        return learn::train(dataset_of(records, dim), learn::parse_loss(loss), C, cfg).weights;
      },
      py::arg("records"), py::arg("dim"), py::arg("loss") = "hinge", py::arg("C") = 1.0, py::arg("seed") = 1,
      py::arg("epochs") = 40, "Linear model weights for (label, indices) records with binary features.");

  m.def(
      "predict",
      [](const std::vector<double>& weights, const std::vector<std::uint32_t>& indices) {
        learn::LinearModel model;
        model.weights = weights;
        learn::FeatureVector x;
        x.indices = indices;
        return learn::predict(model, x);
      },
      py::arg("weights"), py::arg("indices"));

  m.def(
      "generate_analog",
      [](std::uint64_t records, std::uint64_t dim, std::uint64_t nonzeros, double within, double cross,
         std::uint64_t seed) {
        pipeline::AnalogConfig c;
        c.records = records;
        c.dim = dim;
        c.nonzeros = nonzeros;
        c.within = within;
        c.cross = cross;
        c.seed = seed;
        return records_of(pipeline::generate_analog(c));
      },
      py::arg("records") = 3500, py::arg("dim") = std::uint64_t{1} << 20, py::arg("nonzeros") = 4000,
      py::arg("within") = 0.45, py::arg("cross") = 0.15, py::arg("seed") = 1);

  m.def(
      "hash_file",
      [](const std::string& input, const std::string& output, std::uint32_t k, unsigned b, std::uint64_t seed) {
        pipeline::HashOptions o;
        o.k = k;
        o.b = b;
        o.seed = seed;
        const auto r = pipeline::hash_command(o, input, output);
        return py::dict(py::arg("records") = r.records, py::arg("payload_bytes") = r.payload_bytes,
                        py::arg("file_bytes") = r.file_bytes);
      },
      py::arg("input"), py::arg("output"), py::arg("k") = 200, py::arg("b") = 8, py::arg("seed") = 1);
}
