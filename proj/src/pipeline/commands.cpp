#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <thread>

#include "bbmh/error.hpp"
#include "bbmh/features.hpp"
#include "bbmh/pipeline.hpp"
#include "bbmh/signature_file.hpp"
#include "bbmh/sketch_file.hpp"

namespace bbmh::pipeline {

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return in;
}

// Removes a partially written output unless dismissed.
class OutputGuard {
 public:
  explicit OutputGuard(std::string path) : path_(std::move(path)) {}
  ~OutputGuard() {
    if (!dismissed_) {
      std::error_code ec;
      std::filesystem::remove(path_, ec);
    }
  }
  void dismiss() { dismissed_ = true; }

 private:
  std::string path_;
  bool dismissed_ = false;
};

std::uint64_t hash_universe(const HashOptions& options) {
  if (options.universe_size != 0) return options.universe_size;
  if (options.mode == hashcore::PermutationMode::exact_permutation) {
    throw InvalidArgument("hash: exact permutations need an explicit universe size");
  }
  return std::uint64_t{1} << 32;  // parsed indices are 32-bit
}

}  // namespace

HashReport hash_command(const HashOptions& options, const std::string& dataset_path, const std::string& out_path) {
  if (options.k == 0) throw InvalidArgument("hash: k must be positive");
  const hashcore::HashFamily family(options.seed, options.k, hash_universe(options), options.mode);
  std::ifstream in = open_input(dataset_path);
  DatasetReader reader(in, ParseOptions{true, std::nullopt});

  OutputGuard guard(out_path);
  HashReport report;
  {
    hashcore::SignatureWriter writer(out_path, options.k, options.b);
    while (auto ex = reader.next()) {
      if (ex->x.indices.empty()) {
        throw EmptySetError("hash: record " + std::to_string(report.records) + " (line " +
                            std::to_string(reader.line()) + ") has no features");
      }
      const auto sig = hashcore::minhash(family, std::span<const std::uint32_t>(ex->x.indices));
      writer.append(hashcore::truncate_b(sig, options.b));
      ++report.records;
    }
    writer.close();
  }
  guard.dismiss();
  report.payload_bytes = report.records * hashcore::BbitSignature::packed_size(options.k, options.b);
  report.file_bytes = report.payload_bytes + hashcore::kSignatureHeaderSize;
  return report;
}

std::vector<hashcore::MinhashSignature> minhash_dataset(const learn::Dataset& data, std::uint32_t k,
                                                        std::uint64_t seed, hashcore::PermutationMode mode,
                                                        unsigned threads) {
  const std::uint64_t universe = std::max<std::uint64_t>(1, data.dim);
  const hashcore::HashFamily family(seed, k, universe, mode);
  std::vector<hashcore::MinhashSignature> out(data.size());
  parallel_for(data.size(), threads, [&](std::size_t i) {
    const auto& idx = data.records[i].x.indices;
    if (idx.empty()) throw EmptySetError("minhash_dataset: record " + std::to_string(i) + " has no features");
    out[i] = hashcore::minhash(family, std::span<const std::uint32_t>(idx));
  });
  return out;
}

learn::Dataset expanded_dataset(const std::vector<hashcore::MinhashSignature>& sigs, const std::vector<int>& labels,
                                std::uint32_t k, unsigned b) {
  if (labels.size() != sigs.size()) throw InvalidArgument("expanded_dataset: one label per signature required");
  learn::Dataset out;
  out.dim = (std::uint64_t{1} << b) * k;
  out.records.resize(sigs.size());
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    if (sigs[i].k() < k) throw InvalidArgument("expanded_dataset: signature shorter than k");
    hashcore::MinhashSignature prefix;
    prefix.values.assign(sigs[i].values.begin(), sigs[i].values.begin() + k);
    out.records[i].label = labels[i];
    out.records[i].x.indices = features::expand(hashcore::truncate_b(prefix, b)).ones;
  }
  return out;
}

std::uint64_t expand_command(const std::string& signature_path, const std::string& out_path,
                             const std::optional<std::string>& labels_path) {
  hashcore::SignatureReader sigs(signature_path);
  std::ifstream label_stream;
  std::optional<DatasetReader> labels;
  if (labels_path) {
    label_stream = open_input(*labels_path);
    labels.emplace(label_stream);
  }
  OutputGuard guard(out_path);
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + out_path + "' for writing");

  std::uint64_t count = 0;
  while (auto sig = sigs.next()) {
    learn::Example ex;
    if (labels) {
      auto rec = labels->next();
      if (!rec) throw FormatError("expand: label file has fewer records than the signature file");
      ex.label = rec->label;
    }
    ex.x.indices = features::expand(*sig).ones;
    write_record(out, ex);
    ++count;
  }
  out.close();
  if (!out) throw IoError("failed writing '" + out_path + "'");
  guard.dismiss();
  return count;
}

std::uint64_t sketch_command(const SketchOptions& options, const std::string& dataset_path,
                             const std::string& out_path) {
  // CM has no multipliers; its files record the s = 1 sparse family.
  const sketch::SignDistribution sign =
      options.kind == sketch::SketchKind::cm ? sketch::SignDistribution::rademacher()
      : options.normal                       ? sketch::SignDistribution::normal()
                                             : sketch::SignDistribution::sparse(options.s);
  std::ifstream in = open_input(dataset_path);
  DatasetReader reader(in);

  OutputGuard guard(out_path);
  std::uint64_t count = 0;
  {
    sketch::SketchWriter writer(out_path, options.kind, sign, options.k, options.seed);
    while (auto ex = reader.next()) {
      sketch::SparseVector v;
      v.dim = std::uint64_t{1} << 32;
      v.indices.assign(ex->x.indices.begin(), ex->x.indices.end());
      v.values = ex->x.values;
      switch (options.kind) {
        case sketch::SketchKind::cm: writer.append(sketch::cm_sketch(v, options.k, options.seed)); break;
        case sketch::SketchKind::vw: writer.append(sketch::vw_sketch(v, options.k, options.seed, sign)); break;
        case sketch::SketchKind::rp: writer.append(sketch::rp_sketch(v, options.k, options.seed, sign)); break;
      }
      ++count;
    }
    writer.close();
  }
  guard.dismiss();
  return count;
}

}  // namespace bbmh::pipeline
