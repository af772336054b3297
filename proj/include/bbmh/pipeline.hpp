#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bbmh/hashcore.hpp"
#include "bbmh/learn.hpp"
#include "bbmh/sketch.hpp"

namespace bbmh::pipeline {

// ---- sparse text datasets --------------------------------------------------
//
// One record per line: an optional label (+1, -1, 1) followed by
// whitespace-separated `index:value` pairs with 0-based strictly ascending
// indices. `#` starts a comment; blank and comment-only lines are skipped.

struct ParseOptions {
  bool binary = false;                    // reject values other than 1
  std::optional<std::uint64_t> dim;       // overrides 1 + max index
};

// Streaming reader; holds one record at a time.
class DatasetReader {
 public:
  DatasetReader(std::istream& in, ParseOptions options = {});

  std::optional<learn::Example> next();

  // Physical line number of the record last returned.
  std::size_t line() const noexcept { return line_; }
  // 1 + largest index seen so far (0 when none).
  std::uint64_t observed_dim() const noexcept { return observed_dim_; }

 private:
  std::istream& in_;
  ParseOptions options_;
  std::size_t line_ = 0;
  std::uint64_t observed_dim_ = 0;
};

learn::Dataset parse_dataset(std::istream& in, const ParseOptions& options = {});
learn::Dataset parse_dataset(const std::string& path, const ParseOptions& options = {});

// Canonical form: "+1"/"-1" label (omitted when 0), then "i:v" with v in
// shortest round-trip form. write(parse(f)) reproduces canonical files.
void write_record(std::ostream& out, const learn::Example& ex);
void write_dataset(std::ostream& out, const learn::Dataset& data);
void write_dataset(const std::string& path, const learn::Dataset& data);

// ---- hash / expand / sketch -------------------------------------------------

struct HashOptions {
  std::uint32_t k = 200;
  unsigned b = 8;
  std::uint64_t seed = 1;
  hashcore::PermutationMode mode = hashcore::PermutationMode::hashed_permutation;
  // Universe of the permutations. Required in exact mode; in hashed mode 0
  // means unbounded input indices.
  std::uint64_t universe_size = 0;
};

struct HashReport {
  std::uint64_t records = 0;
  std::uint64_t payload_bytes = 0;   // records * ceil(k b / 8)
  std::uint64_t file_bytes = 0;      // payload + header
};

// Streams a binary dataset into a BBMH file. A record with no features
// aborts the run with an error naming its 0-based index.
HashReport hash_command(const HashOptions& options, const std::string& dataset_path,
                        const std::string& out_path);

// Minhash signatures of every record, in memory.
std::vector<hashcore::MinhashSignature> minhash_dataset(const learn::Dataset& data, std::uint32_t k,
                                                        std::uint64_t seed, hashcore::PermutationMode mode,
                                                        unsigned threads = 1);

// Expanded binary features built from the first k values of each signature
// truncated to b bits; labels are copied from `labels`.
learn::Dataset expanded_dataset(const std::vector<hashcore::MinhashSignature>& sigs,
                                const std::vector<int>& labels, std::uint32_t k, unsigned b);

// BBMH file -> sparse text of the expanded vectors. Labels come from the
// records of `labels_path` (same order) when given.
std::uint64_t expand_command(const std::string& signature_path, const std::string& out_path,
                             const std::optional<std::string>& labels_path);

struct SketchOptions {
  sketch::SketchKind kind = sketch::SketchKind::vw;
  std::uint32_t k = 1024;
  std::uint64_t seed = 1;
  double s = 1.0;
  bool normal = false;   // normal multipliers instead of the sparse family
};

// Streams a dataset into an SKCH file; returns the record count.
std::uint64_t sketch_command(const SketchOptions& options, const std::string& dataset_path,
                             const std::string& out_path);

// ---- analog dataset ---------------------------------------------------------

// Two-class binary corpus. Every record keeps each token of a shared pool
// and of its class pool independently with probability `retain`, plus
// record-unique noise tokens. Pool sizes are solved so that expected
// resemblance is `within` for same-class pairs and `cross` otherwise.
struct AnalogConfig {
  std::uint64_t records = 3500;
  std::uint64_t dim = std::uint64_t{1} << 20;
  std::uint64_t nonzeros = 4000;
  double within = 0.45;
  double cross = 0.15;
  double retain = 0.7;
  double label_noise = 0.0;  // fraction of labels flipped after generation
  std::uint64_t seed = 1;
};

struct AnalogPools {
  std::uint64_t shared = 0;
  std::uint64_t per_class = 0;
  std::uint64_t noise = 0;
};

AnalogPools analog_pools(const AnalogConfig& config);
learn::Dataset generate_analog(const AnalogConfig& config);

// ---- experiment -------------------------------------------------------------

struct ExperimentConfig {
  std::uint64_t split_seed = 1;
  std::uint64_t hash_seed = 1;
  std::uint32_t repetitions = 20;
  double test_fraction = 0.2;
  std::vector<std::uint32_t> ks{30, 100, 200};
  std::vector<unsigned> bs{1, 2, 4, 8};
  std::vector<double> Cs{1.0};
  std::vector<learn::Loss> losses{learn::Loss::hinge, learn::Loss::logistic};
  bool include_original = true;
  hashcore::PermutationMode mode = hashcore::PermutationMode::hashed_permutation;
  learn::TrainConfig train;
  unsigned threads = 1;
};

struct ExperimentRow {
  std::string features;   // "original" or "bbit"
  learn::Loss loss = learn::Loss::hinge;
  double C = 1.0;
  unsigned b = 0;         // 0 for original features
  std::uint32_t k = 0;
  std::uint32_t repetitions = 0;
  std::vector<double> accuracies;
  double mean = 0.0;
  double stddev = 0.0;    // sample standard deviation; 0 for a single run
  std::string error;      // nonempty when the cell failed
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;

  const ExperimentRow* find(const std::string& features, learn::Loss loss, double C, unsigned b,
                            std::uint32_t k) const;
  void write_csv(std::ostream& out) const;
  void write_csv(const std::string& path) const;
};

// Seeded train/test split: the same (n, fraction, seed) always yields the
// same partition. Returns (train indices, test indices), each ascending.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n, double test_fraction,
                                                                            std::uint64_t seed);

// One split from split_seed; repetition r hashes with derive_seed(hash_seed, r).
// Original features do not depend on the hash seed and are trained once.
ExperimentReport run_experiment(const learn::Dataset& data, const ExperimentConfig& config);

// ---- configuration ----------------------------------------------------------

// Flat `key = value` document; `#` comments and blank lines ignored.
// Values are kept verbatim; lists are comma separated.
class PipelineConfig {
 public:
  static PipelineConfig parse(std::istream& in);
  static PipelineConfig load(const std::string& path);

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const noexcept { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::uint64_t> get_u64s(const std::string& key, const std::vector<std::uint64_t>& fallback) const;

  // Sorted by key, one "key = value" per line.
  void write(std::ostream& out) const;
  void save(const std::string& path) const;

  ExperimentConfig experiment() const;
  static PipelineConfig from_experiment(const ExperimentConfig& config);

 private:
  std::map<std::string, std::string> values_;
};

// ---- concurrency -------------------------------------------------------------

// Runs body(i) for i in [0, n) on up to `threads` workers with a static
// partition; results must go to preassigned slots. Rethrows the first
// exception by index.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace bbmh::pipeline
