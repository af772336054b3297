#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>

#include "bbmh/error.hpp"
#include "bbmh/mix.hpp"
#include "bbmh/pipeline.hpp"

namespace bbmh::pipeline {

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n, double test_fraction,
                                                                            std::uint64_t seed) {
  if (!(test_fraction >= 0.0 && test_fraction <= 1.0)) {
    throw InvalidArgument("split_indices: test fraction must lie in [0, 1]");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMixStream rng(derive_seed(seed, 0, tag::kSplit));
  for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.bounded(i)]);
  const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  std::vector<std::size_t> test(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
  std::sort(test.begin(), test.end());
  std::sort(train.begin(), train.end());
  return {std::move(train), std::move(test)};
}

namespace {

learn::Dataset subset(const learn::Dataset& data, const std::vector<std::size_t>& idx) {
  learn::Dataset out;
  out.dim = data.dim;
  out.records.reserve(idx.size());
  for (std::size_t i : idx) out.records.push_back(data.records[i]);
  return out;
}

struct Cell {
  unsigned b;
  std::uint32_t k;
  learn::Loss loss;
  double C;
};

void summarize(ExperimentRow& row) {
  row.repetitions = static_cast<std::uint32_t>(row.accuracies.size());
  if (row.accuracies.empty()) return;
  const double n = static_cast<double>(row.accuracies.size());
  row.mean = std::accumulate(row.accuracies.begin(), row.accuracies.end(), 0.0) / n;
  double ss = 0.0;
  for (double a : row.accuracies) ss += (a - row.mean) * (a - row.mean);
  row.stddev = row.accuracies.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

std::string number(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ExperimentReport run_experiment(const learn::Dataset& data, const ExperimentConfig& config) {
  if (data.empty()) throw InvalidArgument("experiment: dataset is empty");
  data.validate();
  const auto [train_idx, test_idx] = split_indices(data.size(), config.test_fraction, config.split_seed);
  if (train_idx.empty() || test_idx.empty()) throw InvalidArgument("experiment: split leaves an empty side");

  ExperimentReport report;

  if (config.include_original) {
    const learn::Dataset train = subset(data, train_idx);
    const learn::Dataset test = subset(data, test_idx);
    for (learn::Loss loss : config.losses) {
      for (double C : config.Cs) {
        ExperimentRow row;
        row.features = "original";
        row.loss = loss;
        row.C = C;
        try {
          const learn::LinearModel model = learn::train(train, loss, C, config.train);
          row.accuracies.push_back(learn::accuracy(model, test));
        } catch (const std::exception& e) {
          row.error = e.what();
        }
        summarize(row);
        report.rows.push_back(std::move(row));
      }
    }
  }

  std::vector<Cell> cells;
  for (unsigned b : config.bs) {
    for (std::uint32_t k : config.ks) {
      for (learn::Loss loss : config.losses) {
        for (double C : config.Cs) cells.push_back(Cell{b, k, loss, C});
      }
    }
  }
  if (cells.empty() || config.repetitions == 0) return report;

  std::vector<ExperimentRow> rows(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    rows[c].features = "bbit";
    rows[c].loss = cells[c].loss;
    rows[c].C = cells[c].C;
    rows[c].b = cells[c].b;
    rows[c].k = cells[c].k;
  }
  const std::uint32_t k_max = *std::max_element(config.ks.begin(), config.ks.end());
  std::vector<int> labels(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) labels[i] = data.records[i].label;

  for (std::uint32_t r = 0; r < config.repetitions; ++r) {
    // Families with a common seed share their first k permutations, so one
    // k_max signature serves every k and b.
    const std::uint64_t seed = derive_seed(config.hash_seed, r);
    std::vector<hashcore::MinhashSignature> sigs;
    std::string failure;
    try {
      sigs = minhash_dataset(data, k_max, seed, config.mode, config.threads);
    } catch (const std::exception& e) {
      failure = e.what();
    }
    parallel_for(cells.size(), config.threads, [&](std::size_t c) {
      ExperimentRow& row = rows[c];
      if (!row.error.empty()) return;
      if (!failure.empty()) {
        row.error = failure;
        return;
      }
      try {
        const learn::Dataset expanded = expanded_dataset(sigs, labels, cells[c].k, cells[c].b);
        const learn::LinearModel model =
            learn::train(subset(expanded, train_idx), cells[c].loss, cells[c].C, config.train);
        row.accuracies.push_back(learn::accuracy(model, subset(expanded, test_idx)));
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    });
  }
  for (ExperimentRow& row : rows) {
    summarize(row);
    report.rows.push_back(std::move(row));
  }
  return report;
}

const ExperimentRow* ExperimentReport::find(const std::string& features, learn::Loss loss, double C, unsigned b,
                                            std::uint32_t k) const {
  for (const ExperimentRow& row : rows) {
    if (row.features == features && row.loss == loss && row.C == C && row.b == b && row.k == k) return &row;
  }
  return nullptr;
}

void ExperimentReport::write_csv(std::ostream& out) const {
  out << "features,loss,C,b,k,repetitions,mean_accuracy,std_accuracy,error\n";
  for (const ExperimentRow& row : rows) {
    out << row.features << ',' << learn::to_string(row.loss) << ',' << number(row.C) << ',' << row.b << ','
        << row.k << ',' << row.repetitions << ',';
    if (row.error.empty()) out << number(row.mean) << ',' << number(row.stddev) << ',';
    else out << ",," << csv_field(row.error);
    out << '\n';
  }
  if (!out) throw IoError("experiment report: write failed");
}

void ExperimentReport::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_csv(out);
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace bbmh::pipeline
