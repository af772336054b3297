#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace bbmh::learn {

enum class Loss : std::uint8_t { hinge, logistic };

const char* to_string(Loss loss) noexcept;
Loss parse_loss(const std::string& name);

// Sparse feature vector; `values` empty means binary (all listed entries 1).
struct FeatureVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  bool is_binary() const noexcept { return values.empty(); }
  double value(std::size_t pos) const noexcept { return values.empty() ? 1.0 : values[pos]; }
  double squared_norm() const noexcept;
};

// Label is +1 or -1; 0 marks an unlabeled record.
struct Example {
  int label = 0;
  FeatureVector x;
};

struct Dataset {
  std::uint64_t dim = 0;
  std::vector<Example> records;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }

  // Labels must be +-1 and indices ascending and below dim.
  void validate() const;
};

struct TrainConfig {
  std::uint32_t max_epochs = 40;
  double tolerance = 1e-4;          // relative objective change between epochs
  std::uint64_t seed = 1;           // drives the per-epoch example order
  double eta0 = 0.0;                // 0 picks 1 / max ||x||^2
  std::uint32_t averaging_start_epoch = 1;
};

struct LinearModel {
  Loss loss = Loss::hinge;
  double C = 1.0;
  std::uint64_t seed = 0;
  std::vector<double> weights;

  std::uint64_t dim() const noexcept { return weights.size(); }
};

double dot(std::span<const double> w, const FeatureVector& x);

// (1/2) w'w + C sum_i loss(y_i w'x_i).
double objective(std::span<const double> w, const Dataset& data, Loss loss, double C);

// Stochastic subgradient descent with averaged iterates. The returned
// weights never have a larger objective than w = 0.
LinearModel train(const Dataset& data, Loss loss, double C, const TrainConfig& config = {});

// sign(w'x), with w'x = 0 mapped to +1.
int predict(const LinearModel& model, const FeatureVector& x);

// Fraction of labeled records predicted correctly.
double accuracy(const LinearModel& model, const Dataset& data);

// Analytic gradient of the logistic objective: w - C sum_i y_i x_i sigma(-y_i w'x_i).
std::vector<double> logistic_gradient(std::span<const double> w, const Dataset& data, double C);

// Largest |analytic - central difference| / max(1, |analytic|) over all
// coordinates, at the model's weights and C.
double logistic_gradient_check(const LinearModel& model, const Dataset& data, double step = 1e-5);

void write_model(std::ostream& out, const LinearModel& model);
LinearModel read_model(std::istream& in);
void save_model(const std::string& path, const LinearModel& model);
LinearModel load_model(const std::string& path);

}  // namespace bbmh::learn
