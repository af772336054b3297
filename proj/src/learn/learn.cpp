#include "bbmh/learn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "bbmh/error.hpp"
#include "bbmh/mix.hpp"

namespace bbmh::learn {

const char* to_string(Loss loss) noexcept {
  return loss == Loss::hinge ? "hinge" : "logistic";
}

Loss parse_loss(const std::string& name) {
  if (name == "hinge" || name == "svm") return Loss::hinge;
  if (name == "logistic" || name == "logit") return Loss::logistic;
  throw InvalidArgument("unknown loss '" + name + "' (expected hinge or logistic)");
}

double FeatureVector::squared_norm() const noexcept {
  if (values.empty()) return static_cast<double>(indices.size());
  double s = 0.0;
  for (double v : values) s += v * v;
  return s;
}

void Dataset::validate() const {
  for (std::size_t r = 0; r < records.size(); ++r) {
    const Example& ex = records[r];
    if (ex.label != 1 && ex.label != -1) {
      throw InvalidArgument("record " + std::to_string(r) + ": label must be +1 or -1");
    }
    const auto& idx = ex.x.indices;
    if (!ex.x.values.empty() && ex.x.values.size() != idx.size()) {
      throw InvalidArgument("record " + std::to_string(r) + ": values must parallel indices");
    }
    for (std::size_t p = 0; p < idx.size(); ++p) {
      if (idx[p] >= dim) throw InvalidArgument("record " + std::to_string(r) + ": index outside dimension");
      if (p > 0 && idx[p] <= idx[p - 1]) {
        throw InvalidArgument("record " + std::to_string(r) + ": indices must be strictly ascending");
      }
    }
  }
}

double dot(std::span<const double> w, const FeatureVector& x) {
  double acc = 0.0;
  if (x.values.empty()) {
    for (std::uint32_t i : x.indices) acc += w[i];
  } else {
    for (std::size_t p = 0; p < x.indices.size(); ++p) acc += w[x.indices[p]] * x.values[p];
  }
  return acc;
}

namespace {

// log(1 + exp(-m)) without overflow.
double logistic_loss(double m) {
  return m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

// sigma(-m) = 1 / (1 + exp(m)).
double logistic_tail(double m) {
  if (m >= 0.0) {
    const double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

double point_loss(Loss loss, double margin) {
  return loss == Loss::hinge ? std::max(0.0, 1.0 - margin) : logistic_loss(margin);
}

// -dloss/dmargin; hinge uses the zero subgradient at margin exactly 1.
double loss_slope(Loss loss, double margin) {
  if (loss == Loss::hinge) return margin < 1.0 ? 1.0 : 0.0;
  return logistic_tail(margin);
}

void check_training_input(const Dataset& data, double C) {
  if (data.empty()) throw InvalidArgument("train: dataset is empty");
  if (!(C > 0.0) || !std::isfinite(C)) throw InvalidArgument("train: C must be positive and finite");
  data.validate();
}

// Weights held as w = s * v and the running average as r * u + c * v, so a
// step touches only the nonzeros of one example.
class ScaledSgd {
 public:
  explicit ScaledSgd(std::size_t dim) : v_(dim, 0.0), u_(dim, 0.0) {}

  double margin(const FeatureVector& x, int y) const { return y * scale_ * dot(v_, x); }

  void shrink(double factor) {
    scale_ *= factor;
    if (scale_ < 1e-9) renormalize();
  }

  // w <- w + step * x.
  void add(const FeatureVector& x, double step) {
    const double dv = step / scale_;
    for (std::size_t p = 0; p < x.indices.size(); ++p) {
      const std::uint32_t i = x.indices[p];
      const double delta = dv * x.value(p);
      v_[i] += delta;
      if (averaging_) u_[i] -= (avg_c_ / avg_r_) * delta;
    }
  }

  void start_averaging() {
    averaging_ = true;
    std::fill(u_.begin(), u_.end(), 0.0);
    avg_r_ = 1.0;
    avg_c_ = scale_;
    averaged_ = 1;
  }

  // Folds the current iterate into the average with weight 1/(n+1).
  void accumulate() {
    if (!averaging_) return;
    ++averaged_;
    const double mu = 1.0 / static_cast<double>(averaged_);
    avg_r_ *= 1.0 - mu;
    avg_c_ = (1.0 - mu) * avg_c_ + mu * scale_;
    if (avg_r_ < 1e-12) {
      for (std::size_t i = 0; i < u_.size(); ++i) u_[i] *= avg_r_;
      avg_r_ = 1.0;
    }
  }

  bool averaging() const noexcept { return averaging_; }

  std::vector<double> current() const {
    std::vector<double> w(v_.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = scale_ * v_[i];
    return w;
  }

  std::vector<double> average() const {
    if (!averaging_) return current();
    std::vector<double> w(v_.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = avg_r_ * u_[i] + avg_c_ * v_[i];
    return w;
  }

 private:
  void renormalize() {
    for (double& x : v_) x *= scale_;
    avg_c_ /= scale_;
    scale_ = 1.0;
  }

  std::vector<double> v_;
  std::vector<double> u_;
  double scale_ = 1.0;
  double avg_r_ = 1.0;
  double avg_c_ = 1.0;
  std::uint64_t averaged_ = 0;
  bool averaging_ = false;
};

}  // namespace

double objective(std::span<const double> w, const Dataset& data, Loss loss, double C) {
  double reg = 0.0;
  for (double x : w) reg += x * x;
  double total = 0.0;
  for (const Example& ex : data.records) total += point_loss(loss, ex.label * dot(w, ex.x));
  return 0.5 * reg + C * total;
}

LinearModel train(const Dataset& data, Loss loss, double C, const TrainConfig& config) {
  check_training_input(data, C);
  if (data.dim > std::numeric_limits<std::uint32_t>::max() + std::uint64_t{1}) {
    throw InvalidArgument("train: dimension exceeds 2^32");
  }
  const std::size_t n = data.size();
  const std::size_t dim = static_cast<std::size_t>(data.dim);
  const double lambda = 1.0 / (C * static_cast<double>(n));

  double eta0 = config.eta0;
  if (eta0 <= 0.0) {
    double max_norm = 0.0;
    for (const Example& ex : data.records) max_norm = std::max(max_norm, ex.x.squared_norm());
    eta0 = 1.0 / std::max(1.0, max_norm);
  }

  ScaledSgd sgd(dim);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  // Per-example objective lambda/2 |w|^2 + loss_i sums to F(w) / (C n).
  // eta_t = eta0 / (1 + lambda eta0 t) with t >= 1 keeps eta_t lambda < 1.
  std::uint64_t t = 1;
  double previous = objective(std::vector<double>(dim, 0.0), data, loss, C);
  const double zero_objective = previous;
  const std::uint32_t epochs = std::max<std::uint32_t>(1, config.max_epochs);
  for (std::uint32_t epoch = 0; epoch < epochs; ++epoch) {
    if (epoch == config.averaging_start_epoch && !sgd.averaging()) sgd.start_averaging();
    SplitMixStream rng(derive_seed(config.seed, epoch, tag::kShuffle));
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.bounded(i)]);

    for (std::size_t pos : order) {
      const Example& ex = data.records[pos];
      const double eta = eta0 / (1.0 + lambda * eta0 * static_cast<double>(t));
      const double slope = loss_slope(loss, sgd.margin(ex.x, ex.label));
      sgd.shrink(1.0 - eta * lambda);
      if (slope != 0.0) sgd.add(ex.x, eta * slope * ex.label);
      sgd.accumulate();
      ++t;
    }

    const double current = objective(sgd.average(), data, loss, C);
    const double change = std::abs(previous - current) / std::max(std::abs(previous), 1e-300);
    previous = current;
    if (epoch > 0 && change < config.tolerance) break;
  }

  std::vector<double> best = sgd.average();
  double best_objective = objective(best, data, loss, C);
  std::vector<double> last = sgd.current();
  const double last_objective = objective(last, data, loss, C);
  if (last_objective < best_objective) {
    best = std::move(last);
    best_objective = last_objective;
  }
  if (!(best_objective <= zero_objective)) std::fill(best.begin(), best.end(), 0.0);

  return LinearModel{loss, C, config.seed, std::move(best)};
}

int predict(const LinearModel& model, const FeatureVector& x) {
  for (std::uint32_t i : x.indices) {
    if (i >= model.weights.size()) throw InvalidArgument("predict: feature index outside model dimension");
  }
  return dot(model.weights, x) >= 0.0 ? 1 : -1;
}

double accuracy(const LinearModel& model, const Dataset& data) {
  if (data.dim > model.dim()) throw InvalidArgument("accuracy: dataset dimension exceeds model dimension");
  std::size_t labeled = 0, correct = 0;
  for (const Example& ex : data.records) {
    if (ex.label == 0) continue;
    ++labeled;
    if (predict(model, ex.x) == ex.label) ++correct;
  }
  return labeled == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(labeled);
}

std::vector<double> logistic_gradient(std::span<const double> w, const Dataset& data, double C) {
  std::vector<double> g(w.begin(), w.end());
  for (const Example& ex : data.records) {
    const double coef = -C * ex.label * logistic_tail(ex.label * dot(w, ex.x));
    for (std::size_t p = 0; p < ex.x.indices.size(); ++p) {
      const std::uint32_t i = ex.x.indices[p];
      if (i >= g.size()) throw InvalidArgument("logistic_gradient: feature index outside weight dimension");
      g[i] += coef * ex.x.value(p);
    }
  }
  return g;
}

double logistic_gradient_check(const LinearModel& model, const Dataset& data, double step) {
  std::vector<double> w = model.weights;
  const std::vector<double> analytic = logistic_gradient(w, data, model.C);
  double worst = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double saved = w[i];
    w[i] = saved + step;
    const double up = objective(w, data, Loss::logistic, model.C);
    w[i] = saved - step;
    const double down = objective(w, data, Loss::logistic, model.C);
    w[i] = saved;
    const double numeric = (up - down) / (2.0 * step);
    worst = std::max(worst, std::abs(analytic[i] - numeric) / std::max(1.0, std::abs(analytic[i])));
  }
  return worst;
}

namespace {

constexpr const char* kModelMagic = "bbmh-linear-model";

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token, std::size_t line) {
  double x = 0.0;
  const auto res = std::from_chars(token.data(), token.data() + token.size(), x);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw ParseError(line, "expected a number, got '" + token + "'");
  }
  return x;
}

std::string expect_field(std::istream& in, const char* key, std::size_t line) {
  std::string text;
  if (!std::getline(in, text)) throw ParseError(line, std::string("missing '") + key + "' line");
  std::istringstream fields(text);
  std::string name, value, extra;
  fields >> name >> value;
  if (name != key || value.empty() || (fields >> extra)) {
    throw ParseError(line, std::string("expected '") + key + " <value>'");
  }
  return value;
}

}  // namespace

void write_model(std::ostream& out, const LinearModel& model) {
  out << kModelMagic << " 1\n";
  out << "loss " << to_string(model.loss) << '\n';
  out << "C " << format_double(model.C) << '\n';
  out << "dim " << model.dim() << '\n';
  out << "seed " << model.seed << '\n';
  for (double w : model.weights) out << format_double(w) << '\n';
  if (!out) throw IoError("write_model: stream failure");
}

LinearModel read_model(std::istream& in) {
  std::string first;
  if (!std::getline(in, first) || first != std::string(kModelMagic) + " 1") {
    throw ParseError(1, "not a bbmh linear model (bad header)");
  }
  LinearModel model;
  try {
    model.loss = parse_loss(expect_field(in, "loss", 2));
  } catch (const InvalidArgument& e) {
    throw ParseError(2, e.what());
  }
  model.C = parse_double(expect_field(in, "C", 3), 3);
  const std::string dim_text = expect_field(in, "dim", 4);
  const std::string seed_text = expect_field(in, "seed", 5);
  std::uint64_t dim = 0;
  if (std::from_chars(dim_text.data(), dim_text.data() + dim_text.size(), dim).ec != std::errc()) {
    throw ParseError(4, "bad dimension");
  }
  if (std::from_chars(seed_text.data(), seed_text.data() + seed_text.size(), model.seed).ec != std::errc()) {
    throw ParseError(5, "bad seed");
  }
  model.weights.reserve(static_cast<std::size_t>(dim));
  std::string text;
  std::size_t line = 5;
  while (model.weights.size() < dim) {
    ++line;
    if (!std::getline(in, text)) throw ParseError(line, "fewer weights than the header's dimension");
    const double w = parse_double(text, line);
    if (!std::isfinite(w)) throw ParseError(line, "non-finite weight");
    model.weights.push_back(w);
  }
  if (std::getline(in, text) && !text.empty()) throw ParseError(line + 1, "more weights than the header's dimension");
  return model;
}

void save_model(const std::string& path, const LinearModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_model(out, model);
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

LinearModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return read_model(in);
}

}  // namespace bbmh::learn
