// Command-line front end. Every subcommand takes its settings from an
// optional `--config` file (flat `key = value`) overridden by flags of the
// same name, so a run is reproducible from the config and its inputs.

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bbmh/analysis.hpp"
#include "bbmh/error.hpp"
#include "bbmh/exact_oracle.hpp"
#include "bbmh/learn.hpp"
#include "bbmh/pipeline.hpp"

namespace {

using bbmh::pipeline::PipelineConfig;

// Flags of one subcommand, collected as strings and layered over the config.
class Settings {
 public:
  explicit Settings(CLI::App* app) : app_(app) {
    app_->add_option("--config", config_path_, "Read settings from a key = value file")->check(CLI::ExistingFile);
    add("--seed", "seed", "Random seed");
  }

  CLI::Option* add(const std::string& flag, const std::string& key, const std::string& help) {
    CLI::Option* opt = app_->add_option(flag, values_[key], help);
    options_.emplace_back(key, opt);
    return opt;
  }

  void add_switch(const std::string& flag, const std::string& key, const std::string& help) {
    CLI::Option* opt = app_->add_flag(flag, help);
    switches_.emplace_back(key, opt);
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg = config_path_.empty() ? PipelineConfig{} : PipelineConfig::load(config_path_);
    for (const auto& [key, opt] : options_) {
      if (opt->count() > 0) cfg.set(key, values_.at(key));
    }
    for (const auto& [key, opt] : switches_) {
      if (opt->count() > 0) cfg.set(key, "true");
    }
    return cfg;
  }

  CLI::App* app() const { return app_; }

 private:
  CLI::App* app_;
  std::string config_path_;
  std::map<std::string, std::string> values_;
  std::vector<std::pair<std::string, CLI::Option*>> options_;
  std::vector<std::pair<std::string, CLI::Option*>> switches_;
};

std::string require(const PipelineConfig& cfg, const std::string& key) {
  if (!cfg.has(key) || cfg.get_string(key, "").empty()) {
    throw bbmh::InvalidArgument("missing required setting '" + key + "'");
  }
  return cfg.get_string(key, "");
}

bbmh::hashcore::PermutationMode parse_mode(const std::string& mode) {
  if (mode == "hashed") return bbmh::hashcore::PermutationMode::hashed_permutation;
  if (mode == "exact") return bbmh::hashcore::PermutationMode::exact_permutation;
  throw bbmh::InvalidArgument("mode must be hashed or exact, got '" + mode + "'");
}

bbmh::sketch::SketchKind parse_kind(const std::string& kind) {
  if (kind == "cm") return bbmh::sketch::SketchKind::cm;
  if (kind == "vw") return bbmh::sketch::SketchKind::vw;
  if (kind == "rp") return bbmh::sketch::SketchKind::rp;
  throw bbmh::InvalidArgument("sketch kind must be cm, vw or rp, got '" + kind + "'");
}

// Writes to the named file, or to stdout when the path is empty.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw bbmh::IoError("cannot open '" + path + "' for writing");
  write(out);
  out.close();
  if (!out) throw bbmh::IoError("failed writing '" + path + "'");
}

bbmh::learn::TrainConfig train_config(const PipelineConfig& cfg) {
  bbmh::learn::TrainConfig t;
  t.max_epochs = static_cast<std::uint32_t>(cfg.get_u64("epochs", t.max_epochs));
  t.tolerance = cfg.get_double("tolerance", t.tolerance);
  t.seed = cfg.get_u64("train-seed", cfg.get_u64("seed", t.seed));
  t.eta0 = cfg.get_double("eta0", t.eta0);
  t.averaging_start_epoch = static_cast<std::uint32_t>(cfg.get_u64("average-from", t.averaging_start_epoch));
  return t;
}

bbmh::pipeline::ParseOptions parse_options(const PipelineConfig& cfg) {
  bbmh::pipeline::ParseOptions p;
  p.binary = cfg.get_bool("binary", false);
  if (cfg.has("dim")) p.dim = cfg.get_u64("dim", 0);
  return p;
}

void run_hash(const PipelineConfig& cfg) {
  bbmh::pipeline::HashOptions o;
  o.k = static_cast<std::uint32_t>(cfg.get_u64("k", o.k));
  o.b = static_cast<unsigned>(cfg.get_u64("b", o.b));
  o.seed = cfg.get_u64("seed", o.seed);
  o.mode = parse_mode(cfg.get_string("mode", "hashed"));
  o.universe_size = cfg.get_u64("universe", 0);
  const auto r = bbmh::pipeline::hash_command(o, require(cfg, "input"), require(cfg, "out"));
  std::cout << "records " << r.records << "\npayload_bytes " << r.payload_bytes << "\nfile_bytes " << r.file_bytes
            << '\n';
}

void run_expand(const PipelineConfig& cfg) {
  std::optional<std::string> labels;
  if (cfg.has("labels-from")) labels = cfg.get_string("labels-from", "");
  const auto n = bbmh::pipeline::expand_command(require(cfg, "input"), require(cfg, "emit-text"), labels);
  std::cout << "records " << n << '\n';
}

void run_sketch(const PipelineConfig& cfg) {
  bbmh::pipeline::SketchOptions o;
  o.kind = parse_kind(cfg.get_string("kind", "vw"));
  o.k = static_cast<std::uint32_t>(cfg.get_u64("k", o.k));
  o.seed = cfg.get_u64("seed", o.seed);
  o.s = cfg.get_double("s", o.s);
  o.normal = cfg.get_bool("normal", false);
  const auto n = bbmh::pipeline::sketch_command(o, require(cfg, "input"), require(cfg, "out"));
  std::cout << "records " << n << '\n';
}

void run_train(const PipelineConfig& cfg) {
  const auto data = bbmh::pipeline::parse_dataset(require(cfg, "input"), parse_options(cfg));
  const auto loss = bbmh::learn::parse_loss(cfg.get_string("loss", "hinge"));
  const double C = cfg.get_double("C", 1.0);
  const auto model = bbmh::learn::train(data, loss, C, train_config(cfg));
  bbmh::learn::save_model(require(cfg, "model"), model);
  std::cout << "dim " << model.dim() << "\nobjective " << bbmh::learn::objective(model.weights, data, loss, C)
            << "\ntrain_accuracy " << bbmh::learn::accuracy(model, data) << '\n';
}

void run_predict(const PipelineConfig& cfg) {
  const auto model = bbmh::learn::load_model(require(cfg, "model"));
  bbmh::pipeline::ParseOptions p;
  p.dim = model.dim();
  const auto data = bbmh::pipeline::parse_dataset(require(cfg, "input"), p);
  std::size_t labeled = 0;
  std::size_t correct = 0;
  emit(cfg.get_string("out", ""), [&](std::ostream& out) {
    for (const auto& ex : data.records) {
      const int y = bbmh::learn::predict(model, ex.x);
      out << (y > 0 ? "+1" : "-1") << '\n';
      if (ex.label != 0) {
        ++labeled;
        correct += y == ex.label ? 1 : 0;
      }
    }
  });
  if (labeled > 0) {
    std::cerr << "accuracy " << static_cast<double>(correct) / static_cast<double>(labeled) << '\n';
  }
}

// `generate` seeds the data with --seed; `experiment` keeps --seed for hashing.
bbmh::pipeline::AnalogConfig analog_config(const PipelineConfig& cfg, bool seed_is_data_seed) {
  bbmh::pipeline::AnalogConfig a;
  a.records = cfg.get_u64("records", a.records);
  a.dim = cfg.get_u64("dim", a.dim);
  a.nonzeros = cfg.get_u64("nonzeros", a.nonzeros);
  a.within = cfg.get_double("within", a.within);
  a.cross = cfg.get_double("cross", a.cross);
  a.retain = cfg.get_double("retain", a.retain);
  a.label_noise = cfg.get_double("label-noise", a.label_noise);
  a.seed = cfg.get_u64("data-seed", seed_is_data_seed ? cfg.get_u64("seed", a.seed) : a.seed);
  return a;
}

void run_generate(const PipelineConfig& cfg) {
  bbmh::pipeline::write_dataset(require(cfg, "out"), bbmh::pipeline::generate_analog(analog_config(cfg, true)));
}

void run_experiment(const PipelineConfig& cfg) {
  const bool analog = cfg.get_bool("analog", false);
  if (analog == cfg.has("input")) throw bbmh::InvalidArgument("experiment: give either an input dataset or --analog");
  const auto data = analog ? bbmh::pipeline::generate_analog(analog_config(cfg, false))
                           : bbmh::pipeline::parse_dataset(cfg.get_string("input", ""), parse_options(cfg));
  const auto report = bbmh::pipeline::run_experiment(data, cfg.experiment());
  emit(cfg.get_string("out", ""), [&](std::ostream& out) { report.write_csv(out); });
}

void run_oracle(const PipelineConfig& cfg) {
  bbmh::estimate::OracleGrid g;
  g.D = cfg.get_u64("D", g.D);
  if (cfg.has("b")) {
    g.bs.clear();
    for (auto b : cfg.get_u64s("b", {})) g.bs.push_back(static_cast<unsigned>(b));
  }
  g.f1_fractions = cfg.get_doubles("f1-fractions", g.f1_fractions);
  const auto rows = bbmh::estimate::oracle_rows(g);
  emit(cfg.get_string("out", ""), [&](std::ostream& out) { bbmh::estimate::emit_oracle_table(rows, out); });
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.abs_error);
  std::cerr << "rows " << rows.size() << " max_abs_error " << worst << '\n';
}

void run_analyze(const PipelineConfig& cfg) {
  bbmh::analysis::ComparisonGrid g;
  g.D = cfg.get_u64("D", g.D);
  g.b = static_cast<unsigned>(cfg.get_u64("b", g.b));
  g.bits_per_vw_sample = cfg.get_double("bits", g.bits_per_vw_sample);
  g.f1_fractions = cfg.get_doubles("f1-fractions", g.f1_fractions);
  g.f2_fractions = cfg.get_doubles("f2-fractions", g.f2_fractions);
  g.a_steps = cfg.get_u64("a-steps", g.a_steps);
  emit(cfg.get_string("out", ""), [&](std::ostream& out) { bbmh::analysis::emit_comparison_tables(g, out); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"b-bit minwise hashing, sketches and linear learning"};
  app.require_subcommand(1);
  std::vector<std::pair<std::unique_ptr<Settings>, void (*)(const PipelineConfig&)>> commands;
  auto command = [&](const std::string& name, const std::string& help, void (*fn)(const PipelineConfig&)) {
    commands.emplace_back(std::make_unique<Settings>(app.add_subcommand(name, help)), fn);
    return commands.back().first.get();
  };

  Settings* s = command("hash", "Minhash a binary sparse dataset into a packed b-bit signature file", run_hash);
  s->add("input", "input", "Sparse text dataset");
  s->add("-o,--out", "out", "Signature file to write");
  s->add("-k,--k", "k", "Permutations per record");
  s->add("-b,--b", "b", "Bits kept per value (1..16)");
  s->add("--mode", "mode", "hashed or exact permutations");
  s->add("--universe", "universe", "Permutation universe size (required in exact mode)");

  s = command("expand", "Expand b-bit signatures into one-hot sparse text", run_expand);
  s->add("input", "input", "Signature file");
  s->add("--emit-text", "emit-text", "Sparse text file to write");
  s->add("--labels-from", "labels-from", "Dataset whose labels are copied record by record");

  s = command("sketch", "Count-Min, VW or random-projection sketches of a sparse dataset", run_sketch);
  s->add("input", "input", "Sparse text dataset");
  s->add("-o,--out", "out", "Sketch file to write");
  s->add("--kind", "kind", "cm, vw or rp");
  s->add("-k,--k", "k", "Sketch width");
  s->add("--s", "s", "Fourth moment of the sparse sign family (s >= 1)");
  s->add_switch("--normal", "normal", "Use N(0, 1) multipliers");

  s = command("train", "Train a linear SVM or logistic regression model", run_train);
  s->add("input", "input", "Labeled sparse text dataset");
  s->add("-m,--model", "model", "Model file to write");
  s->add("--loss", "loss", "hinge (svm) or logistic");
  s->add("-C,--C", "C", "Regularization constant");
  s->add("--dim", "dim", "Feature dimension (default 1 + max index)");
  s->add("--epochs", "epochs", "Maximum epochs");
  s->add("--tolerance", "tolerance", "Relative objective change that stops training");
  s->add("--eta0", "eta0", "Initial step size (0 picks 1 / max squared norm)");
  s->add("--average-from", "average-from", "First epoch included in the iterate average");
  s->add_switch("--binary", "binary", "Reject feature values other than 1");

  s = command("predict", "Predict labels with a trained model", run_predict);
  s->add("input", "input", "Sparse text dataset");
  s->add("-m,--model", "model", "Model file");
  s->add("-o,--out", "out", "Prediction file (default stdout)");

  s = command("experiment", "Accuracy of original versus b-bit hashed features over a (C, b, k) grid", run_experiment);
  s->add("input", "input", "Labeled sparse text dataset");
  s->add_switch("--analog", "analog", "Use the generated analog dataset instead of an input file");
  s->add("-o,--out", "out", "CSV report (default stdout)");
  for (const char* key : {"split-seed", "repetitions", "test-fraction", "k", "b", "C", "loss", "mode", "epochs",
                          "tolerance", "train-seed", "eta0", "average-from", "threads", "original", "records",
                          "nonzeros", "within", "cross", "retain", "label-noise", "data-seed"}) {
    s->add(std::string("--") + key, key, "See README");
  }
  s->add("--dim", "dim", "Feature dimension");

  s = command("generate", "Write the two-class analog dataset", run_generate);
  s->add("-o,--out", "out", "Sparse text file to write");
  for (const char* key : {"records", "dim", "nonzeros", "within", "cross", "retain", "label-noise"}) {
    s->add(std::string("--") + key, key, "See README");
  }

  s = command("oracle", "Formula versus exact collision probability over small universes", run_oracle);
  s->add("--D", "D", "Universe size");
  s->add("-b,--b", "b", "Comma separated list of b");
  s->add("--f1-fractions", "f1-fractions", "Comma separated f1 / D values");
  s->add("-o,--out", "out", "CSV file (default stdout)");

  s = command("analyze", "Storage-normalized VW versus b-bit variance ratios", run_analyze);
  s->add("--D", "D", "Universe size");
  s->add("-b,--b", "b", "Bits per b-bit sample");
  s->add("--bits", "bits", "Bits per VW sample");
  s->add("--f1-fractions", "f1-fractions", "Comma separated f1 / D values");
  s->add("--f2-fractions", "f2-fractions", "Comma separated f2 / f1 values");
  s->add("--a-steps", "a-steps", "Intersection steps per (f1, f2)");
  s->add("-o,--out", "out", "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    for (const auto& [settings, fn] : commands) {
      if (settings->app()->parsed()) fn(settings->resolve());
    }
  } catch (const std::exception& e) {
    std::cerr << "bbmh: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
