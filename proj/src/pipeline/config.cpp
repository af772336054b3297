#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "bbmh/error.hpp"
#include "bbmh/pipeline.hpp"

namespace bbmh::pipeline {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw InvalidArgument("config: '" + key + "' expects an unsigned integer, got '" + text + "'");
  }
  return v;
}

double to_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
  if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
    throw InvalidArgument("config: '" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::ostringstream out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out << ',';
    if constexpr (std::is_floating_point_v<T>) {
      char buf[32];
      const auto r = std::to_chars(buf, buf + sizeof buf, xs[i]);
      out << std::string(buf, r.ptr);
    } else {
      out << xs[i];
    }
  }
  return out.str();
}

std::string shortest(double x) { return join(std::vector<double>{x}); }

}  // namespace

PipelineConfig PipelineConfig::parse(std::istream& in) {
  PipelineConfig cfg;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key = value");
    const std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (key.empty()) throw ParseError(line, "empty key");
    cfg.values_[key] = value;
  }
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path + "'");
  return parse(in);
}

std::string PipelineConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::uint64_t PipelineConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : to_u64(key, it->second);
}

double PipelineConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : to_double(key, it->second);
}

bool PipelineConfig::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  const std::string& v = it->second;
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw InvalidArgument("config: '" + key + "' expects a boolean, got '" + v + "'");
}

std::vector<double> PipelineConfig::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(it->second)) out.push_back(to_double(key, item));
  return out;
}

std::vector<std::uint64_t> PipelineConfig::get_u64s(const std::string& key,
                                                    const std::vector<std::uint64_t>& fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(it->second)) out.push_back(to_u64(key, item));
  return out;
}

void PipelineConfig::write(std::ostream& out) const {
  for (const auto& [key, value] : values_) out << key << " = " << value << '\n';
  if (!out) throw IoError("config: write failed");
}

void PipelineConfig::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write(out);
}

ExperimentConfig PipelineConfig::experiment() const {
  ExperimentConfig c;
  c.split_seed = get_u64("split-seed", c.split_seed);
  c.hash_seed = get_u64("seed", c.hash_seed);
  c.repetitions = static_cast<std::uint32_t>(get_u64("repetitions", c.repetitions));
  c.test_fraction = get_double("test-fraction", c.test_fraction);
  if (has("k")) {
    c.ks.clear();
    for (auto k : get_u64s("k", {})) c.ks.push_back(static_cast<std::uint32_t>(k));
  }
  if (has("b")) {
    c.bs.clear();
    for (auto b : get_u64s("b", {})) c.bs.push_back(static_cast<unsigned>(b));
  }
  c.Cs = get_doubles("C", c.Cs);
  if (has("loss")) {
    c.losses.clear();
    for (const auto& name : split_list(get_string("loss", ""))) c.losses.push_back(learn::parse_loss(name));
  }
  c.include_original = get_bool("original", c.include_original);
  const std::string mode = get_string("mode", "hashed");
  if (mode == "hashed") c.mode = hashcore::PermutationMode::hashed_permutation;
  else if (mode == "exact") c.mode = hashcore::PermutationMode::exact_permutation;
  else throw InvalidArgument("config: mode must be hashed or exact, got '" + mode + "'");
  c.train.max_epochs = static_cast<std::uint32_t>(get_u64("epochs", c.train.max_epochs));
  c.train.tolerance = get_double("tolerance", c.train.tolerance);
  c.train.seed = get_u64("train-seed", c.train.seed);
  c.train.eta0 = get_double("eta0", c.train.eta0);
  c.train.averaging_start_epoch =
      static_cast<std::uint32_t>(get_u64("average-from", c.train.averaging_start_epoch));
  c.threads = static_cast<unsigned>(get_u64("threads", c.threads));
  return c;
}

PipelineConfig PipelineConfig::from_experiment(const ExperimentConfig& c) {
  PipelineConfig cfg;
  cfg.set("split-seed", std::to_string(c.split_seed));
  cfg.set("seed", std::to_string(c.hash_seed));
  cfg.set("repetitions", std::to_string(c.repetitions));
  cfg.set("test-fraction", shortest(c.test_fraction));
  cfg.set("k", join(c.ks));
  cfg.set("b", join(c.bs));
  cfg.set("C", join(c.Cs));
  std::vector<std::string> losses;
  for (auto l : c.losses) losses.emplace_back(learn::to_string(l));
  cfg.set("loss", join(losses));
  cfg.set("original", c.include_original ? "true" : "false");
  cfg.set("mode", c.mode == hashcore::PermutationMode::hashed_permutation ? "hashed" : "exact");
  cfg.set("epochs", std::to_string(c.train.max_epochs));
  cfg.set("tolerance", shortest(c.train.tolerance));
  cfg.set("train-seed", std::to_string(c.train.seed));
  cfg.set("eta0", shortest(c.train.eta0));
  cfg.set("average-from", std::to_string(c.train.averaging_start_epoch));
  cfg.set("threads", std::to_string(c.threads));
  return cfg;
}

}  // namespace bbmh::pipeline
