#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>

#include "bbmh/error.hpp"
#include "bbmh/pipeline.hpp"

namespace bbmh::pipeline {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

int parse_label(std::string_view token, std::size_t line) {
  if (token == "+1" || token == "1") return 1;
  if (token == "-1") return -1;
  throw ParseError(line, "label must be +1 or -1, got '" + std::string(token) + "'");
}

}  // namespace

DatasetReader::DatasetReader(std::istream& in, ParseOptions options) : in_(in), options_(options) {}

std::optional<learn::Example> DatasetReader::next() {
  std::string text;
  while (std::getline(in_, text)) {
    ++line_;
    std::string_view view(text);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    const auto tokens = tokenize(view);
    if (tokens.empty()) continue;

    learn::Example ex;
    std::size_t t = 0;
    if (tokens[0].find(':') == std::string_view::npos) {
      ex.label = parse_label(tokens[0], line_);
      t = 1;
    }
    bool all_ones = true;
    std::vector<double> values;
    for (; t < tokens.size(); ++t) {
      const std::string_view tok = tokens[t];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos || colon == 0 || colon + 1 == tok.size()) {
        throw ParseError(line_, "expected index:value, got '" + std::string(tok) + "'");
      }
      std::uint64_t index = 0;
      const char* ib = tok.data();
      const char* ie = tok.data() + colon;
      if (auto r = std::from_chars(ib, ie, index); r.ec != std::errc() || r.ptr != ie) {
        throw ParseError(line_, "bad feature index '" + std::string(tok.substr(0, colon)) + "'");
      }
      double value = 0.0;
      const char* vb = tok.data() + colon + 1;
      const char* ve = tok.data() + tok.size();
      if (auto r = std::from_chars(vb, ve, value); r.ec != std::errc() || r.ptr != ve || !std::isfinite(value)) {
        throw ParseError(line_, "bad feature value '" + std::string(tok.substr(colon + 1)) + "'");
      }
      if (index > std::numeric_limits<std::uint32_t>::max()) {
        throw ParseError(line_, "feature index " + std::to_string(index) + " exceeds 2^32 - 1");
      }
      if (options_.dim && index >= *options_.dim) {
        throw ParseError(line_, "feature index " + std::to_string(index) + " outside dimension " +
                                    std::to_string(*options_.dim));
      }
      if (!ex.x.indices.empty() && index <= ex.x.indices.back()) {
        throw ParseError(line_, "feature indices must be strictly ascending");
      }
      if (options_.binary && value != 1.0) {
        throw ParseError(line_, "binary mode requires value 1, got '" + std::string(tok.substr(colon + 1)) + "'");
      }
      all_ones = all_ones && value == 1.0;
      ex.x.indices.push_back(static_cast<std::uint32_t>(index));
      values.push_back(value);
    }
    if (!all_ones) ex.x.values = std::move(values);
    if (!ex.x.indices.empty()) observed_dim_ = std::max<std::uint64_t>(observed_dim_, ex.x.indices.back() + std::uint64_t{1});
    return ex;
  }
  if (in_.bad()) throw IoError("read failure after line " + std::to_string(line_));
  return std::nullopt;
}

learn::Dataset parse_dataset(std::istream& in, const ParseOptions& options) {
  DatasetReader reader(in, options);
  learn::Dataset data;
  while (auto ex = reader.next()) data.records.push_back(std::move(*ex));
  data.dim = options.dim ? *options.dim : reader.observed_dim();
  return data;
}

learn::Dataset parse_dataset(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  return parse_dataset(in, options);
}

void write_record(std::ostream& out, const learn::Example& ex) {
  bool first = true;
  if (ex.label != 0) {
    out << (ex.label > 0 ? "+1" : "-1");
    first = false;
  }
  char buf[32];
  for (std::size_t p = 0; p < ex.x.indices.size(); ++p) {
    if (!first) out << ' ';
    first = false;
    const auto res = std::to_chars(buf, buf + sizeof buf, ex.x.value(p));
    out << ex.x.indices[p] << ':' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
  }
  out << '\n';
}

void write_dataset(std::ostream& out, const learn::Dataset& data) {
  for (const auto& ex : data.records) write_record(out, ex);
  if (!out) throw IoError("write_dataset: stream failure");
}

void write_dataset(const std::string& path, const learn::Dataset& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_dataset(out, data);
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace bbmh::pipeline
