#include "bbmh/sketch_file.hpp"

#include <array>

#include "bbmh/byte_io.hpp"
#include "bbmh/error.hpp"

namespace bbmh::sketch {

namespace {

constexpr std::array<char, 4> kMagic{'S', 'K', 'C', 'H'};

std::uint8_t encode_kind(SketchKind kind, SignDistribution::Family family) {
  auto byte = static_cast<std::uint8_t>(kind);
  if (family == SignDistribution::Family::normal) byte |= kNormalFamilyFlag;
  return byte;
}

}  // namespace

SketchWriter::SketchWriter(const std::string& path, SketchKind kind, const SignDistribution& sign,
                           std::uint32_t k, std::uint64_t seed)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
  if (!out_) throw IoError("cannot open " + path + " for writing");
  if (k == 0) throw InvalidArgument("SketchWriter: k must be at least 1");
  header_.kind = kind;
  header_.family = kind == SketchKind::cm ? SignDistribution::Family::sparse : sign.family();
  header_.s = kind == SketchKind::cm ? 1.0 : sign.s();
  header_.k = k;
  header_.seed = seed;
  out_.write(kMagic.data(), kMagic.size());
  detail::write_le<std::uint8_t>(out_, encode_kind(header_.kind, header_.family));
  detail::write_le<double>(out_, header_.s);
  detail::write_le<std::uint32_t>(out_, header_.k);
  detail::write_le<std::uint64_t>(out_, header_.seed);
  detail::write_le<std::uint64_t>(out_, 0);
}

SketchWriter::~SketchWriter() {
  if (!closed_) {
    try {
      close();
    } catch (...) {
    }
  }
}

void SketchWriter::append(const SketchVector& row) {
  if (closed_) throw IoError("SketchWriter: append after close");
  if (row.kind != header_.kind || row.width() != header_.k || row.seed != header_.seed ||
      row.s != header_.s || row.family != header_.family) {
    throw IncompatibleSketch("SketchWriter: row does not match the file header");
  }
  for (const double c : row.coords) detail::write_le<double>(out_, c);
  ++header_.record_count;
}

void SketchWriter::close() {
  if (closed_) return;
  closed_ = true;
  out_.seekp(25);
  detail::write_le<std::uint64_t>(out_, header_.record_count);
  out_.close();
  if (!out_) throw IoError("failed writing " + path_);
}

SketchReader::SketchReader(const std::string& path) : in_(path, std::ios::binary) {
  if (!in_) throw IoError("cannot open " + path);
  std::array<char, 4> magic{};
  if (!in_.read(magic.data(), magic.size()) || magic != kMagic) {
    throw FormatError(path + ": not a SKCH sketch file");
  }
  const auto kind = detail::read_le<std::uint8_t>(in_);
  const auto base = static_cast<std::uint8_t>(kind & ~kNormalFamilyFlag);
  if (base > static_cast<std::uint8_t>(SketchKind::rp)) throw FormatError(path + ": unknown sketch kind");
  header_.kind = static_cast<SketchKind>(base);
  header_.family = (kind & kNormalFamilyFlag) ? SignDistribution::Family::normal : SignDistribution::Family::sparse;
  header_.s = detail::read_le<double>(in_);
  header_.k = detail::read_le<std::uint32_t>(in_);
  header_.seed = detail::read_le<std::uint64_t>(in_);
  header_.record_count = detail::read_le<std::uint64_t>(in_);
}

std::optional<SketchVector> SketchReader::next() {
  if (read_ == header_.record_count) return std::nullopt;
  SketchVector row{header_.kind, header_.s, header_.family, header_.seed, std::vector<double>(header_.k)};
  for (auto& c : row.coords) c = detail::read_le<double>(in_);
  ++read_;
  return row;
}

std::vector<SketchVector> read_sketch_file(const std::string& path, SketchFileHeader* header) {
  SketchReader reader(path);
  if (header) *header = reader.header();
  std::vector<SketchVector> rows;
  while (auto row = reader.next()) rows.push_back(std::move(*row));
  return rows;
}

}  // namespace bbmh::sketch
