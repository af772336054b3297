#pragma once

// SKCH sketch files.
//
//   offset  size  field
//   0       4     magic "SKCH"
//   4       1     kind  (0 = cm, 1 = vw, 2 = rp; bit 0x10 set = normal multipliers)
//   5       8     s     (f64, little-endian)
//   13      4     k     (u32)
//   17      8     seed  (u64)
//   25      8     record_count (u64)
//   33      ...   record_count rows of k little-endian f64

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "bbmh/sketch.hpp"

namespace bbmh::sketch {

inline constexpr std::size_t kSketchHeaderSize = 33;
inline constexpr std::uint8_t kNormalFamilyFlag = 0x10;

struct SketchFileHeader {
  SketchKind kind = SketchKind::cm;
  SignDistribution::Family family = SignDistribution::Family::sparse;
  double s = 1.0;
  std::uint32_t k = 0;
  std::uint64_t seed = 0;
  std::uint64_t record_count = 0;
};

class SketchWriter {
 public:
  SketchWriter(const std::string& path, SketchKind kind, const SignDistribution& sign,
               std::uint32_t k, std::uint64_t seed);
  ~SketchWriter();

  SketchWriter(const SketchWriter&) = delete;
  SketchWriter& operator=(const SketchWriter&) = delete;

  void append(const SketchVector& row);
  void close();

  std::uint64_t record_count() const noexcept { return header_.record_count; }

 private:
  std::ofstream out_;
  std::string path_;
  SketchFileHeader header_;
  bool closed_ = false;
};

class SketchReader {
 public:
  explicit SketchReader(const std::string& path);

  const SketchFileHeader& header() const noexcept { return header_; }
  std::optional<SketchVector> next();

 private:
  std::ifstream in_;
  SketchFileHeader header_;
  std::uint64_t read_ = 0;
};

std::vector<SketchVector> read_sketch_file(const std::string& path, SketchFileHeader* header = nullptr);

}  // namespace bbmh::sketch
