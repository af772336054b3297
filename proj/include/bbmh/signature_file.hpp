#pragma once

// BBMH signature files.
//
//   offset  size  field
//   0       4     magic "BBMH"
//   4       1     version (1)
//   5       4     k             (u32, little-endian)
//   9       1     b             (u8)
//   10      8     record_count  (u64, little-endian)
//   18      ...   record_count payloads of ceil(k*b/8) bytes each

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "bbmh/hashcore.hpp"

namespace bbmh::hashcore {

inline constexpr std::uint8_t kSignatureFileVersion = 1;
inline constexpr std::size_t kSignatureHeaderSize = 18;

struct SignatureFileHeader {
  std::uint32_t k = 0;
  unsigned b = 0;
  std::uint64_t record_count = 0;
};

// Streams signatures to disk. The record count is patched into the header by
// close(), so records can be appended without knowing their number upfront.
class SignatureWriter {
 public:
  SignatureWriter(const std::string& path, std::uint32_t k, unsigned b);
  ~SignatureWriter();

  SignatureWriter(const SignatureWriter&) = delete;
  SignatureWriter& operator=(const SignatureWriter&) = delete;

  void append(const BbitSignature& sig);
  void close();

  std::uint64_t record_count() const noexcept { return count_; }

 private:
  std::ofstream out_;
  std::string path_;
  std::uint32_t k_;
  unsigned b_;
  std::uint64_t count_ = 0;
  bool closed_ = false;
};

class SignatureReader {
 public:
  explicit SignatureReader(const std::string& path);

  const SignatureFileHeader& header() const noexcept { return header_; }

  // Next record, or nullopt once record_count records were read.
  std::optional<BbitSignature> next();

 private:
  std::ifstream in_;
  SignatureFileHeader header_;
  std::uint64_t read_ = 0;
};

void write_signature_file(const std::string& path, std::uint32_t k, unsigned b,
                          const std::vector<BbitSignature>& records);

std::vector<BbitSignature> read_signature_file(const std::string& path,
                                               SignatureFileHeader* header = nullptr);

}  // namespace bbmh::hashcore
