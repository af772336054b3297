#include "bbmh/signature_file.hpp"

#include <array>

#include "bbmh/byte_io.hpp"
#include "bbmh/error.hpp"

namespace bbmh::hashcore {

namespace {

constexpr std::array<char, 4> kMagic{'B', 'B', 'M', 'H'};

}  // namespace

SignatureWriter::SignatureWriter(const std::string& path, std::uint32_t k, unsigned b)
    : out_(path, std::ios::binary | std::ios::trunc), path_(path), k_(k), b_(b) {
  if (!out_) throw IoError("cannot open " + path + " for writing");
  if (b < 1 || b > kMaxBits) throw InvalidArgument("SignatureWriter: b must lie in [1, 16]");
  out_.write(kMagic.data(), kMagic.size());
  detail::write_le<std::uint8_t>(out_, kSignatureFileVersion);
  detail::write_le<std::uint32_t>(out_, k_);
  detail::write_le<std::uint8_t>(out_, static_cast<std::uint8_t>(b_));
  detail::write_le<std::uint64_t>(out_, 0);
}

SignatureWriter::~SignatureWriter() {
  if (!closed_) {
    try {
      close();
    } catch (...) {
    }
  }
}

void SignatureWriter::append(const BbitSignature& sig) {
  if (closed_) throw IoError("SignatureWriter: append after close");
  if (sig.k() != k_ || sig.b() != b_) {
    throw IncompatibleSignature("SignatureWriter: record does not match the file's k and b");
  }
  const auto bytes = sig.packed();
  out_.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  ++count_;
}

void SignatureWriter::close() {
  if (closed_) return;
  closed_ = true;
  out_.seekp(10);
  detail::write_le<std::uint64_t>(out_, count_);
  out_.close();
  if (!out_) throw IoError("failed writing " + path_);
}

SignatureReader::SignatureReader(const std::string& path) : in_(path, std::ios::binary) {
  if (!in_) throw IoError("cannot open " + path);
  std::array<char, 4> magic{};
  if (!in_.read(magic.data(), magic.size()) || magic != kMagic) {
    throw FormatError(path + ": not a BBMH signature file");
  }
  const auto version = detail::read_le<std::uint8_t>(in_);
  if (version != kSignatureFileVersion) {
    throw FormatError(path + ": unsupported BBMH version " + std::to_string(version));
  }
  header_.k = detail::read_le<std::uint32_t>(in_);
  header_.b = detail::read_le<std::uint8_t>(in_);
  header_.record_count = detail::read_le<std::uint64_t>(in_);
  if (header_.b < 1 || header_.b > kMaxBits) throw FormatError(path + ": b out of range");
}

std::optional<BbitSignature> SignatureReader::next() {
  if (read_ == header_.record_count) return std::nullopt;
  std::vector<std::uint8_t> payload(BbitSignature::packed_size(header_.k, header_.b));
  if (!in_.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()))) {
    throw FormatError("BBMH file truncated at record " + std::to_string(read_));
  }
  ++read_;
  return BbitSignature::from_packed(header_.k, header_.b, std::move(payload));
}

void write_signature_file(const std::string& path, std::uint32_t k, unsigned b,
                          const std::vector<BbitSignature>& records) {
  SignatureWriter writer(path, k, b);
  for (const auto& r : records) writer.append(r);
  writer.close();
}

std::vector<BbitSignature> read_signature_file(const std::string& path, SignatureFileHeader* header) {
  SignatureReader reader(path);
  if (header) *header = reader.header();
  std::vector<BbitSignature> out;
  out.reserve(static_cast<std::size_t>(reader.header().record_count));
  while (auto sig = reader.next()) out.push_back(std::move(*sig));
  return out;
}

}  // namespace bbmh::hashcore
