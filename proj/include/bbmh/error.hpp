#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bbmh {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// min(pi(S)) is undefined for an empty set.
class EmptySetError : public Error {
 public:
  using Error::Error;
};

class IncompatibleSignature : public Error {
 public:
  using Error::Error;
};

class IncompatibleSketch : public Error {
 public:
  using Error::Error;
};

// The exact probability oracle refused a universe larger than its configured cap.
class OracleCapacityError : public Error {
 public:
  using Error::Error;
};

class UndefinedRatioError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class ParseError : public FormatError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : FormatError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bbmh
