#pragma once

#include <stdexcept>
#include <string>

namespace pathrobust {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: wrong buffer sizes, out-of-range parameters, malformed config.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// An image codec (libjpeg / libpng) refused to encode or decode.
class BackendError : public Error {
 public:
  using Error::Error;
};

// Filesystem failures.
class IoError : public Error {
 public:
  using Error::Error;
};

// Line-numbered failure while reading a text input (CSV / JSONL).
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Metric errors.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class IncompleteMatrixError : public Error {
 public:
  using Error::Error;
};

class IncompleteSequenceError : public Error {
 public:
  using Error::Error;
};

class MissingBaselineError : public Error {
 public:
  using Error::Error;
};

class UndefinedRatioError : public Error {
 public:
  using Error::Error;
};

class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

}  // namespace pathrobust
