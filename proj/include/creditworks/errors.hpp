#pragma once

#include <stdexcept>
#include <string>

namespace creditworks {

// Every failure the library raises derives from Error. The CLI maps the
// concrete types onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Header/spec mismatch, unknown column names, bad column roles.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Malformed CSV framing. `row` is the 1-based physical record index
// (the header is record 1).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row)
      : Error(what + " (record " + std::to_string(row) + ")"), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// The data cannot support the requested operation (nothing left after
// filtering, a column with no usable values, too few rows to split).
class DataError : public Error {
 public:
  using Error::Error;
};

// Training is undefined on the given labels (e.g. only one class present).
class TrainingError : public Error {
 public:
  using Error::Error;
};

// Feature vector / column list does not match what the model was fit on.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Columns needed for EAD / recovery / pricing are absent.
class MissingExposureColumns : public Error {
 public:
  using Error::Error;
};

// Invalid argument to a numeric routine (probability out of range, T <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Bad command line or configuration file.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace creditworks
