#pragma once

#include <stdexcept>
#include <string>

namespace mrfuzzy {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation's contract (bad argument, empty list, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent input data (CSV, rule-base files, dimensions).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Parse failure with a 1-based source location.
class ParseError : public DataError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : DataError(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// An inference or training step could not produce a finite number.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// No rule has a production term above the efficient inference parameter.
class EmptyActiveSetError : public NumericError {
 public:
  EmptyActiveSetError() : NumericError("no rule has a production term above d0") {}
};

/// Every rule lies at distance zero from the input in type-distance inference.
class AllDistancesZeroError : public NumericError {
 public:
  AllDistancesZeroError() : NumericError("all type-distance rule distances are zero") {}
};

/// The firing strengths sum to zero, so the weighted average is undefined.
class DegenerateWeightsError : public NumericError {
 public:
  explicit DegenerateWeightsError(const std::string& what) : NumericError(what) {}
};

}  // namespace mrfuzzy
