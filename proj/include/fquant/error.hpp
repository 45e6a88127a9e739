#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace fquant {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A system description violates one of its invariants (probabilities, ratios, ...).
class SpecError : public Error {
 public:
  /// `path` is a JSON pointer to the offending field when known.
  SpecError(const std::string& what, int line = 0, std::string path = {})
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        message_(what),
        path_(std::move(path)),
        line_(line) {}
  int line() const { return line_; }
  const std::string& path() const { return path_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::string path_;
  int line_;
};

class InvalidSymbol : public Error {
 public:
  using Error::Error;
};

class SeparationRequired : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

class NotAnFma : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class InternalInvariant : public Error {
 public:
  using Error::Error;
};

/// An explicit word was asked for a letter past its end.
class WordTooShort : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(double requested, double budget)
      : Error("enumeration would produce " + count_string(requested) + " nodes (budget " +
              count_string(budget) + ")"),
        requested_(requested) {}
  double requested() const { return requested_; }

 private:
  static std::string count_string(double v) {
    if (v < 1e18) return std::to_string(static_cast<std::uint64_t>(v));
    return std::to_string(v);
  }
  double requested_;
};

}  // namespace fquant
