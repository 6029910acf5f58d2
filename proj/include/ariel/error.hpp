#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ariel {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation
/// (zero-norm vector, probability outside [0,1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A caller broke a documented precondition: shape mismatch, asymmetric
/// adjacency, stale cache.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. Carries the 1-based line number (0 when the error
/// is not tied to one line).
class IngestionError : public Error {
 public:
  IngestionError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + ":" + std::to_string(line) + ": " + what), path_(path), line_(line) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

/// Non-finite values or a diverging objective.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace ariel
