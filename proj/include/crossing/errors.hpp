#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace crossing {

// All library failures derive from Error. The category string is stable API:
// the CLI prints "error: <category>: <detail>" and maps categories to exit
// codes (usage=2, domain=3, divergence=4, io=5).
class Error : public std::runtime_error {
 public:
  Error(std::string category, std::string detail)
      : std::runtime_error(category + ": " + detail),
        category_(std::move(category)),
        detail_(std::move(detail)) {}

  const std::string& category() const noexcept { return category_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string category_;
  std::string detail_;
};

// Inputs outside a function's documented domain (bad window, bad lambda,
// R outside the model's validity range, ...).
class DomainError : public Error {
 public:
  explicit DomainError(std::string detail) : Error("domain", std::move(detail)) {}
};

// Root bracketing failed: no sign change of H11 - H22 on the given interval.
class BracketError : public DomainError {
 public:
  using DomainError::DomainError;
};

// H12 = 0: the reduction to the one-parameter dimensionless problem does not
// exist (the coupling sets the time and amplitude scales).
class SingularReductionError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A statistic was requested over too few samples to be meaningful.
class InsufficientDataError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Non-finite amplitudes appeared during integration.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::string detail) : Error("divergence", std::move(detail)) {}
};

// Filesystem failures; the detail names the offending path.
class IoError : public Error {
 public:
  explicit IoError(std::string detail) : Error("io", std::move(detail)) {}
};

// Malformed command lines; normally raised by the CLI layer.
class UsageError : public Error {
 public:
  explicit UsageError(std::string detail) : Error("usage", std::move(detail)) {}
};

}  // namespace crossing
