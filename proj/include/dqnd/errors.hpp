#pragma once

#include <stdexcept>
#include <string>

namespace dqnd {

enum class ErrorKind {
  Config,
  Dimension,
  Domain,
  Truncation,
  Accuracy,
  Contract,
  Assembly,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorKind::Dimension, what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

/// Probability mass reached the Fock cutoff region. `suggested_cutoff` is 0 when unknown.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int suggested_cutoff = 0)
      : Error(ErrorKind::Truncation, what), suggested_cutoff_(suggested_cutoff) {}
  int suggested_cutoff() const noexcept { return suggested_cutoff_; }

 private:
  int suggested_cutoff_;
};

/// Step-halving self-check failed. `recommended_step` is the step that should be retried.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double recommended_step)
      : Error(ErrorKind::Accuracy, what), recommended_step_(recommended_step) {}
  double recommended_step() const noexcept { return recommended_step_; }

 private:
  double recommended_step_;
};

class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(ErrorKind::Contract, what) {}
};

class AssemblyError : public Error {
 public:
  explicit AssemblyError(const std::string& what) : Error(ErrorKind::Assembly, what) {}
};

// CLI exit codes: 0 success, 2 config, 3 truncation, 4 accuracy, 1 anything else.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return 2;
    case ErrorKind::Truncation: return 3;
    case ErrorKind::Accuracy: return 4;
    default: return 1;
  }
}

}  // namespace dqnd
