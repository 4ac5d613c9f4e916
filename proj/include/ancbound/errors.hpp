#pragma once

#include <stdexcept>
#include <string>

namespace ancbound {

// Invalid argument values (empty inputs, out-of-range parameters).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inconsistent configuration, e.g. sample-rate mismatch between operands.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Room geometry / T60 combination that has no physical reflection coefficient.
class InfeasibleConfigError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double step_size)
      : std::runtime_error(what), step_size_(step_size) {}
  double step_size() const noexcept { return step_size_; }

 private:
  double step_size_;
};

class IngestionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UndefinedMetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ancbound
