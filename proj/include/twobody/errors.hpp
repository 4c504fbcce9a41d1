#pragma once

#include <stdexcept>
#include <string>

namespace twobody {

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A closed-form expression hit a vanishing denominator.
class SingularParameter : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A bound state required by a wave packet does not exist at some momentum.
class IncompleteBand : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time propagation could not meet its tolerance.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved residual " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}

  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// LAPACK returned a nonzero info code.
class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twobody
