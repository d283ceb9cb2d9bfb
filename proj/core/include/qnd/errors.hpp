#pragma once

#include <stdexcept>
#include <string>

namespace qnd {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad parameters, malformed configuration, or a violated precondition.
class InvalidInput : public Error {
public:
  using Error::Error;
};

/// A numerical procedure failed (singular system, positivity loss, ...).
class NumericalFailure : public Error {
public:
  using Error::Error;
};

/// Time marching did not reach a stationary state within the allotted time.
class ConvergenceFailure : public NumericalFailure {
public:
  ConvergenceFailure(const std::string& what, double last_relative_change)
      : NumericalFailure(what), last_relative_change_(last_relative_change) {}

  double last_relative_change() const noexcept { return last_relative_change_; }

private:
  double last_relative_change_;
};

}  // namespace qnd
