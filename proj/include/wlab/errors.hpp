#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wlab {

/// Raised when an input violates a documented precondition.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The mass factor 1 - 2ku dropped below the configured floor.
class DegeneracyError : public std::runtime_error {
public:
  DegeneracyError(const std::string& what, double min_mass_factor)
      : std::runtime_error(what), min_mass_factor_(min_mass_factor) {}

  double min_mass_factor() const { return min_mass_factor_; }

private:
  double min_mass_factor_;
};

/// Picard or the inner linear solver ran out of iterations.
class NonconvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A file could not be read or written.
class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace wlab
