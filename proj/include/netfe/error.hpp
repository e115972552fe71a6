#pragma once

#include <stdexcept>
#include <string>

namespace netfe {

/// Malformed or infeasible input (bad CSV row, loop edge, rank failure caused
/// by the data). CLI maps this to exit code 2.
class InputError : public std::runtime_error {
public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical procedure failed to converge or hit a singular system.
/// CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_norm(residual) {}

  double residual_norm = 0.0;
};

}  // namespace netfe
