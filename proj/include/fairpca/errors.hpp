#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fairpca {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rejected input: bad shapes, out-of-range parameters, malformed files.
/// The CLI maps this to exit code 2.
struct ValidationError : Error {
  using Error::Error;
};

/// A solver produced non-finite values. The CLI maps this to exit code 3.
struct DivergenceError : Error {
  DivergenceError(const std::string& what, std::size_t iteration)
      : Error(what), iteration(iteration) {}
  std::size_t iteration = 0;
};

/// An iterative routine hit its iteration cap before reaching its residual
/// target. Carries the residual at the point of giving up.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual = 0.0;
};

}  // namespace fairpca
