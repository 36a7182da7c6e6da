#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wigner_forge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input or configuration detected before any numerics run.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Failure of a numerical procedure (annihilation, divergence, aliasing, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Iterative solver ran out of iterations. Carries the accepted energy trace.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> energy_trace)
      : NumericalError(what), energy_trace_(std::move(energy_trace)) {}

  const std::vector<double>& energy_trace() const noexcept { return energy_trace_; }

 private:
  std::vector<double> energy_trace_;
};

/// Malformed state file or mismatched shapes on load.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace wigner_forge
