#pragma once

#include <stdexcept>
#include <string>

namespace genlasso {

/// Malformed or inconsistent input: bad dimensions, non-finite entries,
/// invalid graph specs, out-of-range parameters.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine failed to deliver a result of the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The iterative solver hit its iteration cap. Carries the last residuals so
/// callers can decide whether the iterate is still usable.
class ConvergenceError : public NumericalError {
 public:
  ConvergenceError(const std::string& what, double primal_residual,
                   double dual_residual, int iterations)
      : NumericalError(what),
        primal_residual_(primal_residual),
        dual_residual_(dual_residual),
        iterations_(iterations) {}

  double primal_residual() const noexcept { return primal_residual_; }
  double dual_residual() const noexcept { return dual_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double primal_residual_;
  double dual_residual_;
  int iterations_;
};

/// The GLM criterion does not attain its infimum: iterates ran off to
/// infinity (fit norm past the configured bound).
class NoSolutionError : public NumericalError {
 public:
  NoSolutionError(const std::string& what, double fit_norm)
      : NumericalError(what), fit_norm_(fit_norm) {}

  double fit_norm() const noexcept { return fit_norm_; }

 private:
  double fit_norm_;
};

}  // namespace genlasso
