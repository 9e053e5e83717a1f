#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace dcres {

/// Invalid argument to a public entry point (bad index, non-unit vector,
/// out-of-range charge, malformed mode labels).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Base class for failures of a numerical procedure on valid input.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation hit a pole of the gamma function at a nonpositive integer.
class PoleError : public NumericalError {
 public:
  PoleError(const std::string& what, long location)
      : NumericalError(what), location_(location) {}
  long location() const noexcept { return location_; }

 private:
  long location_;
};

/// Hypergeometric parameter c is a nonpositive integer.
class ParameterError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Series or quadrature failed to reach the requested accuracy.
class AccuracyError : public NumericalError {
 public:
  AccuracyError(const std::string& what, double achieved)
      : NumericalError(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// The Mellin frequency sits on (or within the refusal radius of) a resonance.
class ResonanceError : public NumericalError {
 public:
  ResonanceError(const std::string& what, std::complex<double> pole)
      : NumericalError(what), pole_(pole) {}
  std::complex<double> pole() const noexcept { return pole_; }

 private:
  std::complex<double> pole_;
};

/// A sampled field is not represented by the finite spectral basis.
class DecompositionError : public NumericalError {
 public:
  DecompositionError(const std::string& what, double residual)
      : NumericalError(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Time step incompatible with the characteristic grid.
class CflError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Solution support would reach the outer edge of the radial grid.
class DomainSizeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Fit window unusable: too few samples, zeros, or unresolved phase.
class WindowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace dcres
