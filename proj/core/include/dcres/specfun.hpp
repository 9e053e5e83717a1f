#pragma once

// Complex gamma function and the Gauss hypergeometric function 2F1(a, b; c; x)
// with complex parameters and real argument x in [0, 1).

#include <complex>
#include <initializer_list>

namespace dcres {

using Complex = std::complex<double>;

/// Gamma(z). Throws PoleError at nonpositive integers.
Complex gamma_c(Complex z);

/// 1/Gamma(z); entire, exactly zero at the poles of Gamma.
Complex rgamma_c(Complex z);

/// A logarithm of Gamma(z) (exp(log_gamma_c(z)) == gamma_c(z); the imaginary
/// part is not forced onto the principal branch). Throws PoleError at poles.
Complex log_gamma_c(Complex z);

/// prod Gamma(num_i) / prod Gamma(den_j), evaluated in log space.
/// Returns 0 when a denominator argument is a pole; throws PoleError when a
/// numerator argument is.
Complex gamma_ratio(std::initializer_list<Complex> num, std::initializer_list<Complex> den);

struct HypergeomParams {
  Complex a;
  Complex b;
  Complex c;

  /// Throws ParameterError when c is a nonpositive integer.
  void validate() const;
};

struct Hyp2f1Options {
  int max_terms = 100000;
  /// hyp2f1() raises AccuracyError when the error estimate exceeds
  /// fail_above * max(|F|, fail_floor).
  double fail_above = 1e-6;
  double fail_floor = 0.0;
  /// c - a - b closer than this to an integer is treated as degenerate and
  /// evaluated by interpolation from samples spaced by the same amount.
  double degenerate_step = 1e-3;
};

struct Hyp2f1Result {
  Complex value;
  double error_estimate = 0.0;  ///< absolute
  int terms = 0;                ///< series terms summed, over all pieces
  bool degenerate = false;      ///< perturbation path taken
};

/// Principal-branch 2F1 on [0, 1): direct series for x <= 1/2, the (1 - x)
/// connection formula above. Throws ParameterError, ArgumentError (x outside
/// [0, 1)) and AccuracyError (series did not converge within max_terms).
Hyp2f1Result hyp2f1_eval(const HypergeomParams& p, double x, const Hyp2f1Options& opt = {});

/// Value only; additionally throws AccuracyError when the relative error
/// estimate exceeds opt.fail_above.
Complex hyp2f1(const HypergeomParams& p, double x, const Hyp2f1Options& opt = {});

/// d/dx 2F1 = (ab/c) 2F1(a+1, b+1; c+1; x).
Complex hyp2f1_deriv(const HypergeomParams& p, double x, const Hyp2f1Options& opt = {});

/// The two evaluation routes, exposed for cross-checks. The series accepts any
/// x in [0, 1); the connection route any x in (0, 1).
Hyp2f1Result hyp2f1_series(const HypergeomParams& p, double x, const Hyp2f1Options& opt = {});
Hyp2f1Result hyp2f1_connection(const HypergeomParams& p, double x, const Hyp2f1Options& opt = {});

}  // namespace dcres
