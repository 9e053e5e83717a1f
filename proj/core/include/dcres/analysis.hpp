#pragma once

// Post-processing of extracted radiation fields: power-law fits with an
// oscillatory phase, the Z = 0 tail test, and matching against index sets.

#include <string>
#include <vector>

#include "dcres/boundary_ode.hpp"
#include "dcres/evolution.hpp"

namespace dcres {

struct DecaySample {
  double s = 0.0;
  Complex value;
};

/// The alpha_r = +1 component of each radiation sample.
std::vector<DecaySample> decay_samples(const std::vector<RadiationSample>& rad);

struct FitWindow {
  double s_lo = 20.0;
  double s_hi = 100.0;
};

/// [20, 0.8 max s]. Throws WindowError on an empty sample list.
FitWindow default_window(const std::vector<DecaySample>& samples);

struct FitResult {
  double exponent = 0.0;     ///< |R| ~ s^{-exponent}
  double phase_slope = 0.0;  ///< arg R ~ phase_slope * ln s
  Complex amplitude;         ///< R ~ amplitude * s^{-exponent + i phase_slope}
  double s_lo = 0.0;
  double s_hi = 0.0;
  double residual = 0.0;  ///< max |model - R| / |R| over the window
  int samples = 0;
};

/// Least squares of ln|R| and unwrapped arg R against ln s over the window.
/// Throws WindowError with fewer than min_samples samples, non-increasing s,
/// a zero value, or a phase jump above pi/2 between neighbours.
FitResult fit_power_law(const std::vector<DecaySample>& samples, const FitWindow& window, int min_samples = 20);

struct HuygensReport {
  bool passed = false;
  bool vacuous = false;  ///< zero field or no samples beyond the threshold
  double threshold_s = 0.0;
  double peak = 0.0;      ///< max |R| over all samples
  double tail_max = 0.0;  ///< max |R| for s > threshold_s
  double tail_ratio = 0.0;
  int tail_samples = 0;
};

/// Pass iff max |R(s)| for s > support_bound + margin is below ratio * peak.
HuygensReport huygens_test(const std::vector<DecaySample>& samples, double support_bound, double margin = 5.0,
                           double ratio = 1e-6);

struct IndexMatch {
  bool matched = false;
  double fitted = 0.0;
  double nearest = 0.0;  ///< nearest real exponent in the set, as given
  double gap = 0.0;      ///< |fitted - nearest|; infinity for an empty set
  int j = 0;
  int k = 0;
  /// Same exponent in the other convention: radiation field (as given) + 1
  /// is the decay rate in t - r of the field itself.
  double nearest_field_convention = 0.0;
  std::string note;
};

/// The C+ index set moved to the radiation-field convention:
/// {j + sqrt(k^2 - Z^2)}; j = k = 1 gives the leading 1 + sqrt(1 - Z^2).
ResonanceIndexSet radiation_index_set(const ChargeConfig& cfg, int depth_j, int depth_k);

/// Nearest set exponent (real parts) to fit.exponent; matched iff gap <= tolerance.
IndexMatch compare_index_set(const FitResult& fit, const ResonanceIndexSet& iset, double tolerance);

}  // namespace dcres
