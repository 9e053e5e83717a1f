#pragma once

// The Mellin-normal boundary operator restricted to one (kappa, mu) eigenspace
// near the cap C+ of the compactified light cone: hypergeometric reduction,
// kernels, Wronskians, the variation-of-parameters inverse and its poles.
//
// Coordinates: x in (0, 1), with x = 0 the cone tip side (S+) and x = 1 the
// equator side. Unknowns are u- (coefficient of (Om_k; Om_-k), alpha_r = -1)
// and u+ (coefficient of (Om_k; -Om_-k), alpha_r = +1).

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcres/specfun.hpp"

namespace dcres {

class ChargeConfig {
 public:
  /// Throws ArgumentError unless |Z| < 1/2.
  explicit ChargeConfig(double Z);

  double Z() const noexcept { return Z_; }
  /// nu = sqrt(kappa^2 - Z^2). Throws ArgumentError for kappa == 0.
  double nu(int kappa) const;

 private:
  double Z_;
};

enum class Region { kCPlus, kCMinus };

/// Parameters of the two decoupled hypergeometric equations: F (u- channel)
/// and G (u+ channel).
struct HypergeomPair {
  HypergeomParams f;
  HypergeomParams g;
};

/// Near C+: F ~ (a, b, c), G ~ (a+1, b, c) with a = nu - iZ.
/// Near C-: F ~ (a+1, b, c), G ~ (a, b, c) with a = nu + iZ.
/// In both, b = nu + i sigma + iZ and c = 1 + 2 nu.
HypergeomPair reduce_to_hypergeometric(const ChargeConfig& cfg, int kappa, Complex sigma,
                                       Region region = Region::kCPlus);

/// Solutions of x(1-x)w'' + (c - (a+b+1)x)w' - ab w = 0 on (0, 1):
///   w1 = F(a, b; c; x)                                   regular at x = 0
///   w4 = (1-x)^{c-a-b} F(c-a, c-b; c-a-b+1; 1-x)          the (1-x)^{c-a-b} branch at x = 1
/// Both 2F1 factors equal 1 at their expansion point, so accuracy is judged
/// against max(|F|, 1); this keeps isolated zeros in x from failing.
class HypergeomKernel {
 public:
  explicit HypergeomKernel(const HypergeomParams& p, const Hyp2f1Options& opt = {});

  const HypergeomParams& params() const noexcept { return p_; }

  Complex w1(double x) const;
  Complex w1_deriv(double x) const;
  Complex w4(double x) const;
  Complex w4_deriv(double x) const;

  /// w1 w4' - w1' w4 from the evaluators.
  Complex wronskian_numeric(double x) const;
  /// K x^{-c} (1-x)^{c-a-b-1}, K = -Gamma(c)Gamma(c-a-b+1)/(Gamma(c-a)Gamma(c-b)).
  /// Throws PoleError where Gamma(c-a-b+1) has a pole.
  Complex wronskian_closed_form(double x) const;
  /// 1/K from reciprocal gammas: exactly zero where Gamma(c-a-b+1) has a pole,
  /// PoleError where Gamma(c-a) or Gamma(c-b) does.
  Complex inverse_wronskian_constant() const;
  /// x^c (1-x)^{a+b+1-c}: the factor with W(x) = K / weight(x).
  Complex weight(double x) const;

 private:
  HypergeomParams p_;
  HypergeomParams p4_;  // (c-a, c-b; c-a-b+1)
  Complex e4_;          // c - a - b
  Hyp2f1Options opt_;
};

/// The four kernels near C+: (w1, w4) for F and (w1~, w4~) for G.
struct BoundaryKernels {
  HypergeomKernel f;
  HypergeomKernel g;
};

BoundaryKernels make_kernels(const ChargeConfig& cfg, int kappa, Complex sigma);

/// Right-hand side f = f1 (Om_k; Om_-k) + f2 (Om_k; -Om_-k), given as smooth
/// functions of x supported in [support_lo, support_hi] subset of (0, 1).
struct ModeSource {
  std::function<Complex(double)> f1, f1_deriv, f2, f2_deriv;
  double support_lo = 0.0;
  double support_hi = 1.0;

  static ModeSource zero();
  /// amp1 * phi, amp2 * phi with phi(x) = exp(1 - 1/(1 - ((x-center)/half_width)^2)).
  static ModeSource bump(double center, double half_width, Complex amp1, Complex amp2);
  ModeSource scaled(Complex s) const;
  /// Pointwise sum; support is the union hull.
  friend ModeSource operator+(const ModeSource& a, const ModeSource& b);
};

struct InhomogeneousSolution {
  std::vector<double> x;
  std::vector<Complex> u_minus;
  std::vector<Complex> u_plus;
  /// u+ reconstructed from u- through the first equation of the system.
  std::vector<Complex> u_plus_elimination;
  /// max |u_plus - u_plus_elimination| / max |u_plus|.
  double route_discrepancy = 0.0;
  /// Sum of quadrature error estimates.
  double quadrature_error = 0.0;
};

struct SolveOptions {
  /// Refusal radius around resonance_poles().
  double pole_guard = 1e-6;
  /// Gauss-Kronrod relative tolerance per panel. Panels are the gaps between
  /// solve nodes, so a shallow bisection depth suffices; deeper recursion only
  /// chases the exponentially small tails at the support edges.
  double quad_tol = 1e-12;
  int quad_max_depth = 4;
  bool elimination_check = true;
  Hyp2f1Options hyp;
};

/// Variation-of-parameters solution of the boundary operator on the given x
/// nodes (strictly increasing, inside (0, 1)). Throws ResonanceError near a
/// pole, AccuracyError if quadrature stalls.
InhomogeneousSolution solve_inhomogeneous(const ChargeConfig& cfg, int kappa, Complex sigma,
                                          const ModeSource& src, const std::vector<double>& x,
                                          const SolveOptions& opt = {});

/// h1 = -2i[(d_x + (1 - iZ)/x) u- + (kappa/x) u+],
/// h2 =  2i[((1-x) d_x + (1 + iZ)/x - (1 + i sigma + iZ)) u+ + (kappa/x) u-],
/// with d_x replaced by a sixth-order finite difference on a uniform grid.
/// The returned vectors have NaN in the three cells next to each end.
std::pair<std::vector<Complex>, std::vector<Complex>> apply_boundary_operator(
    const ChargeConfig& cfg, int kappa, Complex sigma, const std::vector<double>& x,
    const std::vector<Complex>& u_minus, const std::vector<Complex>& u_plus);

/// sqrt(sum |h - f|^2) / sqrt(sum |f|^2) over nodes in [x_lo, x_hi]. The
/// window keeps the (1-x)^{-i sigma} endpoint branch, singular for Im sigma < 0,
/// away from the difference stencil.
double boundary_residual(const ChargeConfig& cfg, int kappa, Complex sigma, const ModeSource& src,
                         const InhomogeneousSolution& sol, double x_lo = 0.05, double x_hi = 0.95);

/// sigma_m = -Z - i(1 + nu + m), m = 0..m_max; empty when Z == 0.
std::vector<Complex> resonance_poles(const ChargeConfig& cfg, int kappa, int m_max);

/// Distance from sigma to the nearest resonance (infinity when there are none).
double distance_to_poles(const ChargeConfig& cfg, int kappa, Complex sigma);

/// n uniformly spaced nodes on [lo, hi].
std::vector<double> uniform_nodes(double lo, double hi, int n);

struct ScanPoint {
  Complex sigma;
  double norm = 0.0;                 ///< NaN when the solve failed
  std::optional<std::string> error;  ///< failure message, if any
};

struct ScanOptions {
  std::vector<double> x = uniform_nodes(0.05, 0.95, 181);
  SolveOptions solve;
  int threads = 1;
};

/// Interior L2 norm of (u-, u+) for each sigma. Failures are recorded per point.
std::vector<ScanPoint> scan_resolvent_norm(const ChargeConfig& cfg, int kappa, const ModeSource& src,
                                           const std::vector<Complex>& path, const ScanOptions& opt = {});

/// n points from `from` to `to`, inclusive.
std::vector<Complex> line_path(Complex from, Complex to, int n);

struct PoleFit {
  Complex sigma;                 ///< fitted pole location
  double peak_norm = 0.0;        ///< largest scanned norm
  double median_norm = 0.0;      ///< median over the coarse vertical scan
  std::vector<ScanPoint> vertical;
  std::vector<ScanPoint> horizontal;
};

/// Coarse vertical scan at Re sigma = re over [im_lo, im_hi], parabola fit of
/// 1/norm^2 around the peak, refined vertical scan, then a horizontal scan
/// through the fitted Im sigma. Throws AccuracyError if no interior peak exists.
PoleFit locate_pole(const ChargeConfig& cfg, int kappa, const ModeSource& src, double re, double im_lo,
                    double im_hi, int n_coarse = 40, const ScanOptions& opt = {});

/// Minimum of the parabola through least squares on (t_i, y_i).
double parabola_vertex(const std::vector<double>& t, const std::vector<double>& y);

struct IndexEntry {
  Complex exponent;
  int log_order = 0;
  int j = 0;  ///< generator labels (j = 0 for the I+ set)
  int k = 0;
};

struct ResonanceIndexSet {
  std::vector<IndexEntry> entries;  ///< sorted by real part, then j, then k

  /// Copy with every exponent moved by `shift`.
  ResonanceIndexSet shifted(Complex shift) const;
};

/// First: I+ set {1 + iZ + k : k = 0..depth_k-1}.
/// Second: C+ set {1 + j + sqrt(k^2 - Z^2) : 1 <= j <= depth_j, 1 <= k <= depth_k}.
std::pair<ResonanceIndexSet, ResonanceIndexSet> index_set(const ChargeConfig& cfg, int depth_j, int depth_k);

}  // namespace dcres
