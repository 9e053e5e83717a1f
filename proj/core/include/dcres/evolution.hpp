#pragma once

// Time-domain evolution of one (kappa, mu) mode of the massless Dirac-Coulomb
// equation i d_t psi = B psi, B = -i alpha_r (d_r + 1/r - beta K / r) + Z/r.
//
// With psi = u+(t,r) (Om_k; -Om_-k) + u-(t,r) (Om_k; Om_-k) and U = r u, the
// radial system is
//   (d_t + d_r) U+ = -(kappa/r) U- - i(Z/r) U+
//   (d_t - d_r) U- =  (kappa/r) U+ - i(Z/r) U-
// Outgoing U+ and incoming U- are transported exactly along characteristics
// (dt = dr on a staggered grid r_j = (j + 1/2) dr); the 1/r coupling is applied
// as a pointwise 2x2 unitary in a symmetric (Strang) split. At the origin the
// incoming wave is reflected into the regular branch, U+ = -kappa/(nu + iZ) U-.

#include <string>
#include <vector>

#include "dcres/boundary_ode.hpp"
#include "dcres/spinor_harmonics.hpp"

namespace dcres {

struct RadialGrid {
  double dr = 0.05;
  int n = 0;

  double r(int j) const noexcept { return (j + 0.5) * dr; }
  double r_min() const noexcept { return 0.5 * dr; }
  double r_max() const noexcept { return (n - 0.5) * dr; }
  /// Cell containing radius r, clamped to the grid.
  int cell(double r) const;

  /// Smallest grid with r_max >= radius. Throws ArgumentError on bad input.
  static RadialGrid covering(double radius, double dr);
};

struct RadialField {
  AngularMode mode{1, 0.5};
  RadialGrid grid;
  std::vector<Complex> u_plus;   ///< alpha_r = +1 coefficient
  std::vector<Complex> u_minus;  ///< alpha_r = -1 coefficient
  double t = 0.0;

  static RadialField zero(const AngularMode& mode, const RadialGrid& grid);
  /// r u+- = amp+- phi((r - center)/half_width), phi(x) = exp(1 - 1/(1 - x^2)) on |x| < 1.
  static RadialField bump(const AngularMode& mode, const RadialGrid& grid, double center, double half_width,
                          Complex amp_plus, Complex amp_minus);

  /// int (|u+|^2 + |u-|^2) r^2 dr by the midpoint rule.
  double norm2() const;
  /// Radius of the outermost nonzero cell (0 for the zero field).
  double support_radius() const;
  /// Radius of the innermost nonzero cell (0 for the zero field).
  double support_inner() const;
};

enum class Scheme {
  kSplitExact,  ///< exact 2x2 rotation for the coupling
  kCayley,      ///< Cayley (Crank-Nicolson) transform of the coupling
};

const char* scheme_name(Scheme s) noexcept;
/// Parses "split-exact" or "cayley"; throws ArgumentError otherwise.
Scheme parse_scheme(const std::string& name);

struct EvolutionConfig {
  ChargeConfig charge{0.0};
  double dt = 0.05;
  double t_final = 0.0;
  Scheme scheme = Scheme::kSplitExact;
  /// Store a snapshot every this many steps (0: initial and final only).
  int snapshot_every = 0;
  /// Radii at which U+- is recorded after every step.
  std::vector<double> record_radii{50, 100, 150, 200, 250, 300};
};

/// d_t (u+, u-) from the radial system with fourth-order differences in r
/// (one-sided at the grid ends). The returned field has the input's grid/time.
RadialField apply_radial_hamiltonian(const ChargeConfig& cfg, const RadialField& field);

/// Pointwise version for smooth profiles: d_t u given u and d_r u at radius r.
void radial_time_derivative(const ChargeConfig& cfg, int kappa, double r, Complex u_plus, Complex u_minus,
                            Complex du_plus, Complex du_minus, Complex& dt_plus, Complex& dt_minus);

/// Reflection coefficient at the origin, -kappa/(nu + iZ), of modulus one.
Complex origin_reflection(const ChargeConfig& cfg, int kappa);

/// One step of size dt (dt < 0 steps backward). Requires |dt| == grid.dr to
/// within 1e-12 relative; throws CflError otherwise.
void step(RadialField& field, const ChargeConfig& cfg, double dt, Scheme scheme = Scheme::kSplitExact);

struct Trajectory {
  int kappa = 1;
  double Z = 0.0;
  RadialGrid grid;
  double dt = 0.0;
  double t0 = 0.0;  ///< time of the initial field
  Scheme scheme = Scheme::kSplitExact;
  double initial_support = 0.0;
  double initial_inner = 0.0;

  std::vector<RadialField> snapshots;
  std::vector<double> norm2_history;    ///< after each step, index 0 = initial
  std::vector<double> support_history;  ///< outer support radius, same indexing

  std::vector<double> record_radii;  ///< actual cell radii used
  std::vector<int> record_cells;
  /// U+- at each record cell after step n + 1 (time t0 + (n + 1) dt), indexed [radius][n].
  std::vector<std::vector<Complex>> record_plus;
  std::vector<std::vector<Complex>> record_minus;

  RadialField final_field;
  int steps = 0;
};

/// Forward evolution of Cauchy data to cfg.t_final. Throws DomainSizeError
/// before stepping if the support could reach r_max, and CflError if dt != dr.
Trajectory forward_solve(const EvolutionConfig& cfg, const RadialField& initial);

struct RadiationSample {
  double s = 0.0;
  Complex plus;   ///< alpha_r = +1 component of the radiation field
  Complex minus;  ///< alpha_r = -1 component, extrapolated the same way
  /// |P_all - P_drop_last| / |P_all| for the + component (0 when P_all == 0).
  double convergence = 0.0;
  int radii_used = 0;
};

struct ExtractionOptions {
  int min_radii = 3;
};

/// Lattice values s_m = t0 + (m + 1/2) dr in [s_lo, s_hi], every `stride` cells.
std::vector<double> lattice_s_values(const Trajectory& traj, double s_lo, double s_hi, int stride = 1);

/// ((t + r)/2)^{1 + iZ} u(t, r) along s = t - r at each record radius,
/// extrapolated to 1/(t + r) -> 0 with Neville's scheme. s is snapped to the
/// nearest lattice value. Throws AccuracyError when fewer than min_radii
/// radii reach s.
std::vector<RadiationSample> extract_radiation_field(const Trajectory& traj, const std::vector<double>& s_values,
                                                     const ExtractionOptions& opt = {});

/// sum |R+(s)|^2 ds over lattice-spaced samples (assumes stride-1 lattice spacing ds = dr).
double radiation_norm2(const std::vector<RadiationSample>& samples, double ds);

}  // namespace dcres
