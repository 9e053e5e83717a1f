#pragma once

// Spinor spherical harmonics Omega_{kappa,mu}, the 4-spinor eigenvectors of
// Dirac's K operator built from them, and spectral/differential checks of the
// angular identities used by the radial reduction.
//
// Convention note: the K-eigenspaces used downstream pair Omega_{kappa,mu} in
// the upper block with Omega_{-kappa,mu} (same mu) in the lower block. Couplings
// between different mu are assumed absent; every operator in this library
// preserves mu.

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "dcres/clifford.hpp"

namespace dcres {

using Spinor2 = std::array<Complex, 2>;

struct SpherePoint {
  double theta = 0.0;  ///< polar angle in [0, pi]
  double phi = 0.0;    ///< azimuth

  Vec3 unit_vector() const;
  static SpherePoint from_direction(const Vec3& d);
};

/// Labels (kappa, mu) of a joint eigenspace of K, J^2, J_3.
/// mu is stored as the odd integer 2*mu.
class AngularMode {
 public:
  AngularMode(int kappa, double mu);
  static AngularMode from_twice_mu(int kappa, int two_mu);

  int kappa() const noexcept { return kappa_; }
  double mu() const noexcept { return 0.5 * two_mu_; }
  int two_mu() const noexcept { return two_mu_; }
  /// Orbital degree of the upper block, l = |kappa + 1/2| - 1/2.
  int l() const noexcept { return orbital_degree(kappa_); }
  /// The (-kappa, mu) mode that occupies the lower block.
  AngularMode partner() const { return from_twice_mu(-kappa_, two_mu_); }

  static int orbital_degree(int kappa) noexcept { return kappa > 0 ? kappa : -kappa - 1; }

  friend bool operator==(const AngularMode&, const AngularMode&) = default;

 private:
  AngularMode(int kappa, int two_mu, bool);
  int kappa_;
  int two_mu_;
};

/// All admissible modes for a given kappa, ordered by increasing mu.
std::vector<AngularMode> admissible_modes(int kappa);

/// Orthonormal spherical harmonic with Condon-Shortley phase.
/// Throws ArgumentError unless 0 <= |m| <= l.
Complex scalar_harmonic(int l, int m, SpherePoint p);

/// Two-component spinor harmonic Omega_{kappa,mu}(p).
Spinor2 omega(const AngularMode& mode, SpherePoint p);

/// Lower-block sign of a K-eigenvector (Omega_{kappa,mu}; +-Omega_{-kappa,mu}).
enum class BlockSign { kPlus, kMinus };

/// alpha_r eigenvalue carried by the K-eigenvector with the given block sign:
/// kPlus -> -1, kMinus -> +1.
int alpha_r_eigenvalue(BlockSign sign) noexcept;

/// (Omega_{kappa,mu}(p); +-Omega_{-kappa,mu}(p)), not normalized (L^2 norm^2 = 2).
Spinor4 k_eigenvector(const AngularMode& mode, BlockSign sign, SpherePoint p);

/// Gauss-Legendre in cos(theta) times the uniform rule in phi.
class SphereQuadrature {
 public:
  SphereQuadrature(int n_theta, int n_phi);
  /// Smallest rule exact for polynomial integrands of total degree <= max_degree.
  static SphereQuadrature for_degree(int max_degree);

  std::size_t size() const noexcept { return points_.size(); }
  const std::vector<SpherePoint>& points() const noexcept { return points_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  int n_theta() const noexcept { return n_theta_; }
  int n_phi() const noexcept { return n_phi_; }

  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(points_.front()));
    R acc{};
    for (std::size_t i = 0; i < points_.size(); ++i) acc += weights_[i] * f(points_[i]);
    return acc;
  }

 private:
  int n_theta_;
  int n_phi_;
  std::vector<SpherePoint> points_;
  std::vector<double> weights_;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// 4-spinor field sampled at the nodes of a sphere quadrature.
struct SampledSpinorField {
  SphereQuadrature grid;
  std::vector<Spinor4> values;

  static SampledSpinorField sample(const SphereQuadrature& grid,
                                   const std::function<Spinor4(SpherePoint)>& f);
  static SampledSpinorField zero(const SphereQuadrature& grid);

  /// L^2(S^2) inner product, antilinear in *this.
  Complex inner(const SampledSpinorField& other) const;
  double norm() const;
  double max_abs_difference(const SampledSpinorField& other) const;
};

/// Coefficients of a sampled field on the basis (Omega_{k,mu}; 0), (0; Omega_{k,mu}),
/// |k| <= kappa_max.
struct KDecomposition {
  struct Term {
    AngularMode mode;
    bool upper;       ///< true: (Omega; 0), false: (0; Omega)
    Complex coefficient;
    double k_eigenvalue;  ///< -kappa on the upper block, +kappa on the lower block
  };
  std::vector<Term> terms;
  double relative_residual = 0.0;
};

KDecomposition decompose_k_basis(const SampledSpinorField& field, int kappa_max);

/// K = beta (1 + Sigma.L) applied spectrally. Throws DecompositionError when the
/// field is not represented by modes with |kappa| <= kappa_max to tolerance.
SampledSpinorField apply_k_operator(const SampledSpinorField& field, int kappa_max,
                                    double tolerance = 1e-9);

/// K applied by finite differences of the angular derivatives at p.
Spinor4 apply_k_differential(const std::function<Spinor4(SpherePoint)>& f, SpherePoint p,
                             double h = 1e-4);

/// Positive spherical Laplacian (L^2) applied by finite differences at p.
Spinor2 laplacian_differential(const std::function<Spinor2(SpherePoint)>& f, SpherePoint p,
                               double h = 1e-4);

struct LaplacianIdentityReport {
  /// |l(l+1) - (K^2 - beta K)| on both blocks, evaluated spectrally.
  double spectral_deviation = 0.0;
  /// max |L^2 Omega - l(l+1) Omega| and |K v - (-kappa) v| over sample points (finite differences).
  double differential_deviation = 0.0;
};

LaplacianIdentityReport verify_laplacian_identity(const AngularMode& mode, int n_points = 50);

/// max over sample points of |alpha_r (a Om_k; b Om_-k) - (-b Om_k; -a Om_-k)|.
double alpha_r_action_deviation(const AngularMode& mode, Complex a, Complex b,
                                const std::vector<SpherePoint>& points);

/// Deterministic quasi-uniform points on S^2 avoiding the poles.
std::vector<SpherePoint> sample_points(int n);

}  // namespace dcres
