#include "dcres/spinor_harmonics.hpp"

#include <algorithm>
#include <boost/math/special_functions/spherical_harmonic.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "dcres/errors.hpp"

namespace dcres {

namespace {

constexpr Complex kI{0.0, 1.0};

Spinor4 stack(const Spinor2& up, const Spinor2& down) { return {up[0], up[1], down[0], down[1]}; }

Spinor4 scale(Complex s, Spinor4 v) { return s * v; }

}  // namespace

Vec3 SpherePoint::unit_vector() const {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

SpherePoint SpherePoint::from_direction(const Vec3& d) {
  const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
  if (!(n > 0.0)) throw ArgumentError("direction must be nonzero");
  return {std::acos(std::clamp(d[2] / n, -1.0, 1.0)), std::atan2(d[1], d[0])};
}

AngularMode::AngularMode(int kappa, int two_mu, bool) : kappa_(kappa), two_mu_(two_mu) {
  if (kappa == 0) throw ArgumentError("kappa must be a nonzero integer");
  if (two_mu % 2 == 0) throw ArgumentError("mu must be a half-integer");
  if (std::abs(two_mu) > 2 * std::abs(kappa) - 1) {
    throw ArgumentError("|mu| must not exceed |kappa| - 1/2 (kappa=" + std::to_string(kappa) +
                        ", 2mu=" + std::to_string(two_mu) + ")");
  }
}

AngularMode::AngularMode(int kappa, double mu)
    : AngularMode(kappa, static_cast<int>(std::lround(2.0 * mu)), true) {
  if (std::abs(2.0 * mu - two_mu_) > 1e-12) throw ArgumentError("mu must be a half-integer");
}

AngularMode AngularMode::from_twice_mu(int kappa, int two_mu) { return AngularMode(kappa, two_mu, true); }

std::vector<AngularMode> admissible_modes(int kappa) {
  std::vector<AngularMode> out;
  const int top = 2 * std::abs(kappa) - 1;
  for (int two_mu = -top; two_mu <= top; two_mu += 2) out.push_back(AngularMode::from_twice_mu(kappa, two_mu));
  return out;
}

Complex scalar_harmonic(int l, int m, SpherePoint p) {
  if (l < 0 || std::abs(m) > l) {
    throw ArgumentError("spherical harmonic requires |m| <= l, got l=" + std::to_string(l) +
                        ", m=" + std::to_string(m));
  }
  return boost::math::spherical_harmonic(static_cast<unsigned>(l), m, p.theta, p.phi);
}

Spinor2 omega(const AngularMode& mode, SpherePoint p) {
  const int kappa = mode.kappa();
  const int l = mode.l();
  const double mu = mode.mu();
  const double denom = 2.0 * kappa + 1.0;
  const double c_up = std::max(0.0, (kappa + 0.5 - mu) / denom);
  const double c_down = std::max(0.0, (kappa + 0.5 + mu) / denom);
  const int m_up = (mode.two_mu() - 1) / 2;
  const int m_down = (mode.two_mu() + 1) / 2;
  const double sign = kappa < 0 ? 1.0 : -1.0;  // sgn(-kappa)

  Spinor2 out{};
  if (c_up > 0.0 && std::abs(m_up) <= l) out[0] = sign * std::sqrt(c_up) * scalar_harmonic(l, m_up, p);
  if (c_down > 0.0 && std::abs(m_down) <= l) out[1] = std::sqrt(c_down) * scalar_harmonic(l, m_down, p);
  return out;
}

int alpha_r_eigenvalue(BlockSign sign) noexcept { return sign == BlockSign::kPlus ? -1 : 1; }

Spinor4 k_eigenvector(const AngularMode& mode, BlockSign sign, SpherePoint p) {
  Spinor2 down = omega(mode.partner(), p);
  if (sign == BlockSign::kMinus) {
    down[0] = -down[0];
    down[1] = -down[1];
  }
  return stack(omega(mode, p), down);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw ArgumentError("Gauss-Legendre order must be positive");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0, p1 = x;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged root.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = 0.0;
}

SphereQuadrature::SphereQuadrature(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi) {
  if (n_theta < 1 || n_phi < 1) throw ArgumentError("sphere quadrature orders must be positive");
  std::vector<double> x, w;
  gauss_legendre(n_theta, x, w);
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  points_.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  weights_.reserve(points_.capacity());
  for (int i = 0; i < n_theta; ++i) {
    const double theta = std::acos(x[i]);
    for (int j = 0; j < n_phi; ++j) {
      points_.push_back({theta, j * dphi});
      weights_.push_back(w[i] * dphi);
    }
  }
}

SphereQuadrature SphereQuadrature::for_degree(int max_degree) {
  if (max_degree < 0) throw ArgumentError("degree must be nonnegative");
  return SphereQuadrature(max_degree / 2 + 1, max_degree + 1);
}

SampledSpinorField SampledSpinorField::sample(const SphereQuadrature& grid,
                                              const std::function<Spinor4(SpherePoint)>& f) {
  SampledSpinorField out{grid, {}};
  out.values.reserve(grid.size());
  for (const auto& p : grid.points()) out.values.push_back(f(p));
  return out;
}

SampledSpinorField SampledSpinorField::zero(const SphereQuadrature& grid) {
  return {grid, std::vector<Spinor4>(grid.size())};
}

Complex SampledSpinorField::inner(const SampledSpinorField& other) const {
  Complex acc = 0.0;
  const auto& w = grid.weights();
  for (std::size_t i = 0; i < values.size(); ++i) acc += w[i] * values[i].inner(other.values[i]);
  return acc;
}

double SampledSpinorField::norm() const { return std::sqrt(std::max(0.0, inner(*this).real())); }

double SampledSpinorField::max_abs_difference(const SampledSpinorField& other) const {
  double m = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t c = 0; c < 4; ++c) m = std::max(m, std::abs(values[i][c] - other.values[i][c]));
  }
  return m;
}

KDecomposition decompose_k_basis(const SampledSpinorField& field, int kappa_max) {
  if (kappa_max < 1) throw ArgumentError("kappa_max must be >= 1");
  KDecomposition out;
  SampledSpinorField recon = SampledSpinorField::zero(field.grid);
  for (int kappa = -kappa_max; kappa <= kappa_max; ++kappa) {
    if (kappa == 0) continue;
    for (const auto& mode : admissible_modes(kappa)) {
      for (bool upper : {true, false}) {
        auto basis = SampledSpinorField::sample(field.grid, [&](SpherePoint p) {
          const Spinor2 om = omega(mode, p);
          return upper ? stack(om, {}) : stack({}, om);
        });
        const Complex c = basis.inner(field);
        // (0; Omega_k) is the lower half of the -(-k) eigenspace, so K acts by +k there.
        out.terms.push_back({mode, upper, c, upper ? -double(kappa) : double(kappa)});
        for (std::size_t i = 0; i < recon.values.size(); ++i) recon.values[i] += c * basis.values[i];
      }
    }
  }
  SampledSpinorField diff = field;
  for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= recon.values[i];
  const double n = field.norm();
  out.relative_residual = n > 0.0 ? diff.norm() / n : 0.0;
  return out;
}

SampledSpinorField apply_k_operator(const SampledSpinorField& field, int kappa_max, double tolerance) {
  const KDecomposition dec = decompose_k_basis(field, kappa_max);
  if (dec.relative_residual > tolerance) {
    throw DecompositionError("field is not in the span of modes with |kappa| <= " +
                                 std::to_string(kappa_max),
                             dec.relative_residual);
  }
  SampledSpinorField out = SampledSpinorField::zero(field.grid);
  const auto& pts = field.grid.points();
  for (const auto& term : dec.terms) {
    if (term.coefficient == Complex{}) continue;
    const Complex s = term.k_eigenvalue * term.coefficient;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Spinor2 om = omega(term.mode, pts[i]);
      out.values[i] += scale(s, term.upper ? stack(om, {}) : stack({}, om));
    }
  }
  return out;
}

namespace {

template <class V, class F>
void angular_derivatives(const F& f, SpherePoint p, double h, V& d_theta, V& d_phi, V& d_theta2,
                         V& d_phi2, V& center) {
  center = f(p);
  const V tp = f({p.theta + h, p.phi});
  const V tm = f({p.theta - h, p.phi});
  const V pp = f({p.theta, p.phi + h});
  const V pm = f({p.theta, p.phi - h});
  for (std::size_t c = 0; c < center.size(); ++c) {
    d_theta[c] = (tp[c] - tm[c]) / (2.0 * h);
    d_phi[c] = (pp[c] - pm[c]) / (2.0 * h);
    d_theta2[c] = (tp[c] - 2.0 * center[c] + tm[c]) / (h * h);
    d_phi2[c] = (pp[c] - 2.0 * center[c] + pm[c]) / (h * h);
  }
}

}  // namespace

Spinor4 apply_k_differential(const std::function<Spinor4(SpherePoint)>& f, SpherePoint p, double h) {
  auto fa = [&](SpherePoint q) {
    const Spinor4 v = f(q);
    return std::array<Complex, 4>{v[0], v[1], v[2], v[3]};
  };
  std::array<Complex, 4> dt{}, dp{}, dt2{}, dp2{}, c{};
  angular_derivatives(fa, p, h, dt, dp, dt2, dp2, c);
  const double st = std::sin(p.theta), ct = std::cos(p.theta);
  const double sp = std::sin(p.phi), cp = std::cos(p.phi);
  const double cot = ct / st;

  // L = r x (-i grad) in spherical coordinates.
  Spinor4 lx, ly, lz, psi;
  for (std::size_t k = 0; k < 4; ++k) {
    lx[k] = kI * (sp * dt[k] + cot * cp * dp[k]);
    ly[k] = -kI * (cp * dt[k] - cot * sp * dp[k]);
    lz[k] = -kI * dp[k];
    psi[k] = c[k];
  }
  Spinor4 sl = spin_matrix(1) * lx + spin_matrix(2) * ly + spin_matrix(3) * lz;
  return beta() * (psi + sl);
}

Spinor2 laplacian_differential(const std::function<Spinor2(SpherePoint)>& f, SpherePoint p, double h) {
  Spinor2 dt{}, dp{}, dt2{}, dp2{}, c{};
  angular_derivatives(f, p, h, dt, dp, dt2, dp2, c);
  const double st = std::sin(p.theta);
  const double cot = std::cos(p.theta) / st;
  Spinor2 out{};
  for (std::size_t k = 0; k < 2; ++k) out[k] = -(dt2[k] + cot * dt[k] + dp2[k] / (st * st));
  return out;
}

std::vector<SpherePoint> sample_points(int n) {
  std::vector<SpherePoint> pts;
  pts.reserve(n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    pts.push_back({std::acos(z), std::remainder(golden * i, 2.0 * std::numbers::pi)});
  }
  return pts;
}

LaplacianIdentityReport verify_laplacian_identity(const AngularMode& mode, int n_points) {
  LaplacianIdentityReport rep;
  const int kappa = mode.kappa();
  // Upper block: K = -kappa, beta = +1. Lower block holds Omega_{-kappa}: K = -kappa, beta = -1.
  const double k = -kappa;
  const int l_up = mode.l();
  const int l_down = mode.partner().l();
  const double upper = k * k - (+1.0) * k;
  const double lower = k * k - (-1.0) * k;
  rep.spectral_deviation = std::max(std::abs(upper - l_up * (l_up + 1.0)), std::abs(lower - l_down * (l_down + 1.0)));

  const AngularMode partner = mode.partner();
  for (const auto& p : sample_points(n_points)) {
    for (const auto* md : {&mode, &partner}) {
      const int l = md->l();
      const Spinor2 lap = laplacian_differential([md](SpherePoint q) { return omega(*md, q); }, p);
      const Spinor2 om = omega(*md, p);
      for (std::size_t c = 0; c < 2; ++c) {
        rep.differential_deviation = std::max(rep.differential_deviation, std::abs(lap[c] - l * (l + 1.0) * om[c]));
      }
    }
    for (BlockSign s : {BlockSign::kPlus, BlockSign::kMinus}) {
      const Spinor4 kv = apply_k_differential([&](SpherePoint q) { return k_eigenvector(mode, s, q); }, p);
      const Spinor4 v = k_eigenvector(mode, s, p);
      for (std::size_t c = 0; c < 4; ++c) {
        rep.differential_deviation = std::max(rep.differential_deviation, std::abs(kv[c] - k * v[c]));
      }
    }
  }
  return rep;
}

double alpha_r_action_deviation(const AngularMode& mode, Complex a, Complex b,
                                const std::vector<SpherePoint>& points) {
  double dev = 0.0;
  const AngularMode partner = mode.partner();
  for (const auto& p : points) {
    const Spinor2 up = omega(mode, p);
    const Spinor2 down = omega(partner, p);
    const Spinor4 v{a * up[0], a * up[1], b * down[0], b * down[1]};
    const Spinor4 expect{-b * up[0], -b * up[1], -a * down[0], -a * down[1]};
    const Spinor4 got = alpha_r(p.unit_vector()) * v;
    for (std::size_t c = 0; c < 4; ++c) dev = std::max(dev, std::abs(got[c] - expect[c]));
  }
  return dev;
}

}  // namespace dcres
