#include "dcres/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dcres/errors.hpp"

namespace dcres {

namespace {

constexpr Complex kI{0.0, 1.0};

double bump_profile(double x) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

// Precomputed 2x2 propagator of the coupling over half a step, per cell:
// (U+, U-) -> (a U+ + b U-, c U+ + d U-).
struct HalfStep {
  std::vector<Complex> a, b, c, d;
};

HalfStep half_step(const RadialGrid& g, double Z, int kappa, double dt, Scheme scheme) {
  HalfStep h;
  const auto n = static_cast<std::size_t>(g.n);
  h.a.resize(n);
  h.b.resize(n);
  h.c.resize(n);
  h.d.resize(n);
  for (int j = 0; j < g.n; ++j) {
    const double tau = dt / (2.0 * g.r(j));
    Complex a, b, c, d;
    if (scheme == Scheme::kSplitExact) {
      // exp(tau M), M = [[-iZ, -k], [k, -iZ]]
      const Complex ph = std::exp(-kI * (Z * tau));
      const double cs = std::cos(kappa * tau), sn = std::sin(kappa * tau);
      a = ph * cs;
      b = -ph * sn;
      c = ph * sn;
      d = ph * cs;
    } else {
      // (I - tau M/2)^{-1} (I + tau M/2)
      const Complex p = 1.0 - kI * (Z * tau / 2.0);  // I + tau M/2 diagonal
      const Complex m = 1.0 + kI * (Z * tau / 2.0);  // I - tau M/2 diagonal
      const double q = kappa * tau / 2.0;
      // I + tau M/2 = [[p, -q], [q, p]], I - tau M/2 = [[m, q], [-q, m]]
      const Complex det = m * m + q * q;
      // inverse of [[m, q], [-q, m]] = [[m, -q], [q, m]] / det
      a = (m * p - q * q) / det;
      b = (-m * q - q * p) / det;
      c = (q * p + m * q) / det;
      d = (-q * q + m * p) / det;
    }
    const auto k = static_cast<std::size_t>(j);
    h.a[k] = a;
    h.b[k] = b;
    h.c[k] = c;
    h.d[k] = d;
  }
  return h;
}

void apply_half(const HalfStep& h, std::vector<Complex>& up, std::vector<Complex>& um) {
  for (std::size_t j = 0; j < up.size(); ++j) {
    const Complex p = up[j], m = um[j];
    up[j] = h.a[j] * p + h.b[j] * m;
    um[j] = h.c[j] * p + h.d[j] * m;
  }
}

void check_cfl(const RadialGrid& g, double dt) {
  if (!(std::abs(std::abs(dt) - g.dr) <= 1e-12 * g.dr)) {
    throw CflError("time step " + std::to_string(dt) + " incompatible with dr = " + std::to_string(g.dr) +
                   "; the characteristic scheme needs |dt| = dr");
  }
}

void to_scaled(const RadialField& f, std::vector<Complex>& up, std::vector<Complex>& um) {
  up.resize(f.u_plus.size());
  um.resize(f.u_minus.size());
  for (int j = 0; j < f.grid.n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    up[k] = f.grid.r(j) * f.u_plus[k];
    um[k] = f.grid.r(j) * f.u_minus[k];
  }
}

void from_scaled(RadialField& f, const std::vector<Complex>& up, const std::vector<Complex>& um) {
  for (int j = 0; j < f.grid.n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    f.u_plus[k] = up[k] / f.grid.r(j);
    f.u_minus[k] = um[k] / f.grid.r(j);
  }
}

// Transport along characteristics plus the origin condition.
void shift(std::vector<Complex>& up, std::vector<Complex>& um, Complex refl, bool forward) {
  const std::size_t n = up.size();
  if (forward) {
    const Complex in = um[0];
    std::move_backward(up.begin(), up.end() - 1, up.end());
    up[0] = refl * in;
    std::move(um.begin() + 1, um.end(), um.begin());
    um[n - 1] = 0.0;
  } else {
    const Complex out = up[0];
    std::move(up.begin() + 1, up.end(), up.begin());
    up[n - 1] = 0.0;
    std::move_backward(um.begin(), um.end() - 1, um.end());
    um[0] = std::conj(refl) * out;
  }
}

// Stepper with the half-step propagators cached for one direction.
class Stepper {
 public:
  Stepper(const RadialGrid& g, const ChargeConfig& cfg, int kappa, double dt, Scheme scheme)
      : half_(half_step(g, cfg.Z(), kappa, dt, scheme)), refl_(origin_reflection(cfg, kappa)), forward_(dt > 0) {}

  void operator()(std::vector<Complex>& up, std::vector<Complex>& um) const {
    apply_half(half_, up, um);
    shift(up, um, refl_, forward_);
    apply_half(half_, up, um);
  }

 private:
  HalfStep half_;
  Complex refl_;
  bool forward_;
};

double scaled_norm2(const std::vector<Complex>& up, const std::vector<Complex>& um, double dr) {
  double s = 0.0;
  for (std::size_t j = 0; j < up.size(); ++j) s += std::norm(up[j]) + std::norm(um[j]);
  return s * dr;
}

int outer_nonzero(const std::vector<Complex>& up, const std::vector<Complex>& um) {
  for (auto j = static_cast<int>(up.size()) - 1; j >= 0; --j) {
    const auto k = static_cast<std::size_t>(j);
    if (up[k] != Complex{} || um[k] != Complex{}) return j;
  }
  return -1;
}

// Fourth-order first derivative of f on a uniform grid of spacing h.
std::vector<Complex> derivative4(const std::vector<Complex>& f, double h) {
  const auto n = static_cast<int>(f.size());
  std::vector<Complex> d(f.size());
  if (n < 5) throw ArgumentError("radial grid too small for the difference stencil (need 5 cells)");
  auto at = [&](int j) { return f[static_cast<std::size_t>(j)]; };
  for (int j = 0; j < n; ++j) {
    Complex v;
    if (j >= 2 && j <= n - 3) {
      v = (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) / 12.0;
    } else if (j < 2) {
      // one-sided: shift the 5-point stencil to start at 0
      static constexpr double w0[5] = {-25.0 / 12, 4.0, -3.0, 4.0 / 3, -1.0 / 4};
      static constexpr double w1[5] = {-1.0 / 4, -5.0 / 6, 3.0 / 2, -1.0 / 2, 1.0 / 12};
      const double* w = j == 0 ? w0 : w1;
      for (int k = 0; k < 5; ++k) v += w[k] * at(k);
    } else {
      static constexpr double w0[5] = {25.0 / 12, -4.0, 3.0, -4.0 / 3, 1.0 / 4};
      static constexpr double w1[5] = {1.0 / 4, 5.0 / 6, -3.0 / 2, 1.0 / 2, -1.0 / 12};
      const double* w = j == n - 1 ? w0 : w1;
      for (int k = 0; k < 5; ++k) v += w[k] * at(n - 1 - k);
    }
    d[static_cast<std::size_t>(j)] = v / h;
  }
  return d;
}

// Neville extrapolation of (h_i, y_i) to h = 0 using the first m points.
Complex neville_at_zero(const std::vector<double>& h, const std::vector<Complex>& y, std::size_t m) {
  std::vector<Complex> p(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(m));
  for (std::size_t k = 1; k < m; ++k) {
    for (std::size_t i = 0; i + k < m; ++i) {
      p[i] = (h[i + k] * p[i] - h[i] * p[i + 1]) / (h[i + k] - h[i]);
    }
  }
  return p[0];
}

}  // namespace

int RadialGrid::cell(double radius) const {
  const auto j = static_cast<int>(std::floor(radius / dr + 1e-9));
  return std::clamp(j, 0, n - 1);
}

RadialGrid RadialGrid::covering(double radius, double dr) {
  if (!(dr > 0.0) || !std::isfinite(dr)) throw ArgumentError("grid spacing must be positive and finite");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ArgumentError("grid radius must be positive and finite");
  RadialGrid g;
  g.dr = dr;
  g.n = std::max(5, static_cast<int>(std::ceil(radius / dr + 0.5)));
  return g;
}

RadialField RadialField::zero(const AngularMode& mode, const RadialGrid& grid) {
  if (grid.n < 1 || !(grid.dr > 0.0)) throw ArgumentError("empty radial grid");
  RadialField f;
  f.mode = mode;
  f.grid = grid;
  f.u_plus.assign(static_cast<std::size_t>(grid.n), Complex{});
  f.u_minus.assign(static_cast<std::size_t>(grid.n), Complex{});
  return f;
}

RadialField RadialField::bump(const AngularMode& mode, const RadialGrid& grid, double center, double half_width,
                              Complex amp_plus, Complex amp_minus) {
  if (!(half_width > 0.0)) throw ArgumentError("bump half-width must be positive");
  if (center - half_width < 0.0) throw ArgumentError("bump support must lie in r >= 0");
  RadialField f = zero(mode, grid);
  for (int j = 0; j < grid.n; ++j) {
    const double r = grid.r(j);
    const double phi = bump_profile((r - center) / half_width) / r;
    f.u_plus[static_cast<std::size_t>(j)] = amp_plus * phi;
    f.u_minus[static_cast<std::size_t>(j)] = amp_minus * phi;
  }
  return f;
}

double RadialField::norm2() const {
  double s = 0.0;
  for (int j = 0; j < grid.n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    const double r = grid.r(j);
    s += (std::norm(u_plus[k]) + std::norm(u_minus[k])) * r * r;
  }
  return s * grid.dr;
}

double RadialField::support_radius() const {
  const int j = outer_nonzero(u_plus, u_minus);
  return j < 0 ? 0.0 : grid.r(j);
}

double RadialField::support_inner() const {
  for (int j = 0; j < grid.n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    if (u_plus[k] != Complex{} || u_minus[k] != Complex{}) return grid.r(j);
  }
  return 0.0;
}

const char* scheme_name(Scheme s) noexcept { return s == Scheme::kCayley ? "cayley" : "split-exact"; }

Scheme parse_scheme(const std::string& name) {
  if (name == "split-exact") return Scheme::kSplitExact;
  if (name == "cayley") return Scheme::kCayley;
  throw ArgumentError("unknown scheme '" + name + "' (expected split-exact or cayley)");
}

Complex origin_reflection(const ChargeConfig& cfg, int kappa) {
  return -static_cast<double>(kappa) / Complex(cfg.nu(kappa), cfg.Z());
}

void radial_time_derivative(const ChargeConfig& cfg, int kappa, double r, Complex u_plus, Complex u_minus,
                            Complex du_plus, Complex du_minus, Complex& dt_plus, Complex& dt_minus) {
  if (!(r > 0.0)) throw ArgumentError("radius must be positive");
  const double Z = cfg.Z();
  const double k = kappa;
  dt_plus = -(du_plus + u_plus / r) - (k / r) * u_minus - kI * (Z / r) * u_plus;
  dt_minus = (du_minus + u_minus / r) + (k / r) * u_plus - kI * (Z / r) * u_minus;
}

RadialField apply_radial_hamiltonian(const ChargeConfig& cfg, const RadialField& field) {
  const auto dp = derivative4(field.u_plus, field.grid.dr);
  const auto dm = derivative4(field.u_minus, field.grid.dr);
  RadialField out = RadialField::zero(field.mode, field.grid);
  out.t = field.t;
  const int kappa = field.mode.kappa();
  for (int j = 0; j < field.grid.n; ++j) {
    const auto k = static_cast<std::size_t>(j);
    radial_time_derivative(cfg, kappa, field.grid.r(j), field.u_plus[k], field.u_minus[k], dp[k], dm[k],
                           out.u_plus[k], out.u_minus[k]);
  }
  return out;
}

void step(RadialField& field, const ChargeConfig& cfg, double dt, Scheme scheme) {
  check_cfl(field.grid, dt);
  const Stepper st(field.grid, cfg, field.mode.kappa(), dt, scheme);
  std::vector<Complex> up, um;
  to_scaled(field, up, um);
  st(up, um);
  from_scaled(field, up, um);
  field.t += dt;
}

Trajectory forward_solve(const EvolutionConfig& cfg, const RadialField& initial) {
  const RadialGrid& g = initial.grid;
  check_cfl(g, cfg.dt);
  if (!(cfg.dt > 0.0)) throw CflError("forward_solve needs dt > 0");
  if (!(cfg.t_final >= 0.0)) throw ArgumentError("t_final must be nonnegative");
  if (cfg.snapshot_every < 0) throw ArgumentError("snapshot_every must be nonnegative");
  const int steps = static_cast<int>(std::llround(cfg.t_final / cfg.dt));

  Trajectory tr;
  tr.kappa = initial.mode.kappa();
  tr.Z = cfg.charge.Z();
  tr.grid = g;
  tr.dt = cfg.dt;
  tr.t0 = initial.t;
  tr.scheme = cfg.scheme;
  tr.steps = steps;
  tr.initial_support = initial.support_radius();
  tr.initial_inner = initial.support_inner();

  // Outgoing data moves one cell per step; it must never reach the last cell.
  const double needed = tr.initial_support + steps * cfg.dt + g.dr;
  if (needed >= g.r_max()) {
    const auto cells = static_cast<long>(std::ceil(needed / g.dr)) + 2;
    throw DomainSizeError("support can reach r = " + std::to_string(needed) + " but the grid ends at " +
                          std::to_string(g.r_max()) + "; use at least " + std::to_string(cells) + " cells");
  }

  for (double R : cfg.record_radii) {
    if (!(R > 0.0) || R > g.r_max()) throw ArgumentError("record radius " + std::to_string(R) + " outside the grid");
    const int j = g.cell(R);
    tr.record_cells.push_back(j);
    tr.record_radii.push_back(g.r(j));
  }
  tr.record_plus.assign(tr.record_cells.size(), {});
  tr.record_minus.assign(tr.record_cells.size(), {});
  for (auto& v : tr.record_plus) v.reserve(static_cast<std::size_t>(steps));
  for (auto& v : tr.record_minus) v.reserve(static_cast<std::size_t>(steps));

  const Stepper st(g, cfg.charge, tr.kappa, cfg.dt, cfg.scheme);
  std::vector<Complex> up, um;
  to_scaled(initial, up, um);
  tr.norm2_history.reserve(static_cast<std::size_t>(steps) + 1);
  tr.support_history.reserve(static_cast<std::size_t>(steps) + 1);
  tr.norm2_history.push_back(scaled_norm2(up, um, g.dr));
  tr.support_history.push_back(tr.initial_support);
  tr.snapshots.push_back(initial);

  RadialField snap = initial;
  for (int n = 0; n < steps; ++n) {
    st(up, um);
    for (std::size_t i = 0; i < tr.record_cells.size(); ++i) {
      const auto c = static_cast<std::size_t>(tr.record_cells[i]);
      tr.record_plus[i].push_back(up[c]);
      tr.record_minus[i].push_back(um[c]);
    }
    tr.norm2_history.push_back(scaled_norm2(up, um, g.dr));
    const int outer = outer_nonzero(up, um);
    tr.support_history.push_back(outer < 0 ? 0.0 : g.r(outer));
    if (cfg.snapshot_every > 0 && (n + 1) % cfg.snapshot_every == 0 && n + 1 < steps) {
      from_scaled(snap, up, um);
      snap.t = initial.t + (n + 1) * cfg.dt;
      tr.snapshots.push_back(snap);
    }
  }
  tr.final_field = initial;
  from_scaled(tr.final_field, up, um);
  tr.final_field.t = initial.t + steps * cfg.dt;
  if (steps > 0) tr.snapshots.push_back(tr.final_field);
  return tr;
}

std::vector<double> lattice_s_values(const Trajectory& traj, double s_lo, double s_hi, int stride) {
  if (stride < 1) throw ArgumentError("stride must be positive");
  const double dr = traj.grid.dr;
  std::vector<double> out;
  const auto m0 = static_cast<long>(std::ceil((s_lo - traj.t0) / dr - 0.5 - 1e-9));
  for (long m = m0;; m += stride) {
    const double s = traj.t0 + (static_cast<double>(m) + 0.5) * dr;
    if (s > s_hi + 1e-9 * dr) break;
    out.push_back(s);
  }
  return out;
}

std::vector<RadiationSample> extract_radiation_field(const Trajectory& traj, const std::vector<double>& s_values,
                                                     const ExtractionOptions& opt) {
  if (opt.min_radii < 2) throw ArgumentError("extraction needs min_radii >= 2");
  if (static_cast<int>(traj.record_cells.size()) < opt.min_radii) {
    throw AccuracyError("only " + std::to_string(traj.record_cells.size()) + " record radii; extraction needs " +
                            std::to_string(opt.min_radii),
                        1.0);
  }
  const double dt = traj.dt;
  const double Z = traj.Z;
  std::vector<RadiationSample> out;
  out.reserve(s_values.size());
  for (double s : s_values) {
    const auto m = static_cast<long>(std::llround((s - traj.t0) / dt - 0.5));
    std::vector<double> h;
    std::vector<Complex> yp, ym;
    for (std::size_t i = 0; i < traj.record_cells.size(); ++i) {
      const long n = m + traj.record_cells[i];
      if (n < 0 || n >= static_cast<long>(traj.record_plus[i].size())) continue;
      const double t = traj.t0 + static_cast<double>(n + 1) * dt;
      const double r = traj.record_radii[i];
      const double rho = 0.5 * (t + r);
      // rho^{1 + iZ} u = rho^{iZ} (rho / r) U
      const Complex f = std::exp(kI * (Z * std::log(rho))) * (rho / r);
      h.push_back(1.0 / (t + r));
      yp.push_back(f * traj.record_plus[i][static_cast<std::size_t>(n)]);
      ym.push_back(f * traj.record_minus[i][static_cast<std::size_t>(n)]);
    }
    if (static_cast<int>(h.size()) < opt.min_radii) {
      throw AccuracyError("s = " + std::to_string(s) + " reached by " + std::to_string(h.size()) +
                              " record radii; extraction needs " + std::to_string(opt.min_radii) +
                              " (increase t_final)",
                          1.0);
    }
    RadiationSample smp;
    smp.s = traj.t0 + (static_cast<double>(m) + 0.5) * dt;
    smp.radii_used = static_cast<int>(h.size());
    smp.plus = neville_at_zero(h, yp, h.size());
    smp.minus = neville_at_zero(h, ym, h.size());
    const Complex lower = neville_at_zero(h, yp, h.size() - 1);
    const double mag = std::abs(smp.plus);
    smp.convergence = mag > 0.0 ? std::abs(smp.plus - lower) / mag : 0.0;
    out.push_back(smp);
  }
  return out;
}

double radiation_norm2(const std::vector<RadiationSample>& samples, double ds) {
  double s = 0.0;
  for (const auto& x : samples) s += std::norm(x.plus);
  return s * ds;
}

}  // namespace dcres
