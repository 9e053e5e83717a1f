#include "dcres_tools/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <numbers>
#include <random>

#include "dcres/analysis.hpp"
#include "dcres/boundary_ode.hpp"
#include "dcres/clifford.hpp"
#include "dcres/errors.hpp"
#include "dcres/evolution.hpp"
#include "dcres/specfun.hpp"
#include "dcres/spinor_harmonics.hpp"

namespace dcres::tools {

namespace {

using Suite = std::vector<Check>;

void add(Suite& s, const std::string& suite, const std::string& name, double dev, double tol) {
  s.push_back({suite, name, dev, tol, std::isfinite(dev) && dev <= tol});
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Suite clifford_suite() {
  Suite s;
  const std::string n = "clifford";
  add(s, n, "gamma_anticommutation", check_anticommutation().max_deviation, 1e-12);

  const Matrix4c I = Matrix4c::identity();
  const Matrix4c b = beta();
  double d_beta = (b * b - I).max_abs();
  double d_alpha = 0.0, d_mixed = 0.0, d_herm = (b.adjoint() - b).max_abs();
  for (int j = 1; j <= 3; ++j) {
    d_mixed = std::max(d_mixed, anticommutator(alpha(j), b).max_abs());
    d_mixed = std::max(d_mixed, (dirac_matrix(j) - b * alpha(j)).max_abs());
    d_herm = std::max(d_herm, (alpha(j).adjoint() - alpha(j)).max_abs());
    for (int k = 1; k <= 3; ++k) {
      Matrix4c t = anticommutator(alpha(j), alpha(k));
      if (j == k) t -= 2.0 * I;
      d_alpha = std::max(d_alpha, t.max_abs());
    }
  }
  add(s, n, "beta_squared", d_beta, 1e-12);
  add(s, n, "alpha_anticommutation", d_alpha, 1e-12);
  add(s, n, "alpha_beta_relations", d_mixed, 1e-12);
  add(s, n, "hermiticity", d_herm, 1e-12);

  const auto pts = sample_points(50);
  double d_ar = 0.0;
  for (const auto& p : pts) {
    const Matrix4c a = alpha_r(p.unit_vector());
    d_ar = std::max(d_ar, (a * a - I).max_abs());
  }
  add(s, n, "alpha_r_squared", d_ar, 1e-12);

  double d_act = 0.0;
  for (int kappa : {1, -1, 2, -2, 3}) {
    for (const auto& m : admissible_modes(kappa)) {
      d_act = std::max(d_act, alpha_r_action_deviation(m, {0.7, -0.2}, {-0.4, 1.1}, pts));
    }
  }
  add(s, n, "alpha_r_action", d_act, 1e-10);
  return s;
}

Suite harmonics_suite() {
  Suite s;
  const std::string n = "harmonics";
  double spectral = 0.0, diff = 0.0;
  for (int kappa : {1, -1, 2, -2, 3, -3}) {
    for (const auto& m : admissible_modes(kappa)) {
      const auto r = verify_laplacian_identity(m, 20);
      spectral = std::max(spectral, r.spectral_deviation);
      diff = std::max(diff, r.differential_deviation);
    }
  }
  add(s, n, "laplacian_spectral", spectral, 1e-10);
  add(s, n, "laplacian_differential", diff, 1e-6);

  // Orthonormality of Omega over an exact quadrature.
  const auto quad = SphereQuadrature::for_degree(12);
  std::vector<AngularMode> modes;
  for (int kappa : {1, -1, 2, -2, 3}) {
    for (const auto& m : admissible_modes(kappa)) modes.push_back(m);
  }
  double ortho = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (std::size_t j = i; j < modes.size(); ++j) {
      const Complex ip = quad.integrate([&](SpherePoint p) {
        const Spinor2 a = omega(modes[i], p), b = omega(modes[j], p);
        return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
      });
      ortho = std::max(ortho, std::abs(ip - (i == j ? 1.0 : 0.0)));
    }
  }
  add(s, n, "omega_orthonormality", ortho, 1e-12);

  // K on a superposition: spectral application against the known eigenvalues,
  // and against finite differences at a few points.
  const std::vector<std::pair<AngularMode, Complex>> combo = {
      {AngularMode(1, 0.5), {1.0, 0.2}}, {AngularMode(-2, -1.5), {-0.3, 0.8}}, {AngularMode(2, 0.5), {0.5, -0.5}}};
  auto field_fn = [&](SpherePoint p) {
    Spinor4 v;
    for (const auto& [m, c] : combo) v += c * k_eigenvector(m, BlockSign::kMinus, p);
    return v;
  };
  auto expected_fn = [&](SpherePoint p) {
    Spinor4 v;
    for (const auto& [m, c] : combo) v += (-static_cast<double>(m.kappa()) * c) * k_eigenvector(m, BlockSign::kMinus, p);
    return v;
  };
  const auto kq = SphereQuadrature::for_degree(10);
  const auto field = SampledSpinorField::sample(kq, field_fn);
  const auto kf = apply_k_operator(field, 3);
  const auto expected = SampledSpinorField::sample(kq, expected_fn);
  add(s, n, "k_operator_spectral", kf.max_abs_difference(expected), 1e-10);
  double kd = 0.0;
  for (const auto& p : sample_points(20)) {
    const Spinor4 a = apply_k_differential(field_fn, p), b = expected_fn(p);
    kd = std::max(kd, std::sqrt((a - b).norm2()));
  }
  add(s, n, "k_operator_differential", kd, 1e-6);
  return s;
}

Suite specfun_suite() {
  Suite s;
  const std::string n = "specfun";
  const double pi = std::numbers::pi;
  double rec = 0.0, refl = 0.0;
  for (Complex z : {Complex(0.3, 0.4), Complex(2.5, -1.7), Complex(-1.3, 0.6), Complex(7.1, 3.3), Complex(0.5, 12.0)}) {
    rec = std::max(rec, rel(gamma_c(z + 1.0), z * gamma_c(z)));
    refl = std::max(refl, rel(gamma_c(z) * gamma_c(1.0 - z), pi / std::sin(pi * z)));
  }
  add(s, n, "gamma_recurrence", rec, 1e-12);
  add(s, n, "gamma_reflection", refl, 1e-12);
  double special = rel(gamma_c(0.5), std::sqrt(pi));
  double fact = 1.0;
  for (int k = 1; k <= 10; ++k) {
    special = std::max(special, rel(gamma_c(static_cast<double>(k)), fact));
    fact *= k;
  }
  add(s, n, "gamma_special_values", special, 1e-14);

  double closed = 0.0;
  for (double x : {0.1, 0.3, 0.6, 0.85, 0.95}) {
    closed = std::max(closed, rel(hyp2f1({1.0, 1.0, 2.0}, x), -std::log1p(-x) / x));
    const Complex a(0.7, -1.3), b(1.2, 0.4);
    closed = std::max(closed, rel(hyp2f1({a, b, b}, x), std::pow(1.0 - x, -a)));
    const double y = std::sqrt(x);
    closed = std::max(closed, rel(hyp2f1({0.5, 1.0, 1.5}, x), std::atanh(y) / y));
  }
  add(s, n, "hyp2f1_closed_forms", closed, 1e-9);

  // Gauss summation F(a, b; c; 1) = Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)),
  // approached at 1 - x = 1e-10 where the O(1 - x) correction is below tolerance.
  double gauss = 0.0;
  for (const HypergeomParams& p : {HypergeomParams{{0.3, 0.2}, {0.4, -0.5}, {3.1, 0.1}},
                                   HypergeomParams{{-0.6, 1.0}, {0.2, 0.0}, {2.5, 0.7}},
                                   HypergeomParams{{1.0, 0.0}, {0.5, 0.3}, {4.0, -0.2}}}) {
    const Complex g = gamma_ratio({p.c, p.c - p.a - p.b}, {p.c - p.a, p.c - p.b});
    gauss = std::max(gauss, rel(hyp2f1(p, 1.0 - 1e-10), g));
  }
  add(s, n, "gauss_summation", gauss, 1e-8);

  double routes = 0.0;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const HypergeomParams p{{u(rng), u(rng)}, {u(rng), u(rng)}, {2.5 + u(rng), u(rng)}};
    routes = std::max(routes, rel(hyp2f1_series(p, 0.5).value, hyp2f1_connection(p, 0.5).value));
  }
  add(s, n, "series_connection_agreement", routes, 1e-10);
  return s;
}

Suite wronskian_suite() {
  Suite s;
  std::mt19937_64 rng(7301);
  std::uniform_real_distribution<double> ux(0.05, 0.95), uz(-0.45, 0.45), us(-3.0, 3.0);
  const int kappas[4] = {1, -1, 2, -2};
  double worst = 0.0;
  int draws = 0;
  while (draws < 20) {
    const double x = ux(rng), Z = uz(rng);
    const int kappa = kappas[rng() % 4];
    const Complex sigma(us(rng), us(rng));
    const ChargeConfig cfg(Z);
    if (distance_to_poles(cfg, kappa, sigma) < 0.05) continue;
    // Gamma(2 - i sigma) in the closed form has poles at sigma = -i(n + 2).
    if (std::abs(sigma.real()) < 1e-3 && std::abs(sigma.imag() - std::round(sigma.imag())) < 1e-3) continue;
    const auto k = make_kernels(cfg, kappa, sigma);
    worst = std::max(worst, rel(k.f.wronskian_numeric(x), k.f.wronskian_closed_form(x)));
    worst = std::max(worst, rel(k.g.wronskian_numeric(x), k.g.wronskian_closed_form(x)));
    ++draws;
  }
  add(s, "wronskian", "closed_form_20_draws", worst, 1e-8);
  return s;
}

Suite residual_suite(int threads) {
  struct Draw {
    double Z;
    int kappa;
    Complex sigma;
  };
  std::mt19937_64 rng(99173);
  std::uniform_real_distribution<double> uz(-0.45, 0.45), ure(-2.0, 2.0), uim(-2.5, 2.0);
  const int kappas[4] = {1, -1, 2, -2};
  std::vector<Draw> draws;
  while (draws.size() < 10) {
    Draw d{uz(rng), kappas[rng() % 4], {ure(rng), uim(rng)}};
    if (distance_to_poles(ChargeConfig(d.Z), d.kappa, d.sigma) < 0.1) continue;
    draws.push_back(d);
  }
  const auto src = ModeSource::bump(0.5, 0.25, 1.0, {0.3, -0.7});
  const auto x = uniform_nodes(0.02, 0.98, 961);
  auto work = [&](const Draw& d) {
    const ChargeConfig cfg(d.Z);
    const auto sol = solve_inhomogeneous(cfg, d.kappa, d.sigma, src, x);
    return std::pair{boundary_residual(cfg, d.kappa, d.sigma, src, sol), sol.route_discrepancy};
  };
  std::vector<std::pair<double, double>> res(draws.size());
  const std::size_t nt = static_cast<std::size_t>(std::max(1, threads));
  for (std::size_t b = 0; b < draws.size(); b += nt) {
    std::vector<std::future<std::pair<double, double>>> fut;
    for (std::size_t i = b; i < std::min(draws.size(), b + nt); ++i)
      fut.push_back(std::async(nt > 1 ? std::launch::async : std::launch::deferred, work, draws[i]));
    for (std::size_t i = 0; i < fut.size(); ++i) res[b + i] = fut[i].get();
  }
  double r = 0.0, route = 0.0;
  for (const auto& [a, b] : res) {
    r = std::max(r, a);
    route = std::max(route, b);
  }
  Suite s;
  add(s, "residual", "first_order_system_10_sigma", r, 1e-6);
  add(s, "residual", "elimination_route_agreement", route, 1e-6);
  return s;
}

Suite conservation_suite() {
  Suite s;
  const std::string n = "conservation";
  const double dr = 0.05, T = 200.0;
  const auto grid = RadialGrid::covering(T + 12.0, dr);
  const AngularMode mode(1, 0.5);
  const auto f0 = RadialField::bump(mode, grid, 0.75, 0.5, 1.0, -1.0);
  for (Scheme sch : {Scheme::kSplitExact, Scheme::kCayley}) {
    EvolutionConfig cfg;
    cfg.charge = ChargeConfig(0.3);
    cfg.dt = dr;
    cfg.t_final = T;
    cfg.scheme = sch;
    cfg.record_radii = {50.0};
    const auto tr = forward_solve(cfg, f0);
    const double n0 = tr.norm2_history.front();
    double drift = 0.0, speed = 0.0;
    for (std::size_t k = 0; k < tr.norm2_history.size(); ++k) {
      drift = std::max(drift, std::abs(std::sqrt(tr.norm2_history[k] / n0) - 1.0));
      speed = std::max(speed, tr.support_history[k] - tr.initial_support - static_cast<double>(k) * dr);
    }
    const std::string tag = scheme_name(sch);
    add(s, n, "norm_drift_t200_" + tag, drift, 1e-6);
    add(s, n, "finite_speed_" + tag, std::max(0.0, speed), 2.0 * dr);
  }
  double rev = 0.0;
  for (double Z : {0.0, 0.3, -0.45}) {
    const ChargeConfig c(Z);
    RadialField f = f0;
    for (int k = 0; k < 100; ++k) step(f, c, dr);
    for (int k = 0; k < 100; ++k) step(f, c, -dr);
    for (std::size_t j = 0; j < f.u_plus.size(); ++j) {
      rev = std::max(rev, std::abs(f.u_plus[j] - f0.u_plus[j]) + std::abs(f.u_minus[j] - f0.u_minus[j]));
    }
  }
  add(s, n, "time_reversibility", rev, 1e-9);
  return s;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"clifford", "harmonics",   "specfun",
                                                 "wronskian", "residual", "conservation"};
  return names;
}

std::vector<Check> run_suite(const std::string& name, int threads) {
  if (name == "all") {
    std::vector<Check> out;
    for (const auto& s : suite_names()) {
      auto r = run_suite(s, threads);
      out.insert(out.end(), r.begin(), r.end());
    }
    return out;
  }
  if (name == "clifford") return clifford_suite();
  if (name == "harmonics") return harmonics_suite();
  if (name == "specfun") return specfun_suite();
  if (name == "wronskian") return wronskian_suite();
  if (name == "residual") return residual_suite(threads);
  if (name == "conservation") return conservation_suite();
  throw ArgumentError("unknown verify suite '" + name + "'");
}

std::string format_check(const Check& c) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-44s %.3e  tol %.1e  %s", (c.suite + "/" + c.name).c_str(), c.deviation,
                c.tolerance, c.passed ? "PASS" : "FAIL");
  return buf;
}

}  // namespace dcres::tools
