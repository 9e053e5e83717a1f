#include "dcres/boundary_ode.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>
#include <utility>

#include "dcres/errors.hpp"

namespace dcres {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Complex cpow(double base, Complex e) { return std::exp(e * std::log(base)); }

}  // namespace

ChargeConfig::ChargeConfig(double Z) : Z_(Z) {
  if (!(std::abs(Z) < 0.5)) throw ArgumentError("charge must satisfy |Z| < 1/2, got " + std::to_string(Z));
}

double ChargeConfig::nu(int kappa) const {
  if (kappa == 0) throw ArgumentError("kappa must be nonzero");
  return std::sqrt(double(kappa) * kappa - Z_ * Z_);
}

HypergeomPair reduce_to_hypergeometric(const ChargeConfig& cfg, int kappa, Complex sigma, Region region) {
  const double nu = cfg.nu(kappa);
  const double Z = cfg.Z();
  const Complex b = nu + kI * sigma + kI * Z;
  const Complex c = 1.0 + 2.0 * nu;
  if (region == Region::kCPlus) {
    const Complex a = Complex(nu, -Z);
    return {{a, b, c}, {a + 1.0, b, c}};
  }
  const Complex a = Complex(nu, Z);
  return {{a + 1.0, b, c}, {a, b, c}};
}

HypergeomKernel::HypergeomKernel(const HypergeomParams& p, const Hyp2f1Options& opt)
    : p_(p), p4_{p.c - p.a, p.c - p.b, p.c - p.a - p.b + 1.0}, e4_(p.c - p.a - p.b), opt_(opt) {
  p_.validate();
  opt_.fail_floor = std::max(opt_.fail_floor, 1.0);
}

Complex HypergeomKernel::w1(double x) const { return hyp2f1(p_, x, opt_); }

Complex HypergeomKernel::w1_deriv(double x) const { return hyp2f1_deriv(p_, x, opt_); }

Complex HypergeomKernel::w4(double x) const {
  const double y = 1.0 - x;
  return cpow(y, e4_) * hyp2f1(p4_, y, opt_);
}

Complex HypergeomKernel::w4_deriv(double x) const {
  const double y = 1.0 - x;
  const Complex pw = cpow(y, e4_);
  return -e4_ * pw / y * hyp2f1(p4_, y, opt_) - pw * hyp2f1_deriv(p4_, y, opt_);
}

Complex HypergeomKernel::wronskian_numeric(double x) const {
  return w1(x) * w4_deriv(x) - w1_deriv(x) * w4(x);
}

Complex HypergeomKernel::wronskian_closed_form(double x) const {
  const Complex k = -gamma_ratio({p_.c, e4_ + 1.0}, {p_.c - p_.a, p_.c - p_.b});
  return k * cpow(x, -p_.c) * cpow(1.0 - x, e4_ - 1.0);
}

Complex HypergeomKernel::inverse_wronskian_constant() const {
  return -gamma_ratio({p_.c - p_.a, p_.c - p_.b}, {p_.c, e4_ + 1.0});
}

Complex HypergeomKernel::weight(double x) const {
  return cpow(x, p_.c) * cpow(1.0 - x, p_.a + p_.b + 1.0 - p_.c);
}

BoundaryKernels make_kernels(const ChargeConfig& cfg, int kappa, Complex sigma) {
  const HypergeomPair hp = reduce_to_hypergeometric(cfg, kappa, sigma, Region::kCPlus);
  return {HypergeomKernel(hp.f), HypergeomKernel(hp.g)};
}

ModeSource ModeSource::zero() {
  auto z = [](double) { return Complex{}; };
  return {z, z, z, z, 0.5, 0.5};
}

ModeSource ModeSource::bump(double center, double half_width, Complex amp1, Complex amp2) {
  if (!(half_width > 0.0) || center - half_width <= 0.0 || center + half_width >= 1.0) {
    throw ArgumentError("bump support must lie inside (0, 1)");
  }
  auto phi = [=](double x) -> double {
    const double u = (x - center) / half_width;
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - u * u));
  };
  auto dphi = [=](double x) -> double {
    const double u = (x - center) / half_width;
    if (std::abs(u) >= 1.0) return 0.0;
    const double q = 1.0 - u * u;
    return std::exp(1.0 - 1.0 / q) * (-2.0 * u / (q * q)) / half_width;
  };
  return {[=](double x) { return amp1 * phi(x); }, [=](double x) { return amp1 * dphi(x); },
          [=](double x) { return amp2 * phi(x); }, [=](double x) { return amp2 * dphi(x); },
          center - half_width, center + half_width};
}

ModeSource ModeSource::scaled(Complex s) const {
  ModeSource o = *this;
  o.f1 = [f = f1, s](double x) { return s * f(x); };
  o.f1_deriv = [f = f1_deriv, s](double x) { return s * f(x); };
  o.f2 = [f = f2, s](double x) { return s * f(x); };
  o.f2_deriv = [f = f2_deriv, s](double x) { return s * f(x); };
  return o;
}

ModeSource operator+(const ModeSource& a, const ModeSource& b) {
  auto sum = [](std::function<Complex(double)> f, std::function<Complex(double)> g) {
    return [f = std::move(f), g = std::move(g)](double x) { return f(x) + g(x); };
  };
  ModeSource o{sum(a.f1, b.f1), sum(a.f1_deriv, b.f1_deriv), sum(a.f2, b.f2), sum(a.f2_deriv, b.f2_deriv),
               0.0, 0.0};
  const bool a_empty = a.support_lo >= a.support_hi;
  const bool b_empty = b.support_lo >= b.support_hi;
  if (a_empty && b_empty) {
    o.support_lo = o.support_hi = 0.5;
  } else if (a_empty) {
    o.support_lo = b.support_lo, o.support_hi = b.support_hi;
  } else if (b_empty) {
    o.support_lo = a.support_lo, o.support_hi = a.support_hi;
  } else {
    o.support_lo = std::min(a.support_lo, b.support_lo);
    o.support_hi = std::max(a.support_hi, b.support_hi);
  }
  return o;
}

std::vector<Complex> resonance_poles(const ChargeConfig& cfg, int kappa, int m_max) {
  std::vector<Complex> out;
  if (m_max < 0) throw ArgumentError("m_max must be >= 0");
  if (cfg.Z() == 0.0) return out;
  const double nu = cfg.nu(kappa);
  for (int m = 0; m <= m_max; ++m) out.emplace_back(-cfg.Z(), -(1.0 + nu + m));
  return out;
}

double distance_to_poles(const ChargeConfig& cfg, int kappa, Complex sigma) {
  if (cfg.Z() == 0.0) return std::numeric_limits<double>::infinity();
  const double nu = cfg.nu(kappa);
  const double m = std::max(0.0, std::round(-sigma.imag() - 1.0 - nu));
  const Complex pole(-cfg.Z(), -(1.0 + nu + m));
  return std::abs(sigma - pole);
}

std::vector<double> uniform_nodes(double lo, double hi, int n) {
  if (n < 2) throw ArgumentError("need at least two nodes");
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = lo + (hi - lo) * i / (n - 1);
  return x;
}

InhomogeneousSolution solve_inhomogeneous(const ChargeConfig& cfg, int kappa, Complex sigma,
                                          const ModeSource& src, const std::vector<double>& x,
                                          const SolveOptions& opt) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && x[i] < 1.0) || (i > 0 && !(x[i] > x[i - 1]))) {
      throw ArgumentError("solve nodes must be strictly increasing inside (0, 1)");
    }
  }
  if (distance_to_poles(cfg, kappa, sigma) < opt.pole_guard) {
    const double nu = cfg.nu(kappa);
    const double m = std::max(0.0, std::round(-sigma.imag() - 1.0 - nu));
    throw ResonanceError("sigma is within the refusal radius of a resonance", Complex(-cfg.Z(), -(1.0 + nu + m)));
  }

  const double nu = cfg.nu(kappa);
  const double Z = cfg.Z();
  const double kap = kappa;
  const HypergeomPair hp = reduce_to_hypergeometric(cfg, kappa, sigma, Region::kCPlus);
  const HypergeomKernel kf(hp.f, opt.hyp);
  const HypergeomKernel kg(hp.g, opt.hyp);

  auto H1 = [&](double y) { return 0.5 * kI * std::pow(y, 1.0 - nu) * src.f1(y); };
  auto H2 = [&](double y) { return -0.5 * kI * std::pow(y, 1.0 - nu) * src.f2(y); };
  auto H1d = [&](double y) {
    return 0.5 * kI * ((1.0 - nu) * std::pow(y, -nu) * src.f1(y) + std::pow(y, 1.0 - nu) * src.f1_deriv(y));
  };
  auto H2d = [&](double y) {
    return -0.5 * kI * ((1.0 - nu) * std::pow(y, -nu) * src.f2(y) + std::pow(y, 1.0 - nu) * src.f2_deriv(y));
  };
  const Complex cF0 = Complex(1.0 + nu, Z);
  const Complex cF1 = 1.0 + nu + kI * sigma + kI * Z;
  auto gF = [&](double y) {
    const Complex rhs = y * (1.0 - y) * H1d(y) + (cF0 - y * cF1) * H1(y) - kap * H2(y);
    return rhs / (y * (1.0 - y));
  };
  auto gG = [&](double y) {
    const Complex rhs = y * H2d(y) + Complex(1.0 + nu, -Z) * H2(y) - kap * H1(y);
    return rhs / (y * (1.0 - y));
  };

  InhomogeneousSolution sol;
  sol.x = x;
  const std::size_t n = x.size();
  sol.u_minus.assign(n, 0.0);
  sol.u_plus.assign(n, 0.0);
  sol.u_plus_elimination.assign(n, 0.0);

  const double lo = src.support_lo, hi = src.support_hi;
  if (!(lo < hi)) return sol;
  if (lo <= 0.0 || hi >= 1.0) throw ArgumentError("source support must lie inside (0, 1)");

  // Panel breakpoints: support ends plus every node strictly inside.
  std::vector<double> bp{lo};
  for (double xi : x)
    if (xi > lo && xi < hi) bp.push_back(xi);
  bp.push_back(hi);
  const std::size_t np = bp.size() - 1;

  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  // Panel integrals of weight * w1 * g and weight * w4 * g, for both channels.
  std::vector<Complex> p1f(np), p4f(np), p1g(np), p4g(np);
  auto integrate = [&](auto&& fn, double a, double b) {
    double err = 0.0;
    const Complex v = GK::integrate(fn, a, b, opt.quad_max_depth, opt.quad_tol, &err);
    sol.quadrature_error += err;
    return v;
  };
  for (std::size_t k = 0; k < np; ++k) {
    const double a = bp[k], b = bp[k + 1];
    p1f[k] = integrate([&](double y) { return kf.weight(y) * kf.w1(y) * gF(y); }, a, b);
    p4f[k] = integrate([&](double y) { return kf.weight(y) * kf.w4(y) * gF(y); }, a, b);
    p1g[k] = integrate([&](double y) { return kg.weight(y) * kg.w1(y) * gG(y); }, a, b);
    p4g[k] = integrate([&](double y) { return kg.weight(y) * kg.w4(y) * gG(y); }, a, b);
  }
  // Prefix (from the left) and suffix (from the right) sums over panels.
  std::vector<Complex> c1f(np + 1), c1g(np + 1), c4f(np + 1), c4g(np + 1);
  for (std::size_t k = 0; k < np; ++k) {
    c1f[k + 1] = c1f[k] + p1f[k];
    c1g[k + 1] = c1g[k] + p1g[k];
  }
  for (std::size_t k = np; k-- > 0;) {
    c4f[k] = c4f[k + 1] + p4f[k];
    c4g[k] = c4g[k + 1] + p4g[k];
  }

  const Complex invKf = kf.inverse_wronskian_constant();
  const Complex invKg = kg.inverse_wronskian_constant();
  double max_up = 0.0, max_diff = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i];
    // Number of breakpoints <= xi determines how many panels lie to the left.
    const std::size_t left = static_cast<std::size_t>(std::upper_bound(bp.begin(), bp.end(), xi) - bp.begin());
    const std::size_t panels_left = left == 0 ? 0 : std::min(left - 1, np);
    const Complex I1f = c1f[panels_left], I1g = c1g[panels_left];
    const Complex I4f = c4f[panels_left], I4g = c4g[panels_left];

    Complex F = 0.0, Fd = 0.0, G = 0.0;
    if (I1f != Complex{}) {
      F += kf.w4(xi) * I1f;
      if (opt.elimination_check) Fd += kf.w4_deriv(xi) * I1f;
    }
    if (I4f != Complex{}) {
      F += kf.w1(xi) * I4f;
      if (opt.elimination_check) Fd += kf.w1_deriv(xi) * I4f;
    }
    if (I1g != Complex{}) G += kg.w4(xi) * I1g;
    if (I4g != Complex{}) G += kg.w1(xi) * I4g;
    F *= invKf;
    Fd *= invKf;
    G *= invKg;

    const double sc = std::pow(xi, nu - 1.0);
    sol.u_minus[i] = sc * F;
    sol.u_plus[i] = sc * G;
    if (opt.elimination_check) {
      const Complex Ge = (xi / kap) * (H1(xi) - Fd - Complex(nu, -Z) * F / xi);
      sol.u_plus_elimination[i] = sc * Ge;
      max_diff = std::max(max_diff, std::abs(sol.u_plus_elimination[i] - sol.u_plus[i]));
    }
    max_up = std::max(max_up, std::abs(sol.u_plus[i]));
  }
  sol.route_discrepancy = max_up > 0.0 ? max_diff / max_up : max_diff;
  return sol;
}

std::pair<std::vector<Complex>, std::vector<Complex>> apply_boundary_operator(
    const ChargeConfig& cfg, int kappa, Complex sigma, const std::vector<double>& x,
    const std::vector<Complex>& u_minus, const std::vector<Complex>& u_plus) {
  const std::size_t n = x.size();
  if (n < 7 || u_minus.size() != n || u_plus.size() != n) {
    throw ArgumentError("boundary operator needs at least 7 nodes and matching arrays");
  }
  const double h = (x.back() - x.front()) / (n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(x[i] - x[i - 1] - h) > 1e-9 * h) throw ArgumentError("boundary operator needs a uniform grid");
  }
  static constexpr double c6[] = {-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0};
  auto deriv = [&](const std::vector<Complex>& u, std::size_t i) {
    Complex d = 0.0;
    for (int k = 0; k < 7; ++k) d += c6[k] * u[i + k - 3];
    return d / (60.0 * h);
  };
  const double Z = cfg.Z();
  const double kap = kappa;
  std::vector<Complex> h1(n, Complex(kNaN, kNaN)), h2(n, Complex(kNaN, kNaN));
  for (std::size_t i = 3; i + 3 < n; ++i) {
    const double xi = x[i];
    h1[i] = -2.0 * kI * (deriv(u_minus, i) + Complex(1.0, -Z) / xi * u_minus[i] + kap / xi * u_plus[i]);
    h2[i] = 2.0 * kI *
            ((1.0 - xi) * deriv(u_plus, i) + (Complex(1.0, Z) / xi - (1.0 + kI * sigma + kI * Z)) * u_plus[i] +
             kap / xi * u_minus[i]);
  }
  return {h1, h2};
}

double boundary_residual(const ChargeConfig& cfg, int kappa, Complex sigma, const ModeSource& src,
                         const InhomogeneousSolution& sol, double x_lo, double x_hi) {
  const auto [h1, h2] = apply_boundary_operator(cfg, kappa, sigma, sol.x, sol.u_minus, sol.u_plus);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 3; i + 3 < sol.x.size(); ++i) {
    if (sol.x[i] < x_lo || sol.x[i] > x_hi) continue;
    const Complex f1 = src.f1(sol.x[i]), f2 = src.f2(sol.x[i]);
    num += std::norm(h1[i] - f1) + std::norm(h2[i] - f2);
    den += std::norm(f1) + std::norm(f2);
  }
  if (den == 0.0) return std::sqrt(num);
  return std::sqrt(num / den);
}

std::vector<Complex> line_path(Complex from, Complex to, int n) {
  if (n < 1) throw ArgumentError("path needs at least one point");
  std::vector<Complex> p(n);
  for (int i = 0; i < n; ++i) p[i] = n == 1 ? from : from + (to - from) * (double(i) / (n - 1));
  return p;
}

std::vector<ScanPoint> scan_resolvent_norm(const ChargeConfig& cfg, int kappa, const ModeSource& src,
                                           const std::vector<Complex>& path, const ScanOptions& opt) {
  std::vector<ScanPoint> out(path.size());
  SolveOptions so = opt.solve;
  so.elimination_check = false;
  auto work = [&](std::size_t i) {
    out[i].sigma = path[i];
    try {
      const InhomogeneousSolution s = solve_inhomogeneous(cfg, kappa, path[i], src, opt.x, so);
      double acc = 0.0;
      for (std::size_t j = 0; j + 1 < s.x.size(); ++j) {
        const double dx = s.x[j + 1] - s.x[j];
        const double a = std::norm(s.u_minus[j]) + std::norm(s.u_plus[j]);
        const double b = std::norm(s.u_minus[j + 1]) + std::norm(s.u_plus[j + 1]);
        acc += 0.5 * dx * (a + b);
      }
      out[i].norm = std::sqrt(acc);
    } catch (const std::exception& e) {
      out[i].norm = kNaN;
      out[i].error = e.what();
    }
  };
  const int threads = std::max(1, std::min<int>(opt.threads, static_cast<int>(path.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < path.size(); ++i) work(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < path.size(); i = next++) work(i);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

double parabola_vertex(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  if (n < 3 || y.size() != n) throw AccuracyError("parabola fit needs at least 3 points", kNaN);
  const double t0 = std::accumulate(t.begin(), t.end(), 0.0) / n;
  // Normal equations for y = p0 + p1 s + p2 s^2, s = t - t0.
  double S[5] = {}, R[3] = {};
  for (std::size_t i = 0; i < n; ++i) {
    const double s = t[i] - t0;
    double pw = 1.0;
    for (int k = 0; k < 5; ++k) {
      S[k] += pw;
      if (k < 3) R[k] += pw * y[i];
      pw *= s;
    }
  }
  const double A[3][3] = {{S[0], S[1], S[2]}, {S[1], S[2], S[3]}, {S[2], S[3], S[4]}};
  auto det3 = [](const double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const double d = det3(A);
  double B1[3][3], B2[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      B1[i][j] = j == 1 ? R[i] : A[i][j];
      B2[i][j] = j == 2 ? R[i] : A[i][j];
    }
  const double p1 = det3(B1) / d, p2 = det3(B2) / d;
  if (!(p2 > 0.0)) throw AccuracyError("parabola fit has no minimum", p2);
  return t0 - p1 / (2.0 * p2);
}

namespace {

// Vertex of 1/norm^2 over the valid points of a scan, parameterized by `coord`.
double fit_scan(const std::vector<ScanPoint>& pts, double (*coord)(Complex)) {
  std::vector<double> t, y;
  for (const auto& p : pts) {
    if (p.error || !(p.norm > 0.0)) continue;
    t.push_back(coord(p.sigma));
    y.push_back(1.0 / (p.norm * p.norm));
  }
  return parabola_vertex(t, y);
}

double re_of(Complex z) { return z.real(); }
double im_of(Complex z) { return z.imag(); }

}  // namespace

PoleFit locate_pole(const ChargeConfig& cfg, int kappa, const ModeSource& src, double re, double im_lo,
                    double im_hi, int n_coarse, const ScanOptions& opt) {
  if (n_coarse < 5 || !(im_hi > im_lo)) throw ArgumentError("pole search needs >= 5 points on a nonempty range");
  PoleFit fit;
  const auto coarse = scan_resolvent_norm(cfg, kappa, src, line_path({re, im_lo}, {re, im_hi}, n_coarse), opt);

  std::vector<double> valid;
  std::size_t peak = 0;
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    if (coarse[i].error) continue;
    valid.push_back(coarse[i].norm);
    if (coarse[peak].error || coarse[i].norm > coarse[peak].norm) peak = i;
  }
  if (valid.empty()) throw AccuracyError("every scan point failed", kNaN);
  std::nth_element(valid.begin(), valid.begin() + valid.size() / 2, valid.end());
  fit.median_norm = valid[valid.size() / 2];
  if (peak < 2 || peak + 2 >= coarse.size()) throw AccuracyError("no interior resonance peak on the scan line", kNaN);

  const std::vector<ScanPoint> around(coarse.begin() + (peak - 2), coarse.begin() + (peak + 3));
  const double im0 = fit_scan(around, im_of);
  const double step = (im_hi - im_lo) / (n_coarse - 1);

  // Even point counts keep the fitted center itself off the sample set.
  fit.vertical = scan_resolvent_norm(cfg, kappa, src, line_path({re, im0 - step}, {re, im0 + step}, 8), opt);
  const double im1 = fit_scan(fit.vertical, im_of);
  fit.horizontal = scan_resolvent_norm(cfg, kappa, src, line_path({re - step, im1}, {re + step, im1}, 8), opt);
  const double re1 = fit_scan(fit.horizontal, re_of);
  fit.sigma = {re1, im1};
  for (const std::vector<ScanPoint>* v : {&coarse, &std::as_const(fit.vertical), &std::as_const(fit.horizontal)})
    for (const auto& p : *v)
      if (!p.error) fit.peak_norm = std::max(fit.peak_norm, p.norm);
  return fit;
}

ResonanceIndexSet ResonanceIndexSet::shifted(Complex shift) const {
  ResonanceIndexSet o = *this;
  for (auto& e : o.entries) e.exponent += shift;
  return o;
}

std::pair<ResonanceIndexSet, ResonanceIndexSet> index_set(const ChargeConfig& cfg, int depth_j, int depth_k) {
  if (depth_j < 0 || depth_k < 0) throw ArgumentError("index set depths must be nonnegative");
  ResonanceIndexSet iplus, cplus;
  const double Z = cfg.Z();
  for (int k = 0; k < depth_k; ++k) iplus.entries.push_back({Complex(1.0 + k, Z), 0, 0, k});
  for (int j = 1; j <= depth_j; ++j)
    for (int k = 1; k <= depth_k; ++k)
      cplus.entries.push_back({Complex(1.0 + j + std::sqrt(double(k) * k - Z * Z), 0.0), 0, j, k});
  auto order = [](const IndexEntry& a, const IndexEntry& b) {
    if (a.exponent.real() != b.exponent.real()) return a.exponent.real() < b.exponent.real();
    if (a.j != b.j) return a.j < b.j;
    return a.k < b.k;
  };
  std::sort(iplus.entries.begin(), iplus.entries.end(), order);
  std::sort(cplus.entries.begin(), cplus.entries.end(), order);
  return {iplus, cplus};
}

}  // namespace dcres
