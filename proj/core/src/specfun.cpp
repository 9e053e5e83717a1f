#include "dcres/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "dcres/errors.hpp"

namespace dcres {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

// Lanczos, g = 7, n = 9.
constexpr double kG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool nonpositive_integer(Complex z, long* where = nullptr) {
  if (z.imag() != 0.0 || z.real() > 0.0) return false;
  const double r = std::round(z.real());
  if (r != z.real()) return false;
  if (where) *where = static_cast<long>(r);
  return true;
}

// log Gamma(z) for Re z >= 1/2.
Complex lanczos_log(Complex z) {
  z -= 1.0;
  Complex x = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) x += kLanczos[i] / (z + static_cast<double>(i));
  const Complex t = z + kG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// sin(pi z) with the argument reduced exactly first, so that values near the
// integers keep full relative accuracy.
Complex sin_pi(Complex z) {
  const double n = std::round(z.real());
  const Complex f(z.real() - n, z.imag());
  const Complex v = std::sin(kPi * f);
  return std::fmod(n, 2.0) == 0.0 ? v : -v;
}

// log(sin(pi z)) without overflow for large |Im z|.
Complex log_sin_pi(Complex z) {
  const double y = z.imag();
  if (std::abs(y) < 30.0) return std::log(sin_pi(z));
  // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i; keep the dominant exponential.
  const Complex ipz = Complex(0.0, kPi) * z;
  if (y > 0) return -ipz + std::log((std::exp(2.0 * ipz) - 1.0) / Complex(0.0, -2.0));
  return ipz + std::log((1.0 - std::exp(-2.0 * ipz)) / Complex(0.0, 2.0));
}

void throw_pole(long where) {
  throw PoleError("Gamma has a pole at " + std::to_string(where), where);
}

}  // namespace

Complex log_gamma_c(Complex z) {
  long where = 0;
  if (nonpositive_integer(z, &where)) throw_pole(where);
  if (z.real() < 0.5) return std::log(kPi) - log_sin_pi(z) - lanczos_log(1.0 - z);
  return lanczos_log(z);
}

Complex gamma_c(Complex z) {
  long where = 0;
  if (nonpositive_integer(z, &where)) throw_pole(where);
  if (z.imag() == 0.0 && z.real() > 0.0) return std::tgamma(z.real());
  if (z.real() < 0.5) return kPi / (sin_pi(z) * gamma_c(1.0 - z));
  return std::exp(lanczos_log(z));
}

Complex rgamma_c(Complex z) {
  if (nonpositive_integer(z)) return 0.0;
  if (z.real() < 0.5) return sin_pi(z) * gamma_c(1.0 - z) / kPi;
  return std::exp(-lanczos_log(z));
}

Complex gamma_ratio(std::initializer_list<Complex> num, std::initializer_list<Complex> den) {
  for (const Complex& d : den)
    if (nonpositive_integer(d)) return 0.0;
  Complex lg = 0.0;
  for (const Complex& n : num) lg += log_gamma_c(n);
  for (const Complex& d : den) lg -= log_gamma_c(d);
  return std::exp(lg);
}

void HypergeomParams::validate() const {
  long where = 0;
  if (nonpositive_integer(c, &where)) {
    throw ParameterError("2F1 undefined: c = " + std::to_string(where) + " is a nonpositive integer");
  }
}

namespace {

void check_x(double x) {
  if (!(x >= 0.0 && x < 1.0)) throw ArgumentError("2F1 argument must lie in [0, 1), got " + std::to_string(x));
}

// Plain power series, no parameter validation.
Hyp2f1Result raw_series(Complex a, Complex b, Complex c, double x, int max_terms) {
  Hyp2f1Result r;
  r.value = 1.0;
  if (x == 0.0) {
    r.terms = 1;
    return r;
  }
  Complex term = 1.0;
  double abs_sum = 1.0;
  int small_run = 0;
  for (int k = 0; k < max_terms; ++k) {
    const double kd = k;
    term *= (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * x;
    r.value += term;
    const double at = std::abs(term);
    abs_sum += at;
    r.terms = k + 2;
    if (term == Complex{}) return r;  // terminating series
    // Require the tail to be geometric with ratio < 1 before trusting smallness.
    const double ratio = std::abs((a + kd + 1.0) * (b + kd + 1.0) / ((c + kd + 1.0) * (kd + 2.0))) * x;
    if (at <= kEps * std::abs(r.value) && ratio < 1.0) {
      if (++small_run >= 2) {
        const double tail = at * ratio / (1.0 - ratio);
        r.error_estimate = tail + 4.0 * kEps * abs_sum;
        return r;
      }
    } else {
      small_run = 0;
    }
  }
  throw AccuracyError("2F1 series did not converge in " + std::to_string(max_terms) + " terms",
                      std::abs(term) / std::max(std::abs(r.value), 1e-300));
}

// Kummer connection at s = c - a - b away from the integers.
Hyp2f1Result raw_connection(Complex a, Complex b, Complex c, double x, int max_terms) {
  const double y = 1.0 - x;
  const Complex s = c - a - b;
  const Complex g1 = gamma_ratio({c, s}, {c - a, c - b});
  const Complex g2 = gamma_ratio({c, -s}, {a, b});
  Hyp2f1Result r;
  Complex v1 = 0.0, v2 = 0.0;
  double e1 = 0.0, e2 = 0.0;
  if (g1 != Complex{}) {
    const Hyp2f1Result f1 = raw_series(a, b, 1.0 - s, y, max_terms);
    v1 = g1 * f1.value;
    e1 = std::abs(g1) * f1.error_estimate;
    r.terms += f1.terms;
  }
  if (g2 != Complex{}) {
    const Hyp2f1Result f2 = raw_series(c - a, c - b, 1.0 + s, y, max_terms);
    const Complex pw = std::exp(s * std::log(y));
    v2 = g2 * pw * f2.value;
    e2 = std::abs(g2 * pw) * f2.error_estimate;
    r.terms += f2.terms;
  }
  r.value = v1 + v2;
  // Cancellation between the two pieces plus gamma evaluation error.
  r.error_estimate = e1 + e2 + 32.0 * kEps * (std::abs(v1) + std::abs(v2));
  return r;
}

}  // namespace

Hyp2f1Result hyp2f1_series(const HypergeomParams& p, double x, const Hyp2f1Options& opt) {
  p.validate();
  check_x(x);
  return raw_series(p.a, p.b, p.c, x, opt.max_terms);
}

Hyp2f1Result hyp2f1_connection(const HypergeomParams& p, double x, const Hyp2f1Options& opt) {
  p.validate();
  check_x(x);
  if (x == 0.0) return {1.0, 0.0, 1, false};
  const Complex s = p.c - p.a - p.b;
  const double n = std::round(s.real());
  const double h = opt.degenerate_step;
  if (std::abs(s - Complex(n, 0.0)) >= h) return raw_connection(p.a, p.b, p.c, x, opt.max_terms);

  // c - a - b within h of the integer n: evaluate at s = n +- h, n +- 2h by
  // moving b, then interpolate with the cubic through those four points. The
  // pieces of the connection formula grow like 1/h (1/h^2 once |n| >= 1), so h
  // balances that cancellation against the O(h^4) interpolation error.
  static constexpr double offs[5] = {-2.0, -1.0, 1.0, 2.0, 3.0};
  Hyp2f1Result r;
  r.degenerate = true;
  Hyp2f1Result piece[5];
  for (int i = 0; i < 5; ++i) {
    const Complex si = n + offs[i] * h;
    piece[i] = raw_connection(p.a, p.c - p.a - si, p.c, x, opt.max_terms);
    r.terms += piece[i].terms;
  }
  const Complex t = (s - n) / h;
  auto lagrange = [&](int m, double* abs_weights) {
    Complex v = 0.0;
    for (int i = 0; i < m; ++i) {
      Complex w = 1.0;
      for (int j = 0; j < m; ++j)
        if (j != i) w *= (t - offs[j]) / (offs[i] - offs[j]);
      v += w * piece[i].value;
      if (abs_weights) {
        *abs_weights += std::abs(w);
        r.error_estimate += std::abs(w) * piece[i].error_estimate;
      }
    }
    return v;
  };
  double lag_abs = 0.0;
  r.value = lagrange(4, &lag_abs);
  // Interpolation error: gap to the quartic through all five samples.
  r.error_estimate += std::abs(lagrange(5, nullptr) - r.value) + kEps * lag_abs * std::abs(r.value);
  return r;
}

Hyp2f1Result hyp2f1_eval(const HypergeomParams& p, double x, const Hyp2f1Options& opt) {
  p.validate();
  check_x(x);
  if (x <= 0.5) return raw_series(p.a, p.b, p.c, x, opt.max_terms);
  return hyp2f1_connection(p, x, opt);
}

Complex hyp2f1(const HypergeomParams& p, double x, const Hyp2f1Options& opt) {
  const Hyp2f1Result r = hyp2f1_eval(p, x, opt);
  const double scale = std::max({std::abs(r.value), opt.fail_floor, 1e-300});
  if (r.error_estimate > opt.fail_above * scale) {
    throw AccuracyError("2F1 lost accuracy: relative error estimate " +
                            std::to_string(r.error_estimate / scale),
                        r.error_estimate / scale);
  }
  return r.value;
}

Complex hyp2f1_deriv(const HypergeomParams& p, double x, const Hyp2f1Options& opt) {
  p.validate();
  check_x(x);
  const Complex pref = p.a * p.b / p.c;
  if (pref == Complex{}) return 0.0;
  return pref * hyp2f1({p.a + 1.0, p.b + 1.0, p.c + 1.0}, x, opt);
}

}  // namespace dcres
