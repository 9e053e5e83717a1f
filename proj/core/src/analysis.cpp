#include "dcres/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "dcres/errors.hpp"

namespace dcres {

namespace {

// Slope and intercept of the least-squares line y = a + b x.
std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw WindowError("fit window has no spread in s");
  const double b = sxy / sxx;
  return {my - b * mx, b};
}

}  // namespace

std::vector<DecaySample> decay_samples(const std::vector<RadiationSample>& rad) {
  std::vector<DecaySample> out;
  out.reserve(rad.size());
  for (const auto& r : rad) out.push_back({r.s, r.plus});
  return out;
}

FitWindow default_window(const std::vector<DecaySample>& samples) {
  if (samples.empty()) throw WindowError("no samples");
  double smax = samples.front().s;
  for (const auto& x : samples) smax = std::max(smax, x.s);
  return {20.0, 0.8 * smax};
}

FitResult fit_power_law(const std::vector<DecaySample>& samples, const FitWindow& window, int min_samples) {
  if (!(window.s_lo > 0.0) || !(window.s_hi > window.s_lo)) {
    throw WindowError("fit window [" + std::to_string(window.s_lo) + ", " + std::to_string(window.s_hi) +
                      "] is empty or not in s > 0");
  }
  std::vector<double> ls, lm, ph;
  std::vector<Complex> vals;
  double prev_s = -std::numeric_limits<double>::infinity();
  double prev_arg = 0.0;
  for (const auto& x : samples) {
    if (x.s < window.s_lo || x.s > window.s_hi) continue;
    if (!(x.s > prev_s)) throw WindowError("sample s values are not strictly increasing");
    prev_s = x.s;
    const double m = std::abs(x.value);
    if (!(m > 0.0) || !std::isfinite(m)) {
      throw WindowError("zero or non-finite sample at s = " + std::to_string(x.s));
    }
    double a = std::arg(x.value);
    if (!ph.empty()) {
      // nearest branch to the previous unwrapped phase
      a += 2.0 * std::numbers::pi * std::round((prev_arg - a) / (2.0 * std::numbers::pi));
      if (std::abs(a - prev_arg) > std::numbers::pi / 2) {
        throw WindowError("phase jumps by " + std::to_string(a - prev_arg) + " near s = " + std::to_string(x.s) +
                          " (sign change or undersampled oscillation)");
      }
    }
    prev_arg = a;
    ls.push_back(std::log(x.s));
    lm.push_back(std::log(m));
    ph.push_back(a);
    vals.push_back(x.value);
  }
  if (static_cast<int>(ls.size()) < min_samples) {
    throw WindowError("fit window holds " + std::to_string(ls.size()) + " samples; at least " +
                      std::to_string(min_samples) + " required");
  }
  const auto [a0, b0] = line_fit(ls, lm);
  const auto [p0, q0] = line_fit(ls, ph);
  FitResult f;
  f.exponent = -b0;
  f.phase_slope = q0;
  f.amplitude = std::polar(std::exp(a0), p0);
  f.s_lo = window.s_lo;
  f.s_hi = window.s_hi;
  f.samples = static_cast<int>(ls.size());
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const Complex model = std::exp(Complex(a0 + b0 * ls[i], p0 + q0 * ls[i]));
    // compare on the unwrapped branch so the residual does not see 2 pi jumps
    const Complex obs = std::exp(Complex(lm[i], ph[i]));
    f.residual = std::max(f.residual, std::abs(model - obs) / std::abs(obs));
  }
  return f;
}

HuygensReport huygens_test(const std::vector<DecaySample>& samples, double support_bound, double margin,
                           double ratio) {
  HuygensReport h;
  h.threshold_s = support_bound + margin;
  for (const auto& x : samples) h.peak = std::max(h.peak, std::abs(x.value));
  for (const auto& x : samples) {
    if (x.s <= h.threshold_s) continue;
    ++h.tail_samples;
    h.tail_max = std::max(h.tail_max, std::abs(x.value));
  }
  if (h.peak == 0.0 || h.tail_samples == 0) {
    h.vacuous = true;
    h.passed = true;
    return h;
  }
  h.tail_ratio = h.tail_max / h.peak;
  h.passed = h.tail_ratio < ratio;
  return h;
}

ResonanceIndexSet radiation_index_set(const ChargeConfig& cfg, int depth_j, int depth_k) {
  return index_set(cfg, depth_j, depth_k).second.shifted(-1.0);
}

IndexMatch compare_index_set(const FitResult& fit, const ResonanceIndexSet& iset, double tolerance) {
  IndexMatch m;
  m.fitted = fit.exponent;
  m.gap = std::numeric_limits<double>::infinity();
  if (iset.entries.empty()) {
    m.note = "empty index set";
    return m;
  }
  for (const auto& e : iset.entries) {
    const double g = std::abs(fit.exponent - e.exponent.real());
    if (g < m.gap) {
      m.gap = g;
      m.nearest = e.exponent.real();
      m.j = e.j;
      m.k = e.k;
    }
  }
  m.nearest_field_convention = m.nearest + 1.0;
  m.matched = m.gap <= tolerance;
  m.note = m.matched ? "match" : "no exponent within tolerance";
  return m;
}

}  // namespace dcres
