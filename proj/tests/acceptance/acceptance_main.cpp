// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dcres/analysis.hpp"
#include "dcres/boundary_ode.hpp"
#include "dcres/errors.hpp"
#include "dcres/evolution.hpp"
#include "dcres_tools/cli.hpp"
#include "dcres_tools/verify.hpp"

using namespace dcres;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome suite_outcome(const std::vector<std::string>& suites, double time_limit) {
  const auto t0 = Clock::now();
  bool ok = true;
  double worst = 0.0;
  std::string failed;
  std::size_t n = 0;
  for (const auto& name : suites) {
    for (const auto& c : tools::run_suite(name)) {
      ++n;
      ok = ok && c.passed;
      if (!c.passed) failed += " " + c.suite + "/" + c.name;
      if (c.tolerance > 0) worst = std::max(worst, c.deviation / c.tolerance);
    }
  }
  const double dt = seconds_since(t0);
  std::string d = fmt("%zu checks, worst deviation/tolerance %.2g, %.2fs (limit %gs)", n, worst, dt, time_limit);
  if (!failed.empty()) d += "; failed:" + failed;
  return {ok && dt < time_limit, d};
}

// Shared long runs for criteria 4 to 7.
struct EvolutionRun {
  RadialField initial;
  Trajectory traj;
  std::vector<RadiationSample> rad;  // s in [-2, 100]
  double seconds = 0.0;
};

constexpr double kCenter = 0.75, kHalfWidth = 0.5, kDr = 0.05;

EvolutionRun evolve(double Z, int kappa, double t_final) {
  const auto t0 = Clock::now();
  EvolutionConfig cfg;
  cfg.charge = ChargeConfig(Z);
  cfg.dt = kDr;
  cfg.t_final = t_final;
  const auto grid = RadialGrid::covering(t_final + kCenter + kHalfWidth + 10.0, kDr);
  EvolutionRun run{RadialField::bump(AngularMode(kappa, 0.5), grid, kCenter, kHalfWidth, 1.0, -1.0), {}, {}, 0.0};
  run.traj = forward_solve(cfg, run.initial);
  run.rad = extract_radiation_field(run.traj, lattice_s_values(run.traj, -2.0, 100.0));
  run.seconds = seconds_since(t0);
  return run;
}

std::vector<RadiationSample> in_range(const std::vector<RadiationSample>& rad, double lo, double hi) {
  std::vector<RadiationSample> out;
  for (const auto& r : rad)
    if (r.s >= lo && r.s <= hi) out.push_back(r);
  return out;
}

Outcome criterion1() { return suite_outcome({"clifford", "harmonics"}, 1.0); }

Outcome criterion2() { return suite_outcome({"wronskian"}, 10.0); }

Outcome criterion3() {
  const auto t0 = Clock::now();
  const auto src = ModeSource::bump(0.5, 0.25, 1.0, {0.3, -0.7});
  double worst = 0.0;
  int found = 0, total = 0;
  for (double Z : {0.1, 0.3, 0.45}) {
    const ChargeConfig cfg(Z);
    for (int kappa : {1, 2}) {
      const auto poles = resonance_poles(cfg, kappa, 1);
      for (const Complex& p : poles) {
        ++total;
        try {
          const auto fit = locate_pole(cfg, kappa, src, -Z, p.imag() - 0.25, p.imag() + 0.25);
          const double err = std::abs(fit.sigma - p);
          worst = std::max(worst, err);
          if (err <= 0.02) ++found;
        } catch (const std::exception&) {
          worst = INFINITY;
        }
      }
    }
  }
  // Z = 0: the same strips, now pole free
  const ChargeConfig free(0.0);
  double ratio = 0.0;
  for (int kappa : {1, 2}) {
    for (int m = 0; m < 2; ++m) {
      const double im = -(1.0 + kappa + m);
      const auto scan = scan_resolvent_norm(free, kappa, src, line_path({0.0, im - 0.25}, {0.0, im + 0.25}, 40));
      std::vector<double> v;
      for (const auto& p : scan)
        if (!p.error) v.push_back(p.norm);
      if (v.size() < scan.size()) ratio = INFINITY;
      if (v.empty()) continue;
      std::sort(v.begin(), v.end());
      ratio = std::max(ratio, v.back() / v[v.size() / 2]);
    }
  }
  const double dt = seconds_since(t0);
  return {found == total && ratio < 10.0 && dt < 300.0,
          fmt("%d/%d poles within 0.02 (worst |dsigma| %.2g); Z=0 max/median %.3g (limit 10); %.1fs", found, total,
              worst, ratio, dt)};
}

Outcome criterion4(const EvolutionRun& run) {
  const double target = 1.0 + std::sqrt(1.0 - 0.09);
  try {
    const auto fit = fit_power_law(decay_samples(run.rad), {20.0, 100.0});
    const double e_err = std::abs(fit.exponent - target) / target;
    const double p_err = std::abs(fit.phase_slope - 0.3) / 0.3;
    return {e_err < 0.03 && p_err < 0.10 && run.seconds < 600.0,
            fmt("exponent %.5f vs %.5f (rel %.2g, limit 0.03); phase slope %.5f vs 0.3 (rel %.2g, limit 0.1); "
                "%.1fs",
                fit.exponent, target, e_err, fit.phase_slope, p_err, run.seconds)};
  } catch (const std::exception& e) {
    return {false, std::string("fit failed: ") + e.what()};
  }
}

Outcome criterion5() {
  const auto run = evolve(0.0, 1, 400.0);
  const auto rep = huygens_test(decay_samples(run.rad), kCenter + kHalfWidth, 5.0, 1e-5);
  return {rep.passed && !rep.vacuous && run.seconds < 600.0,
          fmt("Z=0 tail max/peak %.3g beyond s=%.2f (limit 1e-5, %zu samples); %.1fs", rep.tail_ratio,
              rep.threshold_s, rep.tail_samples, run.seconds)};
}

Outcome criterion6(const EvolutionRun& run) {
  const auto t0 = Clock::now();
  // drift over t in [0, 200]
  const std::size_t n200 = static_cast<std::size_t>(std::lround(200.0 / run.traj.dt));
  const auto& h = run.traj.norm2_history;
  double drift = 0.0;
  for (std::size_t k = 0; k <= n200 && k < h.size(); ++k) drift = std::max(drift, std::abs(h[k] / h.front() - 1.0));

  const double rn = radiation_norm2(run.rad, kDr);
  const double n0 = run.initial.norm2();
  const double excess = (rn - n0) / n0;

  // translate by T, restart the clock, extract again
  const double T = 20.0;
  EvolutionConfig cfg;
  cfg.charge = ChargeConfig(run.traj.Z);
  cfg.dt = kDr;
  RadialField shifted = run.initial;
  const int steps = static_cast<int>(std::lround(T / kDr));
  for (int k = 0; k < steps; ++k) step(shifted, cfg.charge, kDr);
  shifted.t = 0.0;
  cfg.t_final = 380.0;
  const auto tr2 = forward_solve(cfg, shifted);
  const auto s2 = lattice_s_values(tr2, -2.0, 60.0);
  const auto r2 = extract_radiation_field(tr2, s2);
  std::vector<double> s1;
  for (double s : s2) s1.push_back(s + T);
  const auto r1 = extract_radiation_field(run.traj, s1);
  double terr = 0.0;
  for (std::size_t i = 0; i < r1.size(); ++i)
    terr = std::max({terr, std::abs(r1[i].plus - r2[i].plus), std::abs(r1[i].minus - r2[i].minus)});

  return {drift < 1e-6 && excess <= 1e-3 && terr < 1e-4,
          fmt("norm drift %.2g (limit 1e-6); |R+|^2 %.8f vs |psi0|^2 %.8f (excess %.2g, limit 1e-3); "
              "translation error %.2g (limit 1e-4); %.1fs",
              drift, rn, n0, excess, terr, seconds_since(t0))};
}

Outcome criterion7(const EvolutionRun& run) {
  double pol = 0.0, conv = 0.0;
  for (const auto& r : in_range(run.rad, 20.0, 100.0)) {
    pol = std::max(pol, std::abs(r.minus) / std::abs(r.plus));
    conv = std::max(conv, r.convergence);
  }
  return {pol < 1e-2 && conv < 1e-4,
          fmt("max |R-|/|R+| on s in [20, 100] %.2g (limit 1e-2); extrapolation convergence %.2g (limit 1e-4)", pol,
              conv)};
}

Outcome criterion8() { return suite_outcome({"residual"}, 60.0); }

Outcome criterion9() {
  const auto t0 = Clock::now();
  const char* argv[] = {"dcres", "verify", "all"};
  std::ostringstream out1, err1, out2, err2;
  const int c1 = tools::run_cli(3, argv, out1, err1);
  const double first = seconds_since(t0);
  const int c2 = tools::run_cli(3, argv, out2, err2);
  const bool same = out1.str() == out2.str() && !out1.str().empty();
  return {c1 == 0 && c2 == 0 && same && first < 900.0,
          fmt("exit codes %d, %d; outputs %s (%zu bytes); single run %.1fs (limit 900s)", c1, c2,
              same ? "identical" : "DIFFER", out1.str().size(), first)};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* title, const std::function<Outcome()>& f) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.passed) ++failures;
    std::printf("%s  criterion %d  %-32s %s  [%.1fs]\n", o.passed ? "PASS" : "FAIL", id, title, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  };

  report(1, "algebraic identities", criterion1);
  report(2, "wronskian identity", criterion2);
  report(3, "pole localization", criterion3);

  EvolutionRun main_run;
  try {
    main_run = evolve(0.3, 1, 400.0);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "Z=0.3 evolution failed: %s\n", e.what());
  }
  const bool have_run = !main_run.rad.empty();
  auto needs_run = [&](auto f) {
    return [&, f]() -> Outcome {
      if (!have_run) return {false, "Z=0.3 evolution did not complete"};
      return f(main_run);
    };
  };
  report(4, "decay exponent", needs_run(criterion4));
  report(5, "huygens (Z=0)", criterion5);
  report(6, "conservation and bounds", needs_run(criterion6));
  report(7, "polarization", needs_run(criterion7));
  report(8, "frequency-domain residual", criterion8);
  report(9, "verify all", criterion9);

  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
