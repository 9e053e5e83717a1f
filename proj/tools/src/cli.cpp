#include "dcres_tools/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dcres/analysis.hpp"
#include "dcres/boundary_ode.hpp"
#include "dcres/errors.hpp"
#include "dcres/evolution.hpp"
#include "dcres_tools/output.hpp"
#include "dcres_tools/verify.hpp"

namespace dcres::tools {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::pair<double, double> parse_range(const std::string& text, const char* flag) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError(std::string(flag) + " expects lo:hi, got '" + text + "'");
  try {
    std::size_t p1 = 0, p2 = 0;
    const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
    const double lo = std::stod(a, &p1), hi = std::stod(b, &p2);
    if (p1 != a.size() || p2 != b.size() || !(hi > lo)) throw std::invalid_argument("range");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError(std::string(flag) + " expects lo:hi with lo < hi, got '" + text + "'");
  }
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

// ---------------------------------------------------------------- poles

struct PolesArgs {
  double Z = 0.0;
  int kappa = 1;
  int m_max = 2;
  std::optional<std::string> out;
};

int cmd_poles(const PolesArgs& a, std::ostream& out) {
  const std::string started = utc_now();
  const ChargeConfig cfg(a.Z);
  if (a.m_max < 0) throw ArgumentError("--m-max must be nonnegative");
  const double nu = cfg.nu(a.kappa);
  const auto poles = resonance_poles(cfg, a.kappa, a.m_max);
  json j;
  j["Z"] = a.Z;
  j["kappa"] = a.kappa;
  j["nu"] = nu;
  j["formula"] = "sigma_m = -Z - i(1 + nu + m)";
  j["poles"] = json::array();
  for (std::size_t m = 0; m < poles.size(); ++m)
    j["poles"].push_back({{"m", m}, {"re", poles[m].real()}, {"im", poles[m].imag()}});
  j["note"] = poles.empty() ? "Z = 0: the resolvent has no poles (they cancel); propagation is sharp"
                            : "simple poles of the boundary resolvent";
  const fs::path dir = resolve_output_dir(a.out);
  write_json(dir / "poles.json", j);
  Manifest m{"poles", {{"Z", a.Z}, {"kappa", a.kappa}, {"m_max", a.m_max}}, {}, {"poles.json"}};
  write_manifest(dir, m, started);

  char buf[128];
  out << "nu = " << format_double(nu) << "\n";
  if (poles.empty()) out << "no poles: " << j["note"].get<std::string>() << "\n";
  for (std::size_t k = 0; k < poles.size(); ++k) {
    std::snprintf(buf, sizeof buf, "m=%zu  sigma = %.6f %+.6fi\n", k, poles[k].real(), poles[k].imag());
    out << buf;
  }
  out << "wrote " << (dir / "poles.json").string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- scan

struct ScanArgs {
  double Z = 0.0;
  int kappa = 1;
  double mu = 0.5;
  std::optional<double> sigma_re;
  std::optional<std::string> im_range;
  int points = 60;
  int grid_n = 181;
  int threads = 1;
  std::optional<std::string> out;
};

int cmd_scan(const ScanArgs& a, std::ostream& out) {
  const std::string started = utc_now();
  const ChargeConfig cfg(a.Z);
  const AngularMode mode(a.kappa, a.mu);
  const double nu = cfg.nu(a.kappa);
  const double re = a.sigma_re.value_or(-a.Z);
  double im_lo = -(2.0 + nu) - 0.5, im_hi = -(1.0 + nu) + 0.5;
  if (a.im_range) std::tie(im_lo, im_hi) = parse_range(*a.im_range, "--sigma-im-range");
  if (a.points < 5) throw ArgumentError("--points must be at least 5");
  if (a.grid_n < 11) throw ArgumentError("--grid-n must be at least 11");

  const auto src = ModeSource::bump(0.5, 0.25, 1.0, {0.3, -0.7});
  ScanOptions opt;
  opt.x = uniform_nodes(0.05, 0.95, a.grid_n);
  opt.threads = std::max(1, a.threads);
  const auto path = line_path({re, im_lo}, {re, im_hi}, a.points);
  const auto pts = scan_resolvent_norm(cfg, mode.kappa(), src, path, opt);

  const fs::path dir = resolve_output_dir(a.out);
  {
    CsvWriter csv(dir / "scan.csv", {"sigma_re", "sigma_im", "norm", "status"});
    for (const auto& p : pts) {
      csv.row({format_double(p.sigma.real()), format_double(p.sigma.imag()), format_double(p.norm),
               p.error ? "error" : "ok"});
    }
  }

  std::vector<double> valid;
  int failures = 0;
  for (const auto& p : pts) {
    if (p.error) {
      ++failures;
    } else {
      valid.push_back(p.norm);
    }
  }
  json j;
  j["Z"] = a.Z;
  j["kappa"] = a.kappa;
  j["mu"] = a.mu;
  j["failed_points"] = failures;
  j["fits"] = json::array();
  const auto predicted = resonance_poles(cfg, a.kappa, 8);
  if (!valid.empty()) {
    std::vector<double> sorted = valid;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    j["median_norm"] = median;
    j["max_over_median"] = sorted.back() / median;
    const double step = (im_hi - im_lo) / (a.points - 1);
    // A peak is a local maximum standing 3x above the points two steps away.
    for (std::size_t i = 2; i + 2 < pts.size(); ++i) {
      bool ok = true;
      for (std::size_t k = i - 2; k <= i + 2; ++k) ok = ok && !pts[k].error;
      if (!ok) continue;
      const double n = pts[i].norm;
      if (!(n > pts[i - 1].norm && n >= pts[i + 1].norm && n > 3.0 * std::max(pts[i - 2].norm, pts[i + 2].norm)))
        continue;
      json fit;
      try {
        const double im = pts[i].sigma.imag();
        const auto pf = locate_pole(cfg, a.kappa, src, re, im - 2.0 * step, im + 2.0 * step, 9, opt);
        fit["sigma"] = complex_json(pf.sigma);
        fit["peak_norm"] = pf.peak_norm;
        if (!predicted.empty()) {
          auto it = std::min_element(predicted.begin(), predicted.end(), [&](Complex x, Complex y) {
            return std::abs(x - pf.sigma) < std::abs(y - pf.sigma);
          });
          fit["nearest_predicted"] = complex_json(*it);
          fit["distance"] = std::abs(*it - pf.sigma);
        }
      } catch (const NumericalError& e) {
        fit["error"] = e.what();
      }
      j["fits"].push_back(fit);
    }
  }
  write_json(dir / "scan_fit.json", j);
  Manifest m{"scan",
             {{"Z", a.Z},
              {"kappa", a.kappa},
              {"mu", a.mu},
              {"sigma_re", re},
              {"sigma_im_range", {im_lo, im_hi}},
              {"points", a.points},
              {"grid_n", a.grid_n},
              {"source", {{"center", 0.5}, {"half_width", 0.25}, {"f1", 1.0}, {"f2", {0.3, -0.7}}}}},
             {},
             {"scan.csv", "scan_fit.json"}};
  write_manifest(dir, m, started);

  out << "scanned " << pts.size() << " points (" << failures << " failed)\n";
  for (const auto& f : j["fits"]) {
    if (f.contains("error")) {
      out << "peak: fit failed: " << f["error"].get<std::string>() << "\n";
      continue;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "pole at %.6f %+.6fi", f["sigma"][0].get<double>(), f["sigma"][1].get<double>());
    out << buf;
    if (f.contains("distance")) out << "  (|d| to prediction " << f["distance"].get<double>() << ")";
    out << "\n";
  }
  if (j["fits"].empty()) out << "no resonance peak on the line\n";
  out << "wrote " << (dir / "scan.csv").string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- evolve

struct EvolveArgs {
  std::string config;
  std::optional<double> Z, mu, dt, t_final;
  std::optional<int> kappa, grid_n, threads;
  std::optional<std::string> window, out;
};

struct EvolveSettings {
  double Z = 0.0;
  int kappa = 1;
  double mu = 0.5;
  double dr = 0.05;
  std::optional<double> dt;
  double t_final = 0.0;
  std::optional<int> grid_n;
  Scheme scheme = Scheme::kSplitExact;
  double center = 0.0, half_width = 0.0;
  Complex amp_plus, amp_minus;
  std::vector<double> record_radii{50, 100, 150, 200, 250, 300};
  std::optional<double> s_lo, s_hi;
  int stride = 1;
  std::optional<std::pair<double, double>> window;
  int snapshot_every = 0;
  int snapshot_stride = 10;
};

const json& require(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw UsageError("config: missing field '" + where + key + "'");
  return j.at(key);
}

template <class T>
T get_as(const json& v, const std::string& name) {
  try {
    return v.get<T>();
  } catch (const json::exception&) {
    throw UsageError("config: field '" + name + "' has the wrong type");
  }
}

Complex get_complex(const json& v, const std::string& name) {
  if (v.is_number()) return get_as<double>(v, name);
  if (v.is_array() && v.size() == 2) return {get_as<double>(v[0], name), get_as<double>(v[1], name)};
  throw UsageError("config: field '" + name + "' must be a number or [re, im]");
}

EvolveSettings parse_settings(const json& j) {
  if (!j.is_object()) throw UsageError("config: top level must be an object");
  EvolveSettings s;
  s.Z = get_as<double>(require(j, "Z", ""), "Z");
  s.kappa = get_as<int>(require(j, "kappa", ""), "kappa");
  s.mu = get_as<double>(require(j, "mu", ""), "mu");
  s.dr = get_as<double>(require(j, "dr", ""), "dr");
  s.t_final = get_as<double>(require(j, "t_final", ""), "t_final");
  const json& d = require(j, "data", "");
  s.center = get_as<double>(require(d, "center", "data."), "data.center");
  s.half_width = get_as<double>(require(d, "half_width", "data."), "data.half_width");
  s.amp_plus = get_complex(require(d, "amp_plus", "data."), "data.amp_plus");
  s.amp_minus = get_complex(require(d, "amp_minus", "data."), "data.amp_minus");
  if (j.contains("dt")) s.dt = get_as<double>(j["dt"], "dt");
  if (j.contains("grid_n")) s.grid_n = get_as<int>(j["grid_n"], "grid_n");
  if (j.contains("scheme")) s.scheme = parse_scheme(get_as<std::string>(j["scheme"], "scheme"));
  if (j.contains("record_radii")) s.record_radii = get_as<std::vector<double>>(j["record_radii"], "record_radii");
  if (j.contains("extract")) {
    const json& e = j["extract"];
    if (e.contains("s_lo")) s.s_lo = get_as<double>(e["s_lo"], "extract.s_lo");
    if (e.contains("s_hi")) s.s_hi = get_as<double>(e["s_hi"], "extract.s_hi");
    if (e.contains("stride")) s.stride = get_as<int>(e["stride"], "extract.stride");
  }
  if (j.contains("window")) {
    const auto w = get_as<std::vector<double>>(j["window"], "window");
    if (w.size() != 2) throw UsageError("config: field 'window' must be [s_lo, s_hi]");
    s.window = {w[0], w[1]};
  }
  if (j.contains("snapshot_every")) s.snapshot_every = get_as<int>(j["snapshot_every"], "snapshot_every");
  if (j.contains("snapshot_stride")) s.snapshot_stride = get_as<int>(j["snapshot_stride"], "snapshot_stride");
  if (s.snapshot_stride < 1) throw UsageError("config: field 'snapshot_stride' must be positive");
  return s;
}

json spec_json(const EvolveSettings& s, const RadialGrid& g, double dt) {
  json j;
  j["Z"] = s.Z;
  j["kappa"] = s.kappa;
  j["mu"] = s.mu;
  j["dr"] = g.dr;
  j["dt"] = dt;
  j["grid_n"] = g.n;
  j["r_max"] = g.r_max();
  j["t_final"] = s.t_final;
  j["scheme"] = scheme_name(s.scheme);
  j["data"] = {{"center", s.center},
               {"half_width", s.half_width},
               {"amp_plus", complex_json(s.amp_plus)},
               {"amp_minus", complex_json(s.amp_minus)},
               {"profile", "r u = amp * exp(1 - 1/(1 - x^2)), x = (r - center)/half_width"}};
  j["record_radii"] = s.record_radii;
  j["snapshot_every"] = s.snapshot_every;
  j["snapshot_stride"] = s.snapshot_stride;
  return j;
}

int cmd_evolve(const EvolveArgs& a, std::ostream& out) {
  const std::string started = utc_now();
  json cj;
  {
    std::ifstream is(a.config);
    if (!is) throw UsageError("cannot read config file '" + a.config + "'");
    try {
      cj = json::parse(is);
    } catch (const json::parse_error& e) {
      throw UsageError(std::string("config is not valid JSON: ") + e.what());
    }
  }
  EvolveSettings s = parse_settings(cj);
  if (a.Z) s.Z = *a.Z;
  if (a.kappa) s.kappa = *a.kappa;
  if (a.mu) s.mu = *a.mu;
  if (a.dt) s.dt = *a.dt;
  if (a.t_final) s.t_final = *a.t_final;
  if (a.grid_n) s.grid_n = *a.grid_n;
  if (a.window) s.window = parse_range(*a.window, "--window");

  const ChargeConfig charge(s.Z);
  const AngularMode mode(s.kappa, s.mu);
  RadialGrid grid;
  if (s.grid_n) {
    if (*s.grid_n < 5) throw ArgumentError("grid_n must be at least 5");
    grid.dr = s.dr;
    grid.n = *s.grid_n;
  } else {
    grid = RadialGrid::covering(s.center + s.half_width + s.t_final + 10.0, s.dr);
  }
  const double dt = s.dt.value_or(s.dr);
  const auto f0 = RadialField::bump(mode, grid, s.center, s.half_width, s.amp_plus, s.amp_minus);

  EvolutionConfig ec;
  ec.charge = charge;
  ec.dt = dt;
  ec.t_final = s.t_final;
  ec.scheme = s.scheme;
  ec.snapshot_every = s.snapshot_every;
  ec.record_radii = s.record_radii;
  const Trajectory tr = forward_solve(ec, f0);

  const double r_far = *std::max_element(tr.record_radii.begin(), tr.record_radii.end());
  const double s_lo = s.s_lo.value_or(-(s.center + s.half_width) - 1.0);
  const double s_hi = s.s_hi.value_or(s.t_final - r_far);
  const auto rad = extract_radiation_field(tr, lattice_s_values(tr, s_lo, s_hi, s.stride));
  const auto samples = decay_samples(rad);

  const fs::path dir = resolve_output_dir(a.out);
  {
    CsvWriter csv(dir / "radiation.csv", {"s", "component", "re", "im"});
    for (const auto& r : rad) {
      csv.row({r.s, 0.0, r.plus.real(), r.plus.imag()});
      csv.row({r.s, 1.0, r.minus.real(), r.minus.imag()});
    }
  }
  {
    CsvWriter csv(dir / "snapshots.csv", {"t", "r", "component", "re", "im"});
    for (const auto& f : tr.snapshots) {
      const double rs = f.support_radius();
      for (int jj = 0; jj < grid.n && grid.r(jj) <= rs; jj += s.snapshot_stride) {
        const auto k = static_cast<std::size_t>(jj);
        csv.row({f.t, grid.r(jj), 0.0, f.u_plus[k].real(), f.u_plus[k].imag()});
        csv.row({f.t, grid.r(jj), 1.0, f.u_minus[k].real(), f.u_minus[k].imag()});
      }
    }
  }
  {
    CsvWriter csv(dir / "norm.csv", {"t", "norm2"});
    for (std::size_t k = 0; k < tr.norm2_history.size(); ++k)
      csv.row({tr.t0 + static_cast<double>(k) * dt, tr.norm2_history[k]});
  }

  json rep;
  const double n0 = tr.norm2_history.front();
  double drift = 0.0;
  for (double v : tr.norm2_history) drift = std::max(drift, n0 > 0 ? std::abs(std::sqrt(v / n0) - 1.0) : 0.0);
  rep["norm2_initial"] = n0;
  rep["norm_drift_max"] = drift;
  rep["radiation_norm2"] = radiation_norm2(rad, dt * s.stride);
  rep["radiation_samples"] = rad.size();

  const FitWindow win = s.window ? FitWindow{s.window->first, s.window->second} : default_window(samples);
  double conv = 0.0, pol = 0.0;
  for (const auto& r : rad) {
    if (r.s < win.s_lo || r.s > win.s_hi) continue;
    conv = std::max(conv, r.convergence);
    if (std::abs(r.plus) > 0) pol = std::max(pol, std::abs(r.minus) / std::abs(r.plus));
  }
  rep["window"] = {win.s_lo, win.s_hi};
  rep["extrapolation_convergence_max"] = conv;
  rep["polarization_ratio_max"] = pol;
  try {
    const FitResult fit = fit_power_law(samples, win);
    const auto match = compare_index_set(fit, radiation_index_set(charge, 3, 3), 0.05);
    rep["fit"] = {{"exponent", fit.exponent},
                  {"phase_slope", fit.phase_slope},
                  {"amplitude", complex_json(fit.amplitude)},
                  {"residual", fit.residual},
                  {"samples", fit.samples}};
    rep["index_match"] = {{"matched", match.matched},
                          {"gap", match.gap},
                          {"j", match.j},
                          {"k", match.k},
                          {"radiation_convention", match.nearest},
                          {"field_convention", match.nearest_field_convention},
                          {"predicted_phase_slope", s.Z}};
    char buf[200];
    std::snprintf(buf, sizeof buf, "fit on [%g, %g]: exponent %.5f (nearest index %.5f, field convention %.5f), "
                  "phase slope %.5f\n", win.s_lo, win.s_hi, fit.exponent, match.nearest,
                  match.nearest_field_convention, fit.phase_slope);
    out << buf;
  } catch (const WindowError& e) {
    rep["fit"] = {{"error", e.what()}};
    out << "fit skipped: " << e.what() << "\n";
  }
  const auto hy = huygens_test(samples, s.center + s.half_width, 5.0, 1e-6);
  rep["huygens"] = {{"passed", hy.passed},
                    {"vacuous", hy.vacuous},
                    {"threshold_s", hy.threshold_s},
                    {"peak", hy.peak},
                    {"tail_max", hy.tail_max},
                    {"tail_ratio", hy.tail_ratio}};
  write_json(dir / "fit.json", rep);

  Manifest m{"evolve", spec_json(s, grid, dt), {fs::path(a.config)},
             {"radiation.csv", "snapshots.csv", "norm.csv", "fit.json"}};
  m.parameters["extract"] = {{"s_lo", s_lo}, {"s_hi", s_hi}, {"stride", s.stride}};
  write_manifest(dir, m, started);
  out << "steps " << tr.steps << ", radiation samples " << rad.size() << ", norm drift " << drift << "\n";
  out << "huygens tail ratio " << hy.tail_ratio << (hy.passed ? " (sharp)" : " (tail present)") << "\n";
  out << "wrote " << dir.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::string& suite, int threads, std::ostream& out) {
  const auto checks = run_suite(suite, threads);
  int failed = 0;
  for (const auto& c : checks) {
    out << format_check(c) << "\n";
    if (!c.passed) ++failed;
  }
  out << checks.size() - static_cast<std::size_t>(failed) << "/" << checks.size() << " checks passed\n";
  return failed ? kExitVerification : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirac-Coulomb resonances, boundary solver and radiation-field evolution", "dcres"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  PolesArgs pa;
  auto* poles = app.add_subcommand("poles", "List resolvent poles sigma_m for a mode");
  poles->add_option("--Z", pa.Z, "Coulomb charge, |Z| < 1/2")->required();
  poles->add_option("--kappa", pa.kappa, "Angular quantum number (nonzero)")->required();
  poles->add_option("--m-max", pa.m_max, "Largest pole index")->capture_default_str();
  poles->add_option("--out", pa.out, "Output directory");

  ScanArgs sa;
  auto* scan = app.add_subcommand("scan", "Resolvent norm along a vertical line in sigma, with pole fits");
  scan->add_option("--Z", sa.Z, "Coulomb charge, |Z| < 1/2")->required();
  scan->add_option("--kappa", sa.kappa, "Angular quantum number")->required();
  scan->add_option("--mu", sa.mu, "Magnetic quantum number")->capture_default_str();
  scan->add_option("--sigma-re", sa.sigma_re, "Re sigma of the line (default -Z)");
  scan->add_option("--sigma-im-range", sa.im_range, "lo:hi for Im sigma (default covers m = 0, 1)");
  scan->add_option("--points", sa.points, "Points on the line")->capture_default_str();
  scan->add_option("--grid-n", sa.grid_n, "x nodes of each boundary solve")->capture_default_str();
  scan->add_option("--threads", sa.threads, "Worker threads")->capture_default_str();
  scan->add_option("--out", sa.out, "Output directory");

  EvolveArgs ea;
  auto* evolve = app.add_subcommand("evolve", "Evolve bump data and extract the radiation field");
  evolve->add_option("--config", ea.config, "JSON run config")->required();
  evolve->add_option("--Z", ea.Z, "Override Z");
  evolve->add_option("--kappa", ea.kappa, "Override kappa");
  evolve->add_option("--mu", ea.mu, "Override mu");
  evolve->add_option("--dt", ea.dt, "Override dt (must equal dr)");
  evolve->add_option("--t-final", ea.t_final, "Override t_final");
  evolve->add_option("--grid-n", ea.grid_n, "Override the number of radial cells");
  evolve->add_option("--window", ea.window, "Fit window lo:hi in s");
  evolve->add_option("--threads", ea.threads, "Accepted for uniformity; evolution is serial");
  evolve->add_option("--out", ea.out, "Output directory");

  std::string suite = "all";
  int vthreads = 1;
  auto* verify = app.add_subcommand("verify", "Run identity and property suites");
  verify->add_option("suite", suite, "clifford|harmonics|specfun|wronskian|residual|conservation|all")
      ->capture_default_str();
  verify->add_option("--threads", vthreads, "Worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (poles->parsed()) return cmd_poles(pa, out);
    if (scan->parsed()) return cmd_scan(sa, out);
    if (evolve->parsed()) return cmd_evolve(ea, out);
    if (verify->parsed()) {
      const auto& names = suite_names();
      if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
        throw UsageError("unknown suite '" + suite + "'");
      }
      return cmd_verify(suite, vthreads, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CflError& e) {
    err << "numerical error: " << e.what() << " (set dt equal to dr)\n";
    return kExitNumerical;
  } catch (const DomainSizeError& e) {
    err << "numerical error: " << e.what() << " (raise grid_n or lower t_final)\n";
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace dcres::tools
