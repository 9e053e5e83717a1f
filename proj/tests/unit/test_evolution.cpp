#include <gtest/gtest.h>

#include <cmath>

#include "dcres/errors.hpp"
#include "dcres/evolution.hpp"

using namespace dcres;

namespace {

// psi = u+(r) V+ + u-(r) V- with V+- the alpha_r = +-1 angular spinors.
struct SeparatedSpinor {
  AngularMode mode;
  Complex (*up)(double);
  Complex (*um)(double);

  Spinor4 operator()(const Vec3& x) const {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const auto p = SpherePoint::from_direction({x[0] / r, x[1] / r, x[2] / r});
    return up(r) * k_eigenvector(mode, BlockSign::kMinus, p) + um(r) * k_eigenvector(mode, BlockSign::kPlus, p);
  }
};

Complex prof_p(double r) { return Complex(1.0, 0.3) * std::exp(-(r - 2.0) * (r - 2.0)); }
Complex dprof_p(double r) { return -2.0 * (r - 2.0) * prof_p(r); }
Complex prof_m(double r) { return Complex(-0.4, 0.9) * r * std::exp(-r); }
Complex dprof_m(double r) { return Complex(-0.4, 0.9) * (1.0 - r) * std::exp(-r); }

RadialField bump_field(double radius, double dr, int kappa = 1) {
  const auto g = RadialGrid::covering(radius, dr);
  return RadialField::bump(AngularMode(kappa, 0.5), g, 3.0, 1.0, 1.0, {0.0, -0.5});
}

}  // namespace

// d_t psi = -sum_j alpha_j d_j psi - i(Z/r) psi, differenced in Cartesian
// coordinates, against the radial system applied to the profiles.
TEST(RadialOperator, MatchesFullOperatorOnSeparatedSpinors) {
  for (int kappa : {1, -1, 2, -2}) {
    for (double Z : {0.0, 0.3}) {
      const ChargeConfig cfg(Z);
      const AngularMode mode(kappa, 0.5);
      const SeparatedSpinor psi{mode, prof_p, prof_m};
      const auto pts = sample_points(50);
      double worst = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double r = 0.5 + 0.07 * static_cast<double>(i);
        const Vec3 d = pts[i].unit_vector();
        const Vec3 x{r * d[0], r * d[1], r * d[2]};
        const double h = 1e-3;
        Spinor4 lhs;
        for (int j = 0; j < 3; ++j) {
          Vec3 p1 = x, m1 = x, p2 = x, m2 = x;
          p1[j] += h;
          m1[j] -= h;
          p2[j] += 2 * h;
          m2[j] -= 2 * h;
          const Spinor4 dj = (1.0 / (12.0 * h)) * (psi(m2) - 8.0 * psi(m1) + 8.0 * psi(p1) - psi(p2));
          lhs -= alpha(j + 1) * dj;
        }
        lhs -= Complex(0.0, Z / r) * psi(x);
        Complex tp, tm;
        radial_time_derivative(cfg, kappa, r, prof_p(r), prof_m(r), dprof_p(r), dprof_m(r), tp, tm);
        const Spinor4 rhs = tp * k_eigenvector(mode, BlockSign::kMinus, pts[i]) +
                            tm * k_eigenvector(mode, BlockSign::kPlus, pts[i]);
        worst = std::max(worst, std::sqrt((lhs - rhs).norm2() / rhs.norm2()));
      }
      EXPECT_LT(worst, 1e-6) << "kappa " << kappa << " Z " << Z;
    }
  }
}

TEST(RadialOperator, GridVersionAndChargeTerm) {
  const auto g = RadialGrid::covering(8.0, 0.01);
  RadialField f = RadialField::zero(AngularMode(-2, 0.5), g);
  for (int j = 0; j < g.n; ++j) {
    f.u_plus[static_cast<std::size_t>(j)] = prof_p(g.r(j));
    f.u_minus[static_cast<std::size_t>(j)] = prof_m(g.r(j));
  }
  const auto h0 = apply_radial_hamiltonian(ChargeConfig(0.0), f);
  const auto h3 = apply_radial_hamiltonian(ChargeConfig(0.3), f);
  double worst = 0.0, zterm = 0.0;
  for (int j = 20; j < g.n - 20; ++j) {
    const auto k = static_cast<std::size_t>(j);
    const double r = g.r(j);
    Complex tp, tm;
    radial_time_derivative(ChargeConfig(0.0), -2, r, prof_p(r), prof_m(r), dprof_p(r), dprof_m(r), tp, tm);
    worst = std::max(worst, std::abs(h0.u_plus[k] - tp) + std::abs(h0.u_minus[k] - tm));
    // the charge enters additively as -i(Z/r) u
    zterm = std::max(zterm, std::abs(h3.u_plus[k] - h0.u_plus[k] + Complex(0.0, 0.3 / r) * f.u_plus[k]));
  }
  EXPECT_LT(worst, 1e-7);
  EXPECT_LT(zterm, 1e-13);
  const auto hz = apply_radial_hamiltonian(ChargeConfig(0.3), RadialField::zero(AngularMode(1, 0.5), g));
  for (const auto& v : hz.u_plus) EXPECT_EQ(v, Complex(0.0));
}

TEST(Step, CflRefusal) {
  RadialField f = bump_field(20.0, 0.05);
  EXPECT_THROW(step(f, ChargeConfig(0.1), 0.04), CflError);
  EXPECT_THROW(step(f, ChargeConfig(0.1), 0.06), CflError);
  EXPECT_NO_THROW(step(f, ChargeConfig(0.1), 0.05));
}

TEST(Step, ForwardBackwardIsIdentity) {
  for (Scheme s : {Scheme::kSplitExact, Scheme::kCayley}) {
    const RadialField f0 = bump_field(20.0, 0.05, -1);
    RadialField f = f0;
    const ChargeConfig cfg(0.3);
    for (int k = 0; k < 150; ++k) step(f, cfg, 0.05, s);
    for (int k = 0; k < 150; ++k) step(f, cfg, -0.05, s);
    EXPECT_NEAR(f.t, 0.0, 1e-12);
    for (std::size_t j = 0; j < f.u_plus.size(); ++j) {
      EXPECT_LT(std::abs(f.u_plus[j] - f0.u_plus[j]), 1e-9);
      EXPECT_LT(std::abs(f.u_minus[j] - f0.u_minus[j]), 1e-9);
    }
  }
}

TEST(Step, NormConservedOverTen) {
  RadialField f = bump_field(30.0, 0.05, 2);
  const double n0 = f.norm2();
  for (int k = 0; k < 200; ++k) {
    const double before = f.norm2();
    step(f, ChargeConfig(0.45), 0.05);
    EXPECT_LT(std::abs(f.norm2() - before) / before, 1e-10);
  }
  EXPECT_LT(std::abs(std::sqrt(f.norm2() / n0) - 1.0), 1e-6);
}

TEST(Step, FreeOutgoingPacketTranslates) {
  // Z = 0, kappa = -1: at large r the coupling is negligible and U+ = r u+ moves at speed one.
  const auto g = RadialGrid::covering(200.0, 0.05);
  const RadialField f0 = RadialField::bump(AngularMode(-1, 0.5), g, 100.0, 2.0, 1.0, 0.0);
  RadialField f = f0;
  for (int k = 0; k < 400; ++k) step(f, ChargeConfig(0.0), 0.05);
  double worst = 0.0, peak = 0.0;
  for (int j = 0; j + 400 < g.n; ++j) {
    const auto a = static_cast<std::size_t>(j), b = static_cast<std::size_t>(j + 400);
    const Complex U0 = g.r(j) * f0.u_plus[a], U1 = g.r(j + 400) * f.u_plus[b];
    worst = std::max(worst, std::abs(U1 - U0));
    peak = std::max(peak, std::abs(U0));
  }
  // the coupling sheds an incoming wave of relative size O(kappa w / r^2)
  EXPECT_LT(worst / peak, 5e-3);
  EXPECT_NEAR(f.support_radius() - f0.support_radius(), 20.0, 1e-9);
}

TEST(ForwardSolve, ZeroDataStaysZero) {
  EvolutionConfig c;
  c.t_final = 5.0;
  c.record_radii = {2.0, 4.0};
  const auto g = RadialGrid::covering(20.0, 0.05);
  const auto tr = forward_solve(c, RadialField::zero(AngularMode(1, 0.5), g));
  for (double v : tr.norm2_history) EXPECT_EQ(v, 0.0);
  const auto rad = extract_radiation_field(tr, lattice_s_values(tr, -1.0, 0.0), {2});
  for (const auto& r : rad) EXPECT_EQ(r.plus, Complex(0.0));
}

TEST(ForwardSolve, DomainSizeCheckedBeforeStepping) {
  EvolutionConfig c;
  c.t_final = 50.0;
  c.record_radii = {10.0};
  const auto f = bump_field(40.0, 0.05);
  EXPECT_THROW(forward_solve(c, f), DomainSizeError);
  c.dt = 0.025;
  EXPECT_THROW(forward_solve(c, f), CflError);
}

TEST(ForwardSolve, FiniteSpeedAndConservation) {
  EvolutionConfig c;
  c.charge = ChargeConfig(0.3);
  c.t_final = 40.0;
  c.record_radii = {10.0, 20.0};
  c.snapshot_every = 100;
  const auto f = bump_field(60.0, 0.05, 1);
  const auto tr = forward_solve(c, f);
  EXPECT_EQ(tr.steps, 800);
  EXPECT_EQ(tr.snapshots.size(), 9u);
  for (std::size_t k = 0; k < tr.support_history.size(); ++k) {
    EXPECT_LE(tr.support_history[k], tr.initial_support + static_cast<double>(k) * 0.05 + 1e-9);
    EXPECT_LT(std::abs(tr.norm2_history[k] / tr.norm2_history[0] - 1.0), 1e-12);
  }
  EXPECT_NEAR(tr.final_field.t, 40.0, 1e-12);
}

TEST(Extraction, NeedsEnoughRadii) {
  EvolutionConfig c;
  c.t_final = 12.0;
  c.record_radii = {5.0, 10.0};
  const auto tr = forward_solve(c, bump_field(30.0, 0.05));
  EXPECT_THROW(extract_radiation_field(tr, {0.0}), AccuracyError);
  EXPECT_NO_THROW(extract_radiation_field(tr, {0.0}, {2}));
  EXPECT_THROW(extract_radiation_field(tr, {5.0}, {2}), AccuracyError);  // r = 10 reaches s = 2 only
}

TEST(Extraction, ExactForPureInverseSeries) {
  // Synthetic record: U = (2r/(t+r)) rho^{-iZ} (A + B h + C h^2), h = 1/(t+r),
  // is extrapolated exactly to A with three or more radii.
  Trajectory tr;
  tr.Z = 0.2;
  tr.dt = 0.5;
  tr.grid.dr = 0.5;
  tr.grid.n = 400;
  for (int j : {40, 80, 120, 160}) {
    tr.record_cells.push_back(j);
    tr.record_radii.push_back(tr.grid.r(j));
  }
  tr.record_plus.resize(4);
  tr.record_minus.resize(4);
  const Complex A(0.7, -0.2), B(3.0, 1.0), C(-20.0, 4.0);
  for (std::size_t i = 0; i < 4; ++i) {
    for (int n = 0; n < 300; ++n) {
      const double t = (n + 1) * tr.dt, r = tr.record_radii[i], h = 1.0 / (t + r), rho = 0.5 * (t + r);
      const Complex v = (r / rho) * std::exp(Complex(0.0, -tr.Z * std::log(rho))) * (A + B * h + C * h * h);
      tr.record_plus[i].push_back(v);
      tr.record_minus[i].push_back(0.0);
    }
  }
  const auto rad = extract_radiation_field(tr, {0.25, 10.25, 30.25});
  for (const auto& x : rad) {
    EXPECT_LT(std::abs(x.plus - A), 1e-12);
    EXPECT_EQ(x.radii_used, 4);
    EXPECT_LT(x.convergence, 1e-12);
  }
}

TEST(Extraction, LatticeValues) {
  Trajectory tr;
  tr.grid.dr = 0.05;
  tr.dt = 0.05;
  const auto s = lattice_s_values(tr, 0.0, 0.2);
  ASSERT_EQ(s.size(), 4u);
  EXPECT_NEAR(s[0], 0.025, 1e-15);
  EXPECT_NEAR(s[3], 0.175, 1e-15);
  EXPECT_EQ(lattice_s_values(tr, 0.0, 1.0, 5).size(), 4u);
}

TEST(Scheme, Names) {
  EXPECT_EQ(parse_scheme("cayley"), Scheme::kCayley);
  EXPECT_EQ(parse_scheme(scheme_name(Scheme::kSplitExact)), Scheme::kSplitExact);
  EXPECT_THROW(parse_scheme("leapfrog"), ArgumentError);
  EXPECT_NEAR(std::abs(origin_reflection(ChargeConfig(0.4), -2)), 1.0, 1e-15);
}
