#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dcres/errors.hpp"
#include "dcres/spinor_harmonics.hpp"

using namespace dcres;

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;

Spinor2 mat_vec(const Matrix2c& m, const Spinor2& v) {
  return {m(0, 0) * v[0] + m(0, 1) * v[1], m(1, 0) * v[0] + m(1, 1) * v[1]};
}
}  // namespace

TEST(AngularMode, Labels) {
  EXPECT_EQ(AngularMode(1, 0.5).l(), 1);
  EXPECT_EQ(AngularMode(-1, 0.5).l(), 0);
  EXPECT_EQ(AngularMode(-3, 2.5).l(), 2);
  EXPECT_EQ(admissible_modes(2).size(), 4u);
  EXPECT_EQ(AngularMode(2, 1.5).partner(), AngularMode(-2, 1.5));
  EXPECT_THROW(AngularMode(0, 0.5), ArgumentError);
  EXPECT_THROW(AngularMode(1, 1.5), ArgumentError);
  EXPECT_THROW(AngularMode(1, 1.0), ArgumentError);
}

TEST(SpinorHarmonics, UnsoldSum) {
  // sum_mu |Omega_{kappa,mu}|^2 = (2j + 1) / 4pi with j = |kappa| - 1/2.
  for (int kappa : {1, -1, 2, -3}) {
    for (const auto& p : sample_points(12)) {
      double s = 0.0;
      for (const auto& m : admissible_modes(kappa)) {
        const Spinor2 o = omega(m, p);
        s += std::norm(o[0]) + std::norm(o[1]);
      }
      EXPECT_NEAR(s, 2.0 * std::abs(kappa) / kFourPi, 1e-14) << kappa;
    }
  }
}

TEST(SpinorHarmonics, SigmaRSwapsKappa) {
  for (int kappa : {1, -1, 2, -2}) {
    for (const auto& m : admissible_modes(kappa)) {
      for (const auto& p : sample_points(10)) {
        const Spinor2 a = mat_vec(sigma_r(p.unit_vector()), omega(m, p));
        const Spinor2 b = omega(m.partner(), p);
        EXPECT_NEAR(std::abs(a[0] + b[0]) + std::abs(a[1] + b[1]), 0.0, 1e-14);
      }
    }
  }
}

TEST(SpinorHarmonics, AlphaRActionRule) {
  const auto pts = sample_points(30);
  for (int kappa : {1, -2, 3})
    for (const auto& m : admissible_modes(kappa))
      EXPECT_LT(alpha_r_action_deviation(m, {1.0, 0.5}, {-0.25, 2.0}, pts), 1e-14);
  EXPECT_EQ(alpha_r_eigenvalue(BlockSign::kPlus), -1);
  EXPECT_EQ(alpha_r_eigenvalue(BlockSign::kMinus), 1);
}

TEST(SpinorHarmonics, LaplacianIdentity) {
  for (int kappa : {1, -1, 2, -2, 3}) {
    const auto r = verify_laplacian_identity(AngularMode(kappa, 0.5), 30);
    EXPECT_LT(r.spectral_deviation, 1e-12);
    EXPECT_LT(r.differential_deviation, 1e-6);
  }
}

TEST(SpinorHarmonics, QuadratureExactness) {
  const auto q = SphereQuadrature::for_degree(8);
  EXPECT_NEAR(q.integrate([](SpherePoint) { return 1.0; }), kFourPi, 1e-13);
  // int cos^8(theta) = 4pi/9
  EXPECT_NEAR(q.integrate([](SpherePoint p) { return std::pow(std::cos(p.theta), 8); }), kFourPi / 9.0, 1e-13);
}

TEST(SpinorHarmonics, DecompositionRecoversCoefficients) {
  const AngularMode m1(2, -0.5), m2(-1, 0.5);
  const auto q = SphereQuadrature::for_degree(10);
  const auto f = SampledSpinorField::sample(q, [&](SpherePoint p) {
    return Complex(0.5, 1.0) * k_eigenvector(m1, BlockSign::kPlus, p) +
           Complex(-2.0, 0.0) * k_eigenvector(m2, BlockSign::kMinus, p);
  });
  const auto dec = decompose_k_basis(f, 3);
  EXPECT_LT(dec.relative_residual, 1e-12);
  const Complex c1(0.5, 1.0), c2(-2.0, 0.0);
  int nonzero = 0;
  for (const auto& t : dec.terms) {
    EXPECT_EQ(t.k_eigenvalue, t.upper ? -t.mode.kappa() : t.mode.kappa());
    if (std::abs(t.coefficient) < 1e-12) continue;
    ++nonzero;
    Complex expect;
    if (t.mode == m1 && t.upper) expect = c1;
    if (t.mode == m1.partner() && !t.upper) expect = c1;
    if (t.mode == m2 && t.upper) expect = c2;
    if (t.mode == m2.partner() && !t.upper) expect = -c2;
    EXPECT_LT(std::abs(t.coefficient - expect), 1e-12);
  }
  EXPECT_EQ(nonzero, 4);
}

TEST(SpinorHarmonics, KOperatorRefusesUnresolvedField) {
  const auto q = SphereQuadrature::for_degree(10);
  const auto f = SampledSpinorField::sample(
      q, [&](SpherePoint p) { return k_eigenvector(AngularMode(3, 0.5), BlockSign::kPlus, p); });
  EXPECT_THROW(apply_k_operator(f, 2), DecompositionError);
  const auto kf = apply_k_operator(f, 3);
  const auto expect = SampledSpinorField::sample(
      q, [&](SpherePoint p) { return -3.0 * k_eigenvector(AngularMode(3, 0.5), BlockSign::kPlus, p); });
  EXPECT_LT(kf.max_abs_difference(expect), 1e-12);
}
