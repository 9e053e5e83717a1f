#include "dcres/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dcres/errors.hpp"

namespace dcres {

namespace {

constexpr Complex kI{0.0, 1.0};

Matrix2c scaled(const Matrix2c& m, Complex s) {
  return {s * m(0, 0), s * m(0, 1), s * m(1, 0), s * m(1, 1)};
}

void require_unit(const Vec3& d) {
  const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
  if (!(std::abs(n - 1.0) <= 1e-12)) {
    throw ArgumentError("direction must be a unit vector, |d| = " + std::to_string(n));
  }
}

}  // namespace

double Spinor4::norm2() const {
  double s = 0.0;
  for (const auto& z : c_) s += std::norm(z);
  return s;
}

Complex Spinor4::inner(const Spinor4& other) const {
  Complex s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) s += std::conj(c_[i]) * other.c_[i];
  return s;
}

Spinor4& Spinor4::operator+=(const Spinor4& o) {
  for (std::size_t i = 0; i < 4; ++i) c_[i] += o.c_[i];
  return *this;
}

Spinor4& Spinor4::operator-=(const Spinor4& o) {
  for (std::size_t i = 0; i < 4; ++i) c_[i] -= o.c_[i];
  return *this;
}

Spinor4& Spinor4::operator*=(Complex s) {
  for (auto& z : c_) z *= s;
  return *this;
}

Spinor4 operator+(Spinor4 a, const Spinor4& b) { return a += b; }
Spinor4 operator-(Spinor4 a, const Spinor4& b) { return a -= b; }
Spinor4 operator*(Complex s, Spinor4 a) { return a *= s; }

Matrix4c Matrix4c::identity() {
  Matrix4c m;
  for (std::size_t i = 0; i < 4; ++i) m(i, i) = 1.0;
  return m;
}

Matrix4c Matrix4c::from_blocks(const Matrix2c& a, const Matrix2c& b, const Matrix2c& c,
                               const Matrix2c& d) {
  Matrix4c m;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      m(i, j) = a(i, j);
      m(i, j + 2) = b(i, j);
      m(i + 2, j) = c(i, j);
      m(i + 2, j + 2) = d(i, j);
    }
  }
  return m;
}

Matrix4c Matrix4c::adjoint() const {
  Matrix4c m;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) m(i, j) = std::conj((*this)(j, i));
  return m;
}

double Matrix4c::max_abs() const {
  double m = 0.0;
  for (const auto& z : e_) m = std::max(m, std::abs(z));
  return m;
}

Matrix4c& Matrix4c::operator+=(const Matrix4c& o) {
  for (std::size_t i = 0; i < 16; ++i) e_[i] += o.e_[i];
  return *this;
}

Matrix4c& Matrix4c::operator-=(const Matrix4c& o) {
  for (std::size_t i = 0; i < 16; ++i) e_[i] -= o.e_[i];
  return *this;
}

Matrix4c& Matrix4c::operator*=(Complex s) {
  for (auto& z : e_) z *= s;
  return *this;
}

Matrix4c operator+(Matrix4c a, const Matrix4c& b) { return a += b; }
Matrix4c operator-(Matrix4c a, const Matrix4c& b) { return a -= b; }
Matrix4c operator*(Complex s, Matrix4c a) { return a *= s; }

Matrix4c operator*(const Matrix4c& a, const Matrix4c& b) {
  Matrix4c m;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < 4; ++j) m(i, j) += aik * b(k, j);
    }
  return m;
}

Spinor4 operator*(const Matrix4c& a, const Spinor4& v) {
  Spinor4 out;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out[i] += a(i, j) * v[j];
  return out;
}

Matrix2c pauli(int j) {
  switch (j) {
    case 1: return {0.0, 1.0, 1.0, 0.0};
    case 2: return {0.0, -kI, kI, 0.0};
    case 3: return {1.0, 0.0, 0.0, -1.0};
    default: throw ArgumentError("Pauli index must be 1, 2 or 3, got " + std::to_string(j));
  }
}

Matrix4c dirac_matrix(int index) {
  const Matrix2c zero{};
  if (index == 0) {
    return Matrix4c::from_blocks(Matrix2c::identity(), zero, zero, scaled(Matrix2c::identity(), -1.0));
  }
  if (index < 0 || index > 3) {
    throw ArgumentError("Dirac matrix index must be in 0..3, got " + std::to_string(index));
  }
  const Matrix2c s = pauli(index);
  return Matrix4c::from_blocks(zero, s, scaled(s, -1.0), zero);
}

Matrix4c beta() { return dirac_matrix(0); }

Matrix4c alpha(int j) {
  const Matrix2c s = pauli(j);
  const Matrix2c zero{};
  return Matrix4c::from_blocks(zero, s, s, zero);
}

Matrix4c spin_matrix(int j) {
  const Matrix2c s = pauli(j);
  const Matrix2c zero{};
  return Matrix4c::from_blocks(s, zero, zero, s);
}

Matrix4c alpha_r(const Vec3& direction) {
  require_unit(direction);
  Matrix4c m;
  for (int j = 1; j <= 3; ++j) m += direction[j - 1] * alpha(j);
  return m;
}

Matrix4c gamma_r(const Vec3& direction) {
  require_unit(direction);
  Matrix4c m;
  for (int j = 1; j <= 3; ++j) m += direction[j - 1] * dirac_matrix(j);
  return m;
}

Matrix2c sigma_r(const Vec3& direction) {
  require_unit(direction);
  Matrix2c m;
  for (int j = 1; j <= 3; ++j) {
    const Matrix2c s = pauli(j);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) m(a, b) += direction[j - 1] * s(a, b);
  }
  return m;
}

Matrix4c anticommutator(const Matrix4c& a, const Matrix4c& b) { return a * b + b * a; }

AnticommutationReport check_anticommutation() {
  AnticommutationReport report;
  std::array<Matrix4c, 4> g;
  for (int a = 0; a < 4; ++a) g[a] = dirac_matrix(a);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const Matrix4c ac = anticommutator(g[a], g[b]);
      report.anticommutators[a][b] = ac;
      const Matrix4c dev = ac + (2.0 * MinkowskiMetric::component(a, b)) * Matrix4c::identity();
      report.max_deviation = std::max(report.max_deviation, dev.max_abs());
    }
  }
  return report;
}

}  // namespace dcres
