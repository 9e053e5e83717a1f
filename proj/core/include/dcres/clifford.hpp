#pragma once

// Dirac and Pauli matrices in the standard (Dirac) representation, plus the
// direction-dependent radial matrices alpha_r, sigma_r and gamma^r.

#include <array>
#include <complex>
#include <cstddef>

namespace dcres {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;

class Matrix2c {
 public:
  constexpr Matrix2c() = default;
  constexpr Matrix2c(Complex a, Complex b, Complex c, Complex d) : e_{a, b, c, d} {}

  constexpr Complex& operator()(std::size_t i, std::size_t j) { return e_[2 * i + j]; }
  constexpr const Complex& operator()(std::size_t i, std::size_t j) const { return e_[2 * i + j]; }

  static constexpr Matrix2c identity() { return {1.0, 0.0, 0.0, 1.0}; }

 private:
  std::array<Complex, 4> e_{};
};

class Spinor4 {
 public:
  constexpr Spinor4() = default;
  constexpr Spinor4(Complex a, Complex b, Complex c, Complex d) : c_{a, b, c, d} {}

  constexpr Complex& operator[](std::size_t i) { return c_[i]; }
  constexpr const Complex& operator[](std::size_t i) const { return c_[i]; }

  /// Sum of squared moduli.
  double norm2() const;
  /// Hermitian pairing, antilinear in the first argument.
  Complex inner(const Spinor4& other) const;

  Spinor4& operator+=(const Spinor4& o);
  Spinor4& operator-=(const Spinor4& o);
  Spinor4& operator*=(Complex s);

 private:
  std::array<Complex, 4> c_{};
};

Spinor4 operator+(Spinor4 a, const Spinor4& b);
Spinor4 operator-(Spinor4 a, const Spinor4& b);
Spinor4 operator*(Complex s, Spinor4 a);

class Matrix4c {
 public:
  constexpr Matrix4c() = default;

  constexpr Complex& operator()(std::size_t i, std::size_t j) { return e_[4 * i + j]; }
  constexpr const Complex& operator()(std::size_t i, std::size_t j) const { return e_[4 * i + j]; }

  static Matrix4c identity();
  static Matrix4c zero() { return {}; }
  /// Block matrix [[a, b], [c, d]] with 2x2 blocks.
  static Matrix4c from_blocks(const Matrix2c& a, const Matrix2c& b, const Matrix2c& c,
                              const Matrix2c& d);

  Matrix4c adjoint() const;
  /// Largest entry modulus.
  double max_abs() const;

  Matrix4c& operator+=(const Matrix4c& o);
  Matrix4c& operator-=(const Matrix4c& o);
  Matrix4c& operator*=(Complex s);

 private:
  std::array<Complex, 16> e_{};
};

Matrix4c operator+(Matrix4c a, const Matrix4c& b);
Matrix4c operator-(Matrix4c a, const Matrix4c& b);
Matrix4c operator*(Complex s, Matrix4c a);
Matrix4c operator*(const Matrix4c& a, const Matrix4c& b);
Spinor4 operator*(const Matrix4c& a, const Spinor4& v);

/// Components of the inverse Minkowski metric, signature (-,+,+,+).
struct MinkowskiMetric {
  static constexpr double component(int alpha, int beta) {
    if (alpha != beta) return 0.0;
    return alpha == 0 ? -1.0 : 1.0;
  }
};

/// Pauli matrix sigma_j, j in {1,2,3}.
Matrix2c pauli(int j);

/// gamma^index for index in {0,1,2,3}. Throws ArgumentError otherwise.
Matrix4c dirac_matrix(int index);

/// beta = gamma^0.
Matrix4c beta();
/// alpha_j, defined by gamma^j = beta alpha_j.
Matrix4c alpha(int j);
/// Sigma_j = diag(sigma_j, sigma_j).
Matrix4c spin_matrix(int j);

/// Radial versions: sum_j d_j M_j for a unit direction d (|d| = 1 within 1e-12).
Matrix4c alpha_r(const Vec3& direction);
Matrix4c gamma_r(const Vec3& direction);
Matrix2c sigma_r(const Vec3& direction);

Matrix4c anticommutator(const Matrix4c& a, const Matrix4c& b);

struct AnticommutationReport {
  /// max over all (alpha, beta) of |g^a g^b + g^b g^a + 2 eta^{ab} I|.
  double max_deviation = 0.0;
  /// The raw anticommutators, indexed [alpha][beta].
  std::array<std::array<Matrix4c, 4>, 4> anticommutators{};
};

AnticommutationReport check_anticommutation();

}  // namespace dcres
