// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
//
// Euclidean gamma matrices in two dimensions and 2x2 complex matrix calculus.
#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>

namespace sqf {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

/// 2x2 complex matrix acting on two-component Dirac spinors.
class SpinMatrix {
 public:
  constexpr SpinMatrix() = default;
  constexpr SpinMatrix(Complex m00, Complex m01, Complex m10, Complex m11)
      : m_{m00, m01, m10, m11} {}

  static constexpr SpinMatrix identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr SpinMatrix zero() { return {}; }
  static constexpr SpinMatrix scalar(Complex s) { return {s, 0.0, 0.0, s}; }

  constexpr Complex operator()(int a, int b) const { return m_[2 * a + b]; }
  constexpr Complex& operator()(int a, int b) { return m_[2 * a + b]; }

  SpinMatrix adjoint() const;
  SpinMatrix transpose() const;
  SpinMatrix conj() const;
  Complex trace() const { return m_[0] + m_[3]; }
  Complex det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }
  SpinMatrix inverse() const;

  /// Largest entry modulus.
  double max_abs() const;
  double frobenius_norm() const;
  bool is_finite() const;

  SpinMatrix& operator+=(const SpinMatrix& o);
  SpinMatrix& operator-=(const SpinMatrix& o);
  SpinMatrix& operator*=(Complex s);

  friend SpinMatrix operator+(SpinMatrix a, const SpinMatrix& b) { return a += b; }
  friend SpinMatrix operator-(SpinMatrix a, const SpinMatrix& b) { return a -= b; }
  friend SpinMatrix operator-(SpinMatrix a) { return a *= -1.0; }
  friend SpinMatrix operator*(SpinMatrix a, Complex s) { return a *= s; }
  friend SpinMatrix operator*(Complex s, SpinMatrix a) { return a *= s; }
  friend SpinMatrix operator*(const SpinMatrix& a, const SpinMatrix& b);
  friend bool operator==(const SpinMatrix&, const SpinMatrix&) = default;

 private:
  std::array<Complex, 4> m_{};
};

/// Euclidean Clifford generators in the Pauli representation.
struct GammaRep {
  SpinMatrix gamma1;
  SpinMatrix gamma2;
  SpinMatrix gamma3;

  const SpinMatrix& operator[](int i) const;
};

struct Momentum2 {
  double p1 = 0.0;
  double p2 = 0.0;

  double norm2() const { return p1 * p1 + p2 * p2; }
  double norm() const;
  Momentum2 operator-() const { return {-p1, -p2}; }
  friend bool operator==(const Momentum2&, const Momentum2&) = default;
};

GammaRep build_gamma();

/// Feynman slash p1*gamma1 + p2*gamma2.
SpinMatrix slash(const Momentum2& p, const GammaRep& rep = build_gamma());

/// exp(-A t) through the Clifford decomposition A = alpha I + b.gamma.
/// Throws std::domain_error on non-finite input.
SpinMatrix mat_exp(const SpinMatrix& a, double t);

/// Max-abs residuals of every GammaRep identity, keyed by identity name.
std::map<std::string, double> gamma_residuals(const GammaRep& rep);

}  // namespace sqf
