// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
#include "sqf/spinor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sqf {

SpinMatrix SpinMatrix::adjoint() const {
  return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
}

SpinMatrix SpinMatrix::transpose() const { return {m_[0], m_[2], m_[1], m_[3]}; }

SpinMatrix SpinMatrix::conj() const {
  return {std::conj(m_[0]), std::conj(m_[1]), std::conj(m_[2]), std::conj(m_[3])};
}

SpinMatrix SpinMatrix::inverse() const {
  const Complex d = det();
  if (d == Complex{}) throw std::domain_error("SpinMatrix::inverse: singular matrix");
  return {m_[3] / d, -m_[1] / d, -m_[2] / d, m_[0] / d};
}

double SpinMatrix::max_abs() const {
  double r = 0.0;
  for (const auto& z : m_) r = std::max(r, std::abs(z));
  return r;
}

double SpinMatrix::frobenius_norm() const {
  double r = 0.0;
  for (const auto& z : m_) r += std::norm(z);
  return std::sqrt(r);
}

bool SpinMatrix::is_finite() const {
  return std::all_of(m_.begin(), m_.end(), [](Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

SpinMatrix& SpinMatrix::operator+=(const SpinMatrix& o) {
  for (int i = 0; i < 4; ++i) m_[i] += o.m_[i];
  return *this;
}

SpinMatrix& SpinMatrix::operator-=(const SpinMatrix& o) {
  for (int i = 0; i < 4; ++i) m_[i] -= o.m_[i];
  return *this;
}

SpinMatrix& SpinMatrix::operator*=(Complex s) {
  for (auto& z : m_) z *= s;
  return *this;
}

SpinMatrix operator*(const SpinMatrix& a, const SpinMatrix& b) {
  return {a.m_[0] * b.m_[0] + a.m_[1] * b.m_[2], a.m_[0] * b.m_[1] + a.m_[1] * b.m_[3],
          a.m_[2] * b.m_[0] + a.m_[3] * b.m_[2], a.m_[2] * b.m_[1] + a.m_[3] * b.m_[3]};
}

const SpinMatrix& GammaRep::operator[](int i) const {
  switch (i) {
    case 1: return gamma1;
    case 2: return gamma2;
    case 3: return gamma3;
    default: throw std::out_of_range("GammaRep: index must be 1, 2 or 3");
  }
}

double Momentum2::norm() const { return std::hypot(p1, p2); }

GammaRep build_gamma() {
  return {SpinMatrix{0.0, 1.0, 1.0, 0.0}, SpinMatrix{0.0, -kI, kI, 0.0},
          SpinMatrix{1.0, 0.0, 0.0, -1.0}};
}

SpinMatrix slash(const Momentum2& p, const GammaRep& rep) {
  return rep.gamma1 * p.p1 + rep.gamma2 * p.p2;
}

SpinMatrix mat_exp(const SpinMatrix& a, double t) {
  if (!a.is_finite() || !std::isfinite(t)) throw std::domain_error("mat_exp: non-finite input");
  static const GammaRep g = build_gamma();
  // Any 2x2 matrix is alpha I + b_k gamma_k; (b.gamma)^2 = (b.b) I.
  const Complex alpha = 0.5 * a.trace();
  SpinMatrix b_gamma = a - SpinMatrix::scalar(alpha);
  Complex beta2{};
  for (int k = 1; k <= 3; ++k) {
    const Complex bk = 0.5 * (a * g[k]).trace();
    beta2 += bk * bk;
  }
  const Complex beta = std::sqrt(beta2);
  const Complex bt = beta * t;
  Complex sinhc;  // sinh(beta t) / beta
  if (std::abs(bt) < 1e-4) {
    const Complex x2 = bt * bt;
    sinhc = t * (1.0 + x2 / 6.0 + x2 * x2 / 120.0);
  } else {
    sinhc = std::sinh(bt) / beta;
  }
  return std::exp(-alpha * t) * (SpinMatrix::scalar(std::cosh(bt)) - b_gamma * sinhc);
}

std::map<std::string, double> gamma_residuals(const GammaRep& rep) {
  std::map<std::string, double> out;
  double anti = 0.0;
  double herm = 0.0;
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      const SpinMatrix ac = rep[i] * rep[j] + rep[j] * rep[i];
      const SpinMatrix want = SpinMatrix::scalar(i == j ? 2.0 : 0.0);
      anti = std::max(anti, (ac - want).max_abs());
    }
    herm = std::max(herm, (rep[i].adjoint() - rep[i]).max_abs());
  }
  out["anticommutator"] = anti;
  out["hermiticity"] = herm;
  out["gamma3_product"] = (rep.gamma3 - (-kI) * (rep.gamma1 * rep.gamma2)).max_abs();
  out["gamma1_symmetric"] = (rep.gamma1.transpose() - rep.gamma1).max_abs();
  return out;
}

}  // namespace sqf
