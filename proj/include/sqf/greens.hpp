// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
//
// Momentum-space Euclidean propagator and retarded Langevin kernels.
//
// All kernels are closed-form matrix exponentials in stochastic time:
//   G(t,p)    = theta(t) exp(-(m + i pslash) t)
//   Gbar(t,p) = theta(t) exp(-(m - i pslash^T) t)
//   P(t,p)    = theta(t) exp(-(p^2 + M^2) t)
// They follow from closing the frequency contour on the poles in the upper
// half plane; for t < 0 the contour closes below and no pole is enclosed.
#pragma once

#include <array>

#include "sqf/quadrature.hpp"
#include "sqf/spinor.hpp"

namespace sqf {

struct ModelParams {
  double m = 1.0;  // fermion mass
  double M = 1.0;  // boson mass
  double g = 0.0;  // Yukawa coupling

  /// Throws std::invalid_argument unless m > 0 and M > 0.
  void validate() const;
};

/// (-i pslash + m) / (p^2 + m^2). Throws std::domain_error at the pole p = 0, m = 0.
SpinMatrix euclidean_S(const Momentum2& p, double m);

SpinMatrix retarded_G(double t, const Momentum2& p, double m);
SpinMatrix retarded_Gbar(double t, const Momentum2& p, double m);
double retarded_P(double t, const Momentum2& p, double M);

/// Five-dimensional (psi, psibar, phi) operator over spinor components.
/// Index layout: 0-1 psi, 2-3 psibar, 4 phi.
class MixedKernel {
 public:
  static constexpr int kDim = 5;

  Complex operator()(int r, int c) const { return a_[r * kDim + c]; }
  Complex& operator()(int r, int c) { return a_[r * kDim + c]; }

  static MixedKernel q_transpose();
  static MixedKernel diag(const SpinMatrix& f, const SpinMatrix& fbar, double b);

  MixedKernel transpose() const;
  double max_abs() const;

  MixedKernel& operator+=(const MixedKernel& o);
  friend MixedKernel operator+(MixedKernel a, const MixedKernel& b) { return a += b; }
  friend MixedKernel operator-(MixedKernel a, const MixedKernel& b);
  friend MixedKernel operator*(MixedKernel a, Complex s);
  friend MixedKernel operator*(const MixedKernel& a, const MixedKernel& b);

 private:
  std::array<Complex, kDim * kDim> a_{};
};

inline double error_norm(const MixedKernel& k) { return k.max_abs(); }

/// diag(G, Gbar, P) at (t, p). At exactly t = 0 the kernel takes the value
/// `at_zero` times the identity (1 for the right limit, 1/2 for the symmetric
/// convention used by the equal-time identity).
MixedKernel kernel_matrix(double t, const Momentum2& p, const ModelParams& params,
                          double at_zero = 1.0);

struct IdentityResult {
  MixedKernel lhs;
  MixedKernel rhs;
  double quad_error = 0.0;
  double residual() const { return (lhs - rhs).max_abs(); }
};

/// Both sides of the equal-time Green identity at momentum p:
///   lhs = int dtau d/dt1 Gk(t1 - tau, p) Q^T Gk(t2 - tau, -p)^T
///   rhs = (Q^T Gk(t2 - t1, -p)^T - Gk(t1 - t2, p) Q^T) / 2
/// The t-derivative of the theta function contributes a contact term at
/// tau = t1, weighted with theta(0) = 1/2.
IdentityResult green_equal_time_identity(double t1, double t2, const Momentum2& p,
                                         const ModelParams& params,
                                         const QuadOptions& opts = {});

/// 2 int_0^tcut G(tau,p) Gbar(tau,-p)^T dtau, by adaptive quadrature. The
/// quadrature error estimate is stored in *error when given.
SpinMatrix stationary_fermion_correlator(double t_cut, const Momentum2& p, double m,
                                         const QuadOptions& opts = {}, double* error = nullptr);

/// 2 int_0^tcut P(tau,p)^2 dtau, by adaptive quadrature.
double stationary_boson_variance(double t_cut, const Momentum2& p, double M,
                                 const QuadOptions& opts = {});

}  // namespace sqf
