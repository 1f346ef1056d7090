// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
#include "sqf/greens.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sqf {

namespace {

const GammaRep& gammas() {
  static const GammaRep g = build_gamma();
  return g;
}

// Generator of each kernel: G = exp(-A t).
SpinMatrix fermion_generator(const Momentum2& p, double m) {
  return SpinMatrix::scalar(m) + kI * slash(p, gammas());
}

SpinMatrix antifermion_generator(const Momentum2& p, double m) {
  return SpinMatrix::scalar(m) - kI * slash(p, gammas()).transpose();
}

}  // namespace

void ModelParams::validate() const {
  if (!(m > 0.0)) throw std::invalid_argument("fermion mass m must be > 0");
  if (!(M > 0.0)) throw std::invalid_argument("boson mass M must be > 0");
  if (!std::isfinite(g)) throw std::invalid_argument("coupling g must be finite");
}

SpinMatrix euclidean_S(const Momentum2& p, double m) {
  const double denom = p.norm2() + m * m;
  if (denom == 0.0) throw std::domain_error("euclidean_S: pole at p = 0, m = 0");
  return (SpinMatrix::scalar(m) - kI * slash(p, gammas())) * (1.0 / denom);
}

SpinMatrix retarded_G(double t, const Momentum2& p, double m) {
  if (t < 0.0) return SpinMatrix::zero();
  return mat_exp(fermion_generator(p, m), t);
}

SpinMatrix retarded_Gbar(double t, const Momentum2& p, double m) {
  if (t < 0.0) return SpinMatrix::zero();
  return mat_exp(antifermion_generator(p, m), t);
}

double retarded_P(double t, const Momentum2& p, double M) {
  if (t < 0.0) return 0.0;
  return std::exp(-(p.norm2() + M * M) * t);
}

MixedKernel MixedKernel::q_transpose() {
  // Q = [[0,-1,0],[1,0,0],[0,0,1]] blockwise, so Q^T = [[0,1,0],[-1,0,0],[0,0,1]].
  MixedKernel q;
  for (int a = 0; a < 2; ++a) {
    q(a, 2 + a) = 1.0;
    q(2 + a, a) = -1.0;
  }
  q(4, 4) = 1.0;
  return q;
}

MixedKernel MixedKernel::diag(const SpinMatrix& f, const SpinMatrix& fbar, double b) {
  MixedKernel k;
  for (int a = 0; a < 2; ++a) {
    for (int c = 0; c < 2; ++c) {
      k(a, c) = f(a, c);
      k(2 + a, 2 + c) = fbar(a, c);
    }
  }
  k(4, 4) = b;
  return k;
}

MixedKernel MixedKernel::transpose() const {
  MixedKernel t;
  for (int r = 0; r < kDim; ++r)
    for (int c = 0; c < kDim; ++c) t(c, r) = (*this)(r, c);
  return t;
}

double MixedKernel::max_abs() const {
  double r = 0.0;
  for (const auto& z : a_) r = std::max(r, std::abs(z));
  return r;
}

MixedKernel& MixedKernel::operator+=(const MixedKernel& o) {
  for (int i = 0; i < kDim * kDim; ++i) a_[i] += o.a_[i];
  return *this;
}

MixedKernel operator-(MixedKernel a, const MixedKernel& b) {
  for (int i = 0; i < MixedKernel::kDim * MixedKernel::kDim; ++i) a.a_[i] -= b.a_[i];
  return a;
}

MixedKernel operator*(MixedKernel a, Complex s) {
  for (auto& z : a.a_) z *= s;
  return a;
}

MixedKernel operator*(const MixedKernel& a, const MixedKernel& b) {
  MixedKernel c;
  for (int r = 0; r < MixedKernel::kDim; ++r)
    for (int k = 0; k < MixedKernel::kDim; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex{}) continue;
      for (int col = 0; col < MixedKernel::kDim; ++col) c(r, col) += ark * b(k, col);
    }
  return c;
}

MixedKernel kernel_matrix(double t, const Momentum2& p, const ModelParams& params,
                          double at_zero) {
  if (t < 0.0) return MixedKernel{};
  if (t == 0.0)
    return MixedKernel::diag(SpinMatrix::scalar(at_zero), SpinMatrix::scalar(at_zero), at_zero);
  return MixedKernel::diag(retarded_G(t, p, params.m), retarded_Gbar(t, p, params.m),
                           retarded_P(t, p, params.M));
}

IdentityResult green_equal_time_identity(double t1, double t2, const Momentum2& p,
                                         const ModelParams& params, const QuadOptions& opts) {
  params.validate();
  const MixedKernel qt = MixedKernel::q_transpose();
  const Momentum2 mp = -p;
  const MixedKernel drift = MixedKernel::diag(fermion_generator(p, params.m),
                                              antifermion_generator(p, params.m),
                                              p.norm2() + params.M * params.M);

  // Smooth part: d/dt G(t) = -Dtilde G(t) for t > 0; support is tau < min(t1, t2).
  auto integrand = [&](double tau) {
    return (drift * kernel_matrix(t1 - tau, p, params) * qt *
            kernel_matrix(t2 - tau, mp, params).transpose()) *
           Complex{-1.0};
  };
  const double upper = std::min(t1, t2);
  const double slowest = std::min(params.m, params.M * params.M);
  const double window = 40.0 / slowest;
  QuadOptions inner = opts;
  inner.abs_tol = std::min(opts.abs_tol, 1e-10);
  const auto smooth = integrate(integrand, upper - window, upper, inner);

  IdentityResult out;
  const MixedKernel contact = qt * kernel_matrix(t2 - t1, mp, params, 0.5).transpose();
  out.lhs = contact + smooth.value;
  out.rhs = (qt * kernel_matrix(t2 - t1, mp, params, 0.5).transpose() -
             kernel_matrix(t1 - t2, p, params, 0.5) * qt) *
            Complex{0.5};
  out.quad_error = smooth.error;
  return out;
}

SpinMatrix stationary_fermion_correlator(double t_cut, const Momentum2& p, double m,
                                         const QuadOptions& opts, double* error) {
  if (!(t_cut >= 0.0)) throw std::invalid_argument("stationary_fermion_correlator: t_cut < 0");
  const Momentum2 mp = -p;
  auto f = [&](double tau) {
    return retarded_G(tau, p, m) * retarded_Gbar(tau, mp, m).transpose() * Complex{2.0};
  };
  const auto r = integrate(f, 0.0, t_cut, opts);
  if (error) *error = r.error;
  return r.value;
}

double stationary_boson_variance(double t_cut, const Momentum2& p, double M,
                                 const QuadOptions& opts) {
  if (!(t_cut >= 0.0)) throw std::invalid_argument("stationary_boson_variance: t_cut < 0");
  auto f = [&](double tau) {
    const double k = retarded_P(tau, p, M);
    return 2.0 * k * k;
  };
  return integrate(f, 0.0, t_cut, opts).value;
}

}  // namespace sqf
