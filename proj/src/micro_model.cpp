// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
#include "sqf/micro_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace sqf {

namespace {

// Momenta of the L-point grid shifted by `offset` (0 periodic, 1/2
// antiperiodic), folded into (-pi, pi].
std::vector<double> grid_momenta(int L, double offset) {
  std::vector<double> p;
  for (int n = 0; n < L; ++n) {
    double q = 2 * std::numbers::pi * (n + offset) / L;
    if (q > std::numbers::pi + 1e-12) q -= 2 * std::numbers::pi;
    p.push_back(q);
  }
  return p;
}

bool is_nyquist(double p) { return std::abs(std::abs(p) - std::numbers::pi) < 1e-12; }

// Fills a translation-invariant matrix from its values at separations
// 0..L/2, mirrored so that f(L - r) = f(r); antisymmetric or symmetric.
Eigen::MatrixXd from_profile(int L, const std::vector<double>& f, bool antisymmetric) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(L, L);
  for (int x = 0; x < L; ++x)
    for (int y = 0; y < L; ++y) {
      int r = std::abs(x - y);
      r = std::min(r, L - r);
      const double v = f[r];
      m(x, y) = antisymmetric && x < y ? -v : v;
    }
  return m;
}

}  // namespace

Eigen::MatrixXd spectral_derivative(int L) {
  if (L < 1) throw std::invalid_argument("spectral_derivative: L >= 1");
  const auto ps = grid_momenta(L, 0.5);
  std::vector<double> d(L / 2 + 1, 0.0);
  for (int r = 1; r <= L / 2; ++r) {
    double s = 0.0;
    for (double p : ps)
      if (!is_nyquist(p)) s -= p * std::sin(p * r);
    d[r] = s / L;
  }
  return from_profile(L, d, true);
}

Eigen::MatrixXd spectral_neg_laplacian(int L) {
  if (L < 1) throw std::invalid_argument("spectral_neg_laplacian: L >= 1");
  const auto ps = grid_momenta(L, 0.0);
  std::vector<double> b(L / 2 + 1, 0.0);
  for (int r = 0; r <= L / 2; ++r) {
    double s = 0.0;
    for (double p : ps) s += p * p * std::cos(p * r);
    b[r] = s / L;
  }
  return from_profile(L, b, false);
}

std::pair<int, int> reflect_site(int i, int L) {
  if (i < 0 || i >= L) throw std::out_of_range("reflect_site: site out of range");
  return i == 0 ? std::pair{0, 1} : std::pair{L - i, -1};
}

MicroModel build_micro_action(int n_sites, const ModelParams& params) {
  switch (n_sites) {
    case 1: return build_micro_lattice(1, 1, params);
    case 2: return build_micro_lattice(2, 1, params);
    case 3: return build_micro_lattice(3, 1, params);
    case 4: return build_micro_lattice(2, 2, params);
    default: throw std::invalid_argument("build_micro_action: nSites must be 1..4");
  }
}

MicroModel build_micro_lattice(int L1, int L2, const ModelParams& params) {
  params.validate();
  if (L1 < 1 || L2 < 1 || L1 * L2 > Monomial::kMaxVars)
    throw std::invalid_argument("build_micro_lattice: need 1 <= L1 L2 <= 8");
  MicroModel mm;
  mm.L1 = L1;
  mm.L2 = L2;
  mm.params = params;
  const Eigen::MatrixXd i1 = Eigen::MatrixXd::Identity(L1, L1);
  const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(L2, L2);
  mm.D1 = Eigen::kroneckerProduct(spectral_derivative(L1), i2);
  mm.D2 = Eigen::kroneckerProduct(i1, spectral_derivative(L2));
  const int n = L1 * L2;
  mm.B = Eigen::kroneckerProduct(spectral_neg_laplacian(L1), i2) +
         Eigen::kroneckerProduct(i1, spectral_neg_laplacian(L2)) +
         params.M * params.M * Eigen::MatrixXd::Identity(n, n);
  mm.K = fermion_matrix(mm, params.m);
  mm.c = wick_counterterm(mm, params.m);
  return mm;
}

Eigen::MatrixXcd fermion_matrix(const MicroModel& model, double m) {
  const GammaRep g = build_gamma();
  const int n = model.num_sites();
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          Complex v = g.gamma1(a, b) * model.D1(x, y) + g.gamma2(a, b) * model.D2(x, y);
          if (x == y && a == b) v += m;
          k(2 * x + a, 2 * y + b) = v;
        }
  return k;
}

double wick_counterterm(const MicroModel& model, double m) {
  // K^{-1} = (m - gamma.D)(m^2 - D_1^2 - D_2^2)^{-1}; the gamma part is
  // traceless, so tr_spin K^{-1}(x, x) = 2 m [(m^2 - D^2)^{-1}]_{xx}.
  const int n = model.num_sites();
  const Eigen::MatrixXd a = m * m * Eigen::MatrixXd::Identity(n, n) - model.D1 * model.D1 -
                            model.D2 * model.D2;
  return -2.0 * m * a.inverse().diagonal().mean();
}

GElem action_element(const MicroModel& model) { return action_element(model, model.params.m); }

GElem action_element(const MicroModel& model, double m) {
  const int n = model.num_sites(), nf = model.num_fermion(), ng = 2 * nf;
  const double g = model.params.g;
  const double c = wick_counterterm(model, m);
  const Eigen::MatrixXcd k = fermion_matrix(model, m);
  GElem l(ng);
  for (int f = 0; f < nf; ++f)
    for (int h = 0; h < nf; ++h)
      if (k(f, h) != Complex{})
        l += GElem::generator(ng, model.psibar(f)) * GElem::generator(ng, model.psi(h)) *
             CPoly{k(f, h)};
  if (g != 0.0) {
    for (int x = 0; x < n; ++x) {
      GElem bilinear = GElem::scalar(ng, CPoly{Complex{-c}});
      for (int a = 0; a < 2; ++a)
        bilinear += GElem::generator(ng, model.psibar(2 * x + a)) *
                    GElem::generator(ng, model.psi(2 * x + a));
      l += bilinear * (CPoly::variable(x) * Complex{g});
    }
  }
  CPoly boson;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (model.B(x, y) != 0.0)
        boson += CPoly::variable(x) * CPoly::variable(y) * Complex{0.5 * model.B(x, y)};
  l += GElem::scalar(ng, boson);
  return l;
}

}  // namespace sqf
