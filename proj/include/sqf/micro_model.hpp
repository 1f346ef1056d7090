// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
//
// Yukawa action on a tiny periodic lattice, small enough for exact Grassmann
// integration:
//
//   L = psibar K psi + g sum_x (psibar_x psi_x - c) phi_x + 1/2 phi B phi,
//   K = gamma_1 D_1 + gamma_2 D_2 + m,   B = -Delta + M^2.
//
// Lattice spacing is 1. D_k is the spectral derivative (multiplier i p) with
// antiperiodic boundary conditions; its self-conjugate mode p = pi, present
// for odd L, is dropped so that D_k is real and antisymmetric. Delta is the
// spectral Laplacian with periodic boundary conditions. c is the free
// equal-point expectation <psibar_x psi_x>, which cancels the order-g
// tadpole of phi.
//
// Index layout: site x = i1 * L2 + i2; fermion index f = 2 x + a for spinor
// component a. In Grassmann elements psi_f is generator f and psibar_f is
// generator nf + f; phi_x is polynomial variable x.
#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "sqf/grassmann.hpp"
#include "sqf/greens.hpp"

namespace sqf {

using GElem = GrassmannElement<Complex>;
using CPoly = Polynomial<Complex>;

struct MicroModel {
  int L1 = 1;
  int L2 = 1;
  ModelParams params;
  Eigen::MatrixXd D1, D2;  // site x site
  Eigen::MatrixXcd K;      // nf x nf
  Eigen::MatrixXd B;       // site x site
  double c = 0.0;

  int num_sites() const { return L1 * L2; }
  int num_fermion() const { return 2 * num_sites(); }
  int psi(int f) const { return f; }
  int psibar(int f) const { return num_fermion() + f; }
};

/// One-dimensional spectral derivative on L sites, antiperiodic.
Eigen::MatrixXd spectral_derivative(int L);
/// One-dimensional spectral -Laplacian on L sites, periodic.
Eigen::MatrixXd spectral_neg_laplacian(int L);
/// Site reflection i -> -i mod L as (image, sign); the sign is -1 when the
/// image wraps around an antiperiodic boundary.
std::pair<int, int> reflect_site(int i, int L);

/// nSites 1, 2, 3, 4 laid out as 1x1, 2x1, 3x1, 2x2.
MicroModel build_micro_action(int n_sites, const ModelParams& params);
MicroModel build_micro_lattice(int L1, int L2, const ModelParams& params);

/// The free equal-point value <psibar_x psi_x> = -tr_spin K^{-1}(x, x). It is
/// odd in m.
double wick_counterterm(const MicroModel& model, double m);

/// K with the mass replaced.
Eigen::MatrixXcd fermion_matrix(const MicroModel& model, double m);

/// L as an element over the 2 nf field generators with coefficients
/// polynomial in phi. The mass (and with it c) can be overridden.
GElem action_element(const MicroModel& model);
GElem action_element(const MicroModel& model, double m);

}  // namespace sqf
