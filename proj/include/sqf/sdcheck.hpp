// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
//
// Exact checks on the micro-lattice Yukawa model: the Schwinger-Dyson
// equation for the source generating functional, the U_r / U_l^T operator
// identity, and the discrete P and CT symmetries of the action.
//
// Source layout: Z is an element over 2 nf generators, k_f = f and
// kbar_f = nf + f, with coefficients polynomial in j_x (variable x). The
// source term is psibar k - psi kbar + phi j.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sqf/micro_model.hpp"

namespace sqf {

struct ZftResult {
  GElem z;
  int source_order = 0;
  int nodes = 0;  // Gauss-Hermite nodes per site
  double doubling_discrepancy = 0.0;
};

/// Z(k, kbar, j) / Z(0), expanded to total source order `source_order`
/// (Grassmann degree plus degree in j). Fermions are integrated exactly; the
/// boson integral uses tensor Gauss-Hermite with source_order + 4 nodes per
/// site, checked against twice as many nodes. Throws std::runtime_error if the
/// two disagree by more than 1e-10.
ZftResult z_ft(const MicroModel& model, int source_order);

struct Lemma1Report {
  double residual = 0.0;  // max |coefficient| over all components
  bool parity_homogeneous = true;
  int max_order = 0;
  int nodes = 0;
  double doubling_discrepancy = 0.0;
};

/// Evaluates (E(Q^T d/dK) - K) Z coefficient by coefficient through total
/// source order max_order, with left derivatives. Substituting Q^T d/dK for
/// (psi, psibar, phi) gives (d/dkbar, -d/dk, d/dj). mass_shift perturbs the
/// mass inside E only, for sensitivity tests.
Lemma1Report lemma1_residual(const MicroModel& model, int max_order, double mass_shift = 0.0);

/// 3 x 3 block matrix over (psi, psibar, phi) index ranges with Grassmann
/// entries. Species parities are (odd, odd, even); entry (r, c) has parity
/// parity(r) + parity(c).
class MixedOperatorMatrix {
 public:
  using Block = std::vector<std::vector<GElem>>;
  static constexpr std::array<int, 3> kParity{1, 1, 0};

  MixedOperatorMatrix(std::array<int, 3> sizes, int num_generators);
  /// Q (or Q^T) with unit blocks: Q = [[0, -1, 0], [1, 0, 0], [0, 0, 1]].
  static MixedOperatorMatrix q(int nf, int nb, int num_generators, bool transpose);

  GElem& at(int br, int bc, int i, int j) { return blocks_[br][bc][i][j]; }
  const GElem& at(int br, int bc, int i, int j) const { return blocks_[br][bc][i][j]; }
  const Block& block(int br, int bc) const { return blocks_[br][bc]; }
  std::array<int, 3> sizes() const { return sizes_; }

  friend MixedOperatorMatrix operator*(const MixedOperatorMatrix& a, const MixedOperatorMatrix& b);
  friend MixedOperatorMatrix operator-(const MixedOperatorMatrix& a, const MixedOperatorMatrix& b);

  double max_abs_coeff() const;
  /// True if every entry has the parity its block requires.
  bool parity_consistent() const;

 private:
  std::array<int, 3> sizes_;
  int n_;
  std::array<std::array<Block, 3>, 3> blocks_;
};

/// A field configuration: psi and psibar are odd elements over num_aux
/// auxiliary generators, phi is real.
struct FieldPoint {
  int num_aux = 0;
  std::vector<GElem> psi, psibar;
  std::vector<double> phi;
};

FieldPoint random_field_point(const MicroModel& model, std::uint64_t seed, int num_aux = 8);

/// Second left derivatives of L arranged as in the U_r and U_l^T tables and
/// evaluated at `point`. d^2 L / (da db) means d/da applied to dL/db.
std::pair<MixedOperatorMatrix, MixedOperatorMatrix> build_U_matrices(const MicroModel& model,
                                                                     const FieldPoint& point);

struct AppendixAReport {
  double residual = 0.0;          // max |coeff| of Q^T U_l^T - U_r Q^T
  double u31_u23_residual = 0.0;  // u_31 - u_23^T
  double u13_u32_residual = 0.0;  // u_13 + u_32^T
  bool parity_consistent = true;
  int trials = 0;
};

AppendixAReport appendix_a_check(const MicroModel& model, int trials, std::uint64_t seed);

struct SymmetryReport {
  double p_residual = 0.0;
  double ct_mass_flip_residual = 0.0;
  double ct_no_flip_residual = 0.0;
  /// CT with m -> -m and phi -> -phi; needed once g != 0.
  double ct_mass_flip_phi_odd_residual = 0.0;
};

/// P: psi(x) -> gamma_1 psi(Px), psibar(x) -> psibar(Px) gamma_1, phi(x) -> phi(Px).
/// CT (anti-linear): psi(x) -> gamma_2 psibar(Tx), psibar(x) -> psi(Tx) gamma_2.
/// P reflects the second coordinate, T the first. Residuals are max |coeff|
/// of L[transformed] - L[target].
SymmetryReport symmetry_check(const MicroModel& model);

}  // namespace sqf
