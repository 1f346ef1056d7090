// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
//
// Order-by-order comparison of Langevin correlators with Euclidean
// perturbation theory on a finite-mode toy model.
//
// The toy keeps a set of fermion momenta q and only the zero mode of the
// boson:
//
//   L = sum_q psibar_q A_q psi_q + g phi (sum_q psibar_q psi_q - c) + M^2 phi^2 / 2,
//   A_q = m + i qslash,   c = <sum_q psibar_q psi_q>_0 = -sum_q tr S(q).
//
// Its Langevin system has retarded kernels G_q = exp(-A_q t),
// Gbar_q = exp(-A_q^T t) (= Gbar(t, -q)) and P = exp(-M^2 t). Iterating the
// fixed point gives
//
//   psi    = G  (eta    - g phi psi),
//   psibar = Gbar (etabar - g phi psibar),
//   phi    = P  (xi - g (sum_q psibar_q . psi_q - c)),
//
// whose terms are trees whose leaves are the free fields psi0, psibar0, phi0.
// Free fields are paired with their stationary two-time correlators
// <psi0(s1) psi0bar(s2)^T> = G(|s1 - s2|) C and <phi0(s1) phi0(s2)> =
// exp(-M^2 |s1 - s2|) V, with C and V the stationary values at T_cut.
// Observation is at time 0; vertex times run over [-T_cut, parent time].
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sqf/greens.hpp"
#include "sqf/quadrature.hpp"

namespace sqf {

struct ToyModel {
  ModelParams params;
  std::vector<Momentum2> modes;
  double c = 0.0;
};

/// At most 8 modes; c is set to -sum_q tr S(q).
ToyModel make_toy_model(const ModelParams& params, std::vector<Momentum2> modes);

enum class Observable { FermionTwoPoint, BosonOnePoint };

/// One term of the iterated fixed point. Node 0 is the observation root;
/// its children are (psi tree, psibar tree) or (phi tree).
struct FixpointTree {
  enum class Kind { Root, Leaf, Vertex };
  enum class Species { Psi, Psibar, Phi };
  struct Node {
    Kind kind;
    Species species;  // unused for the root
    std::vector<int> children;
  };
  std::vector<Node> nodes;

  int order() const;  // number of vertices
  int num_leaves() const;
  /// S-expression such as (root (psi-vertex (phi-leaf) (psi-leaf)) (psibar-leaf)).
  std::string to_string() const;
};

/// All trees contributing at order g^k. Children of a psi vertex are
/// (phi, psi), of a psibar vertex (phi, psibar), of a phi vertex (psibar, psi).
std::vector<FixpointTree> expand_fixpoint(int order, Observable obs);

/// Tree counts from the memoized recursion, independent of expand_fixpoint.
long count_trees(int order, Observable obs);

/// A perfect matching of the free-field leaves of one tree term. Leaves are
/// numbered in depth-first order. `sign` is the parity of the permutation
/// that brings every (psi, psibar) pair adjacent with psi first.
struct WickPairing {
  std::vector<std::pair<int, int>> fermion;  // (psi leaf, psibar leaf)
  std::vector<std::pair<int, int>> boson;
  int sign = 1;
};

/// Parity of the permutation listing, in order, the positions p0, p1, p2, ...
/// of a sequence of distinct Grassmann positions.
int permutation_sign(const std::vector<int>& positions);

struct PerturbResult {
  SpinMatrix value;  // boson one-point values are returned as value * identity
  double quad_error = 0.0;
  /// max over tree terms of |term| / analytic envelope; must be <= 1.
  double envelope_ratio = 0.0;
};

/// Order-g^k Langevin value of <psi_p(0) psibar_p(0)^T> (mode index `mode`)
/// or of <phi(0)>, summed over trees and pairings.
PerturbResult contract_and_integrate(const std::vector<FixpointTree>& trees, Observable obs,
                                     const ToyModel& model, int mode, double t_cut,
                                     const QuadOptions& opts = {});

enum class OracleMethod { Determinant, Berezin };

/// Order-g^k equilibrium value from the Gaussian moment expansion of
/// <X exp(-g V)> / <exp(-g V)>, with fermion moments from determinants of S
/// or from an explicit Berezin integral. k <= 2.
SpinMatrix diagrammatic_oracle(int order, Observable obs, const ToyModel& model, int mode,
                               OracleMethod method = OracleMethod::Determinant);

struct Lemma2Report {
  int order = 0;
  SpinMatrix lhs;  // Langevin
  SpinMatrix rhs;  // equilibrium
  double diff = 0.0;
  double budget = 0.0;
  bool pass = false;
};

Lemma2Report lemma2_compare(int order, const ToyModel& model, int mode, double t_cut,
                            double budget = 1e-6);

/// Line-oriented audit listing of trees and pairings.
std::string dump_trees(int order, Observable obs, const ToyModel& model, int mode);

}  // namespace sqf
