// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
//
// Langevin dynamics of the free scalar field on a periodic L1 x L2 lattice
// with spacing a, and the exact free-fermion stationary table.
//
// Conventions. Sites x = a (i1, i2); volume V = L1 L2 a^2. Dual momenta
// p_k = 2 pi n_k / (L_k a) with n_k in [-L_k/2, L_k/2). The Laplacian is
// spectral (multiplier -p^2) and the noise has covariance 2 delta_xy / a^2
// per unit time. Mode amplitudes are phi^(p) = a^2 sum_x exp(-i p x) phi(x),
// so the stationary law is <|phi^(p)|^2> = V / (p^2 + M^2). Tables report
// <|phi^(p)|^2> / V.
//
// Fermions never appear as samples: only their exact correlator is tabulated.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sqf/greens.hpp"

namespace sqf {

struct LatticeSpec {
  int L1 = 16;
  int L2 = 16;
  double a = 1.0;

  void validate() const;
  int num_modes() const { return L1 * L2; }
  double volume() const { return L1 * L2 * a * a; }
  /// Mode index = i1 * L2 + i2 with n_k = i_k - L_k / 2.
  int mode_index(int n1, int n2) const;
  int n1(int mode) const { return mode / L2 - L1 / 2; }
  int n2(int mode) const { return mode % L2 - L2 / 2; }
  Momentum2 momentum(int mode) const;
  /// Index of the mode at -p.
  int conjugate(int mode) const;
  /// Largest p^2 on the grid, 2 (pi / a)^2 for even L.
  double p2_max() const;
};

/// Modes with index <= their conjugate's, one per pair {p, -p}. Each carries
/// one real degree of freedom if self-conjugate and two otherwise, so the
/// total number of real degrees of freedom equals num_modes().
std::vector<int> representative_modes(const LatticeSpec& spec);

class BosonField {
 public:
  explicit BosonField(const LatticeSpec& spec);
  static BosonField from_sites(const LatticeSpec& spec, std::span<const double> values);

  const LatticeSpec& spec() const { return spec_; }
  /// Mode amplitudes; modes()[conjugate(k)] == conj(modes()[k]) exactly.
  const std::vector<Complex>& modes() const { return modes_; }
  /// Sets the amplitude at `mode` and its conjugate partner.
  void set_mode(int mode, Complex value);
  /// Site values by inverse transform, indexed i1 * L2 + i2.
  std::vector<double> sites() const;

 private:
  LatticeSpec spec_;
  std::vector<Complex> modes_;
};

enum class Integrator { EulerMaruyama, ExponentialMode };

struct ChainConfig {
  double dt = 0.01;
  long n_steps = 200000;
  long n_burn_in = 20000;
  int n_chains = 8;
  std::uint64_t seed = 42;
  Integrator integrator = Integrator::ExponentialMode;

  void validate() const;
};

/// One Langevin step at g = 0. `noise` holds one standard normal per real
/// degree of freedom, in the order of representative_modes (real part before
/// imaginary part). Euler-Maruyama is applied mode by mode, which is the
/// per-site update with spectral Laplacian written in an orthogonal basis.
BosonField step_boson(const BosonField& state, std::span<const double> noise,
                      const ModelParams& params, const LatticeSpec& spec,
                      const ChainConfig& config);

struct CorrelatorEntry {
  int n1 = 0;
  int n2 = 0;
  Momentum2 p;
  std::variant<double, SpinMatrix> estimate;
  double std_error = 0.0;
  long n_samples = 0;
};

struct CorrelatorTable {
  LatticeSpec spec;
  std::string normalization;
  std::vector<CorrelatorEntry> entries;
};

inline constexpr int kNumBatches = 32;

/// Runs config.n_chains independent chains from phi = 0 in parallel and
/// tabulates <|phi^(p)|^2> / V for each representative mode. Error bars come
/// from batch means: 32 batches per chain, pooled over chains.
/// Throws std::runtime_error naming the step and mode if a chain diverges.
CorrelatorTable run_boson_chain(const ChainConfig& config, const ModelParams& params,
                                const LatticeSpec& spec);

/// C(T_cut, p) for every grid mode; std_error holds the quadrature error bound.
CorrelatorTable free_fermion_table(const LatticeSpec& spec, double m, double t_cut,
                                   const QuadOptions& opts = {});

}  // namespace sqf
