// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "sqf/langevin.hpp"
#include "sqf/rng.hpp"

using namespace sqf;

TEST_CASE("counter rng: streams are reproducible and distinct") {
  CounterRng a(42, 0, 7), b(42, 0, 7), c(42, 1, 7), d(42, 0, 8);
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
    CHECK(x != d.next_u64());
  }
}

TEST_CASE("counter rng: uniform and normal moments") {
  CounterRng r(1, 2, 3);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, sn4 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
    su += u;
    const double z = r.normal();
    sn += z, sn2 += z * z, sn4 += z * z * z * z;
  }
  CHECK(std::abs(su / n - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(sn / n) < 5 / std::sqrt(n));
  CHECK(std::abs(sn2 / n - 1.0) < 5 * std::sqrt(2.0 / n));
  CHECK(std::abs(sn4 / n - 3.0) < 5 * std::sqrt(96.0 / n));
}

TEST_CASE("lattice geometry") {
  const LatticeSpec s{4, 6, 0.5};
  CHECK(s.num_modes() == 24);
  CHECK(s.volume() == doctest::Approx(6.0));
  std::set<int> seen;
  for (int k = 0; k < s.num_modes(); ++k) {
    CHECK(s.conjugate(s.conjugate(k)) == k);
    CHECK(s.mode_index(s.n1(k), s.n2(k)) == k);
    seen.insert(k);
  }
  int dofs = 0;
  for (int k : representative_modes(s)) dofs += s.conjugate(k) == k ? 1 : 2;
  CHECK(dofs == s.num_modes());
  CHECK(s.p2_max() == doctest::Approx(s.momentum(s.mode_index(-2, -3)).norm2()));
  CHECK_THROWS(LatticeSpec{3, 4, 1.0}.validate());
  CHECK_THROWS(LatticeSpec{4, 4, 0.0}.validate());
}

TEST_CASE("boson field: Parseval, round trip and conjugation symmetry") {
  const LatticeSpec s{6, 4, 0.7};
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n;
  std::vector<double> x(s.num_modes());
  for (double& v : x) v = n(rng);
  const BosonField f = BosonField::from_sites(s, x);
  double site_norm = 0, mode_norm = 0;
  for (double v : x) site_norm += s.a * s.a * v * v;
  for (const Complex& z : f.modes()) mode_norm += std::norm(z);
  CHECK(std::abs(site_norm - mode_norm / s.volume()) < 1e-10);
  const auto back = f.sites();
  for (int i = 0; i < s.num_modes(); ++i) CHECK(std::abs(back[i] - x[i]) < 1e-12);
  for (int k = 0; k < s.num_modes(); ++k)
    CHECK(f.modes()[s.conjugate(k)] == std::conj(f.modes()[k]));
}

TEST_CASE("step_boson: zero noise keeps the zero field") {
  const LatticeSpec s{4, 4, 1.0};
  const std::vector<double> zero(s.num_modes(), 0.0);
  for (auto integ : {Integrator::EulerMaruyama, Integrator::ExponentialMode}) {
    ChainConfig c;
    c.integrator = integ;
    const BosonField f = step_boson(BosonField(s), zero, {1.0, 1.0, 0.0}, s, c);
    for (const Complex& z : f.modes()) CHECK(z == Complex{});
  }
}

TEST_CASE("step_boson: preconditions") {
  const LatticeSpec s{4, 4, 1.0};
  const std::vector<double> zero(s.num_modes(), 0.0);
  ChainConfig c;
  CHECK_THROWS_AS(step_boson(BosonField(s), zero, {1.0, 1.0, 0.3}, s, c), std::invalid_argument);
  c.integrator = Integrator::EulerMaruyama;
  c.dt = 2.0 / (s.p2_max() + 1.0);
  CHECK_THROWS_AS(step_boson(BosonField(s), zero, {1.0, 1.0, 0.0}, s, c), std::invalid_argument);
  c.dt = 0.99 * c.dt;
  CHECK_NOTHROW(step_boson(BosonField(s), zero, {1.0, 1.0, 0.0}, s, c));
  CHECK_THROWS_AS(step_boson(BosonField(s), std::vector<double>(3), {1.0, 1.0, 0.0}, s, c),
                  std::invalid_argument);
  ChainConfig bad;
  bad.n_burn_in = bad.n_steps;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("exponential mode: lag-1 autocorrelation of a single mode") {
  // OU with decay w: corr(x_t, x_{t+dt}) = exp(-w dt); estimator sd ~ sqrt((1 - rho^2) / N).
  const LatticeSpec s{2, 2, 1.0};
  const ModelParams params{1.0, 1.0, 0.0};
  ChainConfig c;
  c.dt = 0.5;
  const int k = s.mode_index(0, 0);
  const double rho = std::exp(-params.M * params.M * c.dt);
  BosonField f(s);
  std::vector<double> series;
  std::vector<double> noise(s.num_modes());
  const int n = 40000;
  for (int step = 0; step < n + 50; ++step) {
    CounterRng r(5, 0, step);
    for (double& z : noise) z = r.normal();
    f = step_boson(f, noise, params, s, c);
    if (step >= 50) series.push_back(f.modes()[k].real());
  }
  double mean = 0;
  for (double v : series) mean += v;
  mean /= n;
  double c0 = 0, c1 = 0;
  for (int i = 0; i < n; ++i) {
    c0 += (series[i] - mean) * (series[i] - mean);
    if (i + 1 < n) c1 += (series[i] - mean) * (series[i + 1] - mean);
  }
  const double est = c1 / c0;
  CHECK(std::abs(est - rho) < 3 * std::sqrt((1 - rho * rho) / n));
}

namespace {

// Boson tables list one mode per pair {p, -p}; accept either member.
const CorrelatorEntry& entry(const CorrelatorTable& t, int n1, int n2) {
  const int k = t.spec.mode_index(n1, n2), c = t.spec.conjugate(k);
  for (const auto& e : t.entries) {
    const int j = t.spec.mode_index(e.n1, e.n2);
    if (j == k || j == c) return e;
  }
  throw std::out_of_range("entry not in table");
}

double zscore(const CorrelatorEntry& e, double exact) {
  return (std::get<double>(e.estimate) - exact) / e.std_error;
}

}  // namespace

TEST_CASE("exponential mode: large dt gives independent stationary draws") {
  const LatticeSpec s{2, 2, 1.0};
  ChainConfig c;
  c.dt = 100.0;
  c.n_steps = 20000;
  c.n_burn_in = 10;
  c.n_chains = 2;
  const double M = 1.5;
  const auto t = run_boson_chain(c, {1.0, M, 0.0}, s);
  CHECK(std::abs(zscore(entry(t, 0, 0), 1 / (M * M))) < 3);
}

TEST_CASE("exponential mode: heavy boson at small dt M^2") {
  const LatticeSpec s{2, 2, 1.0};
  ChainConfig c;
  c.dt = 1e-3;
  c.n_steps = 60000;
  c.n_burn_in = 1000;
  c.n_chains = 4;
  const double M = 10.0;
  const auto t = run_boson_chain(c, {1.0, M, 0.0}, s);
  CHECK(std::abs(zscore(entry(t, 0, 0), 1 / (M * M))) < 3);
}

TEST_CASE("Euler-Maruyama and exponential mode agree up to the O(dt) bias") {
  const LatticeSpec s{4, 4, 1.0};
  const ModelParams params{1.0, 1.0, 0.0};
  ChainConfig c;
  c.dt = 0.02;
  c.n_steps = 100000;
  c.n_burn_in = 2000;
  c.n_chains = 4;
  const auto exact_mode = run_boson_chain(c, params, s);
  c.integrator = Integrator::EulerMaruyama;
  c.seed = 43;
  const auto em = run_boson_chain(c, params, s);
  const auto& a = entry(exact_mode, 1, 0);
  const auto& b = entry(em, 1, 0);
  const double w = a.p.norm2() + 1.0;
  // Stationary variance of the Euler-Maruyama recursion is 1 / (w (1 - w dt / 2)).
  const double bias = 1 / (w * (1 - w * c.dt / 2)) - 1 / w;
  const double diff = std::get<double>(b.estimate) - std::get<double>(a.estimate);
  const double sigma = std::hypot(a.std_error, b.std_error);
  CHECK(std::abs(diff) < 3 * sigma + bias);
  CHECK(std::abs(zscore(b, 1 / (w * (1 - w * c.dt / 2)))) < 3);
}

TEST_CASE("boson chain reproduces 1/(p^2 + M^2) and is deterministic") {
  const LatticeSpec s{8, 8, 1.0};
  const ModelParams params{1.0, 1.0, 0.0};
  ChainConfig c;
  c.n_steps = 42000;
  c.n_burn_in = 2000;
  c.n_chains = 4;
  const auto t = run_boson_chain(c, params, s);
  int within3 = 0;
  for (const auto& e : t.entries) {
    const double z = zscore(e, 1 / (e.p.norm2() + 1.0));
    CHECK(std::abs(z) < 4.5);
    within3 += std::abs(z) < 3;
    CHECK(e.std_error > 0);
    CHECK(e.n_samples == 40000L * 4);
  }
  CHECK(within3 >= static_cast<int>(0.95 * t.entries.size()));
  const auto t2 = run_boson_chain(c, params, s);
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    CHECK(std::get<double>(t.entries[i].estimate) == std::get<double>(t2.entries[i].estimate));
    CHECK(t.entries[i].std_error == t2.entries[i].std_error);
  }
}

TEST_CASE("free fermion table") {
  const LatticeSpec s{8, 8, 1.0};
  const auto t = free_fermion_table(s, 1.0, 20.0);
  CHECK(t.entries.size() == 64);
  double worst = 0;
  for (const auto& e : t.entries) {
    worst = std::max(worst, (std::get<SpinMatrix>(e.estimate) - euclidean_S(e.p, 1.0)).max_abs());
    CHECK(e.std_error >= 0);
  }
  CHECK(worst < 1e-8);
  CHECK((std::get<SpinMatrix>(entry(t, 0, 0).estimate) - SpinMatrix::identity()).max_abs() < 1e-8);
  for (const auto& e : free_fermion_table(s, 1.0, 0.0).entries)
    CHECK(std::get<SpinMatrix>(e.estimate) == SpinMatrix::zero());
  CHECK_THROWS(free_fermion_table(s, 0.0, 1.0));
}
