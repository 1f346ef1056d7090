// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sqf/spinor.hpp"

using namespace sqf;

TEST_CASE("build_gamma reproduces the Pauli representation") {
  const GammaRep g = build_gamma();
  CHECK(g.gamma1 == SpinMatrix{0.0, 1.0, 1.0, 0.0});
  CHECK(g.gamma1 * g.gamma2 == SpinMatrix{kI, 0.0, 0.0, -kI});
  CHECK(g.gamma1 * g.gamma2 == kI * g.gamma3);
  CHECK(g.gamma1 * g.gamma2 + g.gamma2 * g.gamma1 == SpinMatrix::zero());
  for (const auto& [name, residual] : gamma_residuals(g)) {
    INFO(name);
    CHECK(residual == 0.0);
  }
}

TEST_CASE("gamma_residuals detects a broken representation") {
  GammaRep g = build_gamma();
  g.gamma2 = g.gamma2 * Complex{-1.0};
  CHECK(gamma_residuals(g).at("gamma3_product") > 1.0);
}

TEST_CASE("slash") {
  const GammaRep g = build_gamma();
  CHECK(slash({0.0, 0.0}, g) == SpinMatrix::zero());
  CHECK(slash({1.0, 0.0}, g) == g.gamma1);
  const SpinMatrix s = slash({3.0, 4.0}, g);
  // Written-out product of [[0, 3-4i],[3+4i, 0]] with itself.
  const SpinMatrix expected{Complex{3, -4} * Complex{3, 4}, 0.0, 0.0,
                            Complex{3, 4} * Complex{3, -4}};
  CHECK((s * s - expected).max_abs() == 0.0);
  CHECK((s * s - SpinMatrix::scalar(25.0)).max_abs() == 0.0);
  CHECK(s.adjoint() == s);
}

TEST_CASE("slash squares to p^2 for random momenta") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const Momentum2 p{u(rng), u(rng)};
    const SpinMatrix s = slash(p);
    CHECK((s * s - SpinMatrix::scalar(p.norm2())).max_abs() <= 1e-12 * (1.0 + p.norm2()));
  }
}

TEST_CASE("SpinMatrix ring axioms and adjoint antihomomorphism") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const SpinMatrix a = oracle::random_matrix(rng), b = oracle::random_matrix(rng),
                     c = oracle::random_matrix(rng);
    CHECK(((a * b) * c - a * (b * c)).max_abs() < 1e-14);
    CHECK((a * (b + c) - (a * b + a * c)).max_abs() < 1e-14);
    CHECK(((a * b).adjoint() - b.adjoint() * a.adjoint()).max_abs() < 1e-14);
    CHECK(a.adjoint().adjoint() == a);
  }
}

TEST_CASE("mat_exp closed form") {
  const double m = 1.3;
  CHECK((mat_exp(SpinMatrix::scalar(m), 1.0) - SpinMatrix::scalar(std::exp(-m))).max_abs() <
        1e-15);
  CHECK(mat_exp(SpinMatrix::zero(), 3.7) == SpinMatrix::identity());

  const SpinMatrix a = SpinMatrix::scalar(1.0) + kI * slash({1.0, 0.0});
  CHECK((mat_exp(a, 0.5) - oracle::taylor_exp(a, 0.5)).max_abs() < 1e-12);
}

TEST_CASE("mat_exp agrees with the Taylor oracle on random generators") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const SpinMatrix a = oracle::random_matrix(rng, 2.0);
    const double t = u(rng);
    CHECK((mat_exp(a, t) - oracle::taylor_exp(a, t)).max_abs() <
          1e-12 * (1.0 + oracle::taylor_exp(a, t).max_abs()));
  }
}

TEST_CASE("mat_exp handles nilpotent and near-degenerate generators") {
  // b.b = 0 with b != 0: exp(-N t) = I - N t.
  const SpinMatrix nil{0.0, 1.0, 0.0, 0.0};
  CHECK((mat_exp(nil, 2.0) - SpinMatrix{1.0, -2.0, 0.0, 1.0}).max_abs() < 1e-15);
  const SpinMatrix tiny = SpinMatrix::scalar(0.5) + build_gamma().gamma3 * Complex{1e-9};
  CHECK((mat_exp(tiny, 1.0) - oracle::taylor_exp(tiny, 1.0)).max_abs() < 1e-15);
}

TEST_CASE("mat_exp semigroup property") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ut(0.0, 2.0);
  const GammaRep g = build_gamma();
  for (int i = 0; i < 100; ++i) {
    SpinMatrix a = SpinMatrix::scalar(Complex{u(rng), u(rng)});
    for (int k = 1; k <= 3; ++k) a += g[k] * Complex{u(rng), u(rng)};
    const double s = ut(rng), t = ut(rng);
    CHECK((mat_exp(a, s) * mat_exp(a, t) - mat_exp(a, s + t)).max_abs() < 1e-12);
  }
}

TEST_CASE("mat_exp rejects non-finite input") {
  CHECK_THROWS_AS(mat_exp(SpinMatrix::scalar(NAN), 1.0), std::domain_error);
  CHECK_THROWS_AS(mat_exp(SpinMatrix::identity(), INFINITY), std::domain_error);
}
