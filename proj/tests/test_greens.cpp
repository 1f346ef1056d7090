// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "sqf/greens.hpp"

using namespace sqf;

namespace {

const GammaRep g = build_gamma();

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST_CASE("euclidean_S examples") {
  CHECK((euclidean_S({0, 0}, 2.0) - SpinMatrix::scalar(0.5)).max_abs() < 1e-16);
  const SpinMatrix s = euclidean_S({1, 0}, 1.0);
  const SpinMatrix expected = (SpinMatrix::identity() - kI * g.gamma1) * Complex{0.5};
  CHECK((s - expected).max_abs() < 1e-16);
  CHECK(((kI * g.gamma1 + SpinMatrix::identity()) * s - SpinMatrix::identity()).max_abs() <
        1e-15);
  CHECK_THROWS_AS(euclidean_S({0, 0}, 0.0), std::domain_error);
  CHECK_NOTHROW(euclidean_S({1, 0}, 0.0));
}

TEST_CASE("momentum-space Dirac identity on a 64x64 grid") {
  const double m = 1.0;
  double worst = 0.0;
  for (int n1 = -32; n1 < 32; ++n1)
    for (int n2 = -32; n2 < 32; ++n2) {
      const Momentum2 p{2 * std::numbers::pi * n1 / 64.0, 2 * std::numbers::pi * n2 / 64.0};
      const SpinMatrix r =
          (kI * slash(p, g) + SpinMatrix::scalar(m)) * euclidean_S(p, m) - SpinMatrix::identity();
      worst = std::max(worst, r.max_abs());
    }
  CHECK(worst < 1e-14);
}

TEST_CASE("retarded kernels vanish for negative time") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int i = 0; i < 50; ++i) {
    const Momentum2 p{u(rng), u(rng)};
    const double t = -std::abs(u(rng)) - 1e-12;
    CHECK(retarded_G(t, p, 1.0) == SpinMatrix::zero());
    CHECK(retarded_Gbar(t, p, 1.0) == SpinMatrix::zero());
    CHECK(retarded_P(t, p, 1.0) == 0.0);
  }
  CHECK(retarded_G(-1.0, {1, 2}, 1.0) == SpinMatrix::zero());
}

TEST_CASE("kernel values at t = 0+ and simple decays") {
  const Momentum2 p{0.7, -1.1};
  CHECK((retarded_G(0.0, p, 1.0) - SpinMatrix::identity()).max_abs() < 1e-15);
  CHECK((retarded_Gbar(0.0, p, 1.0) - SpinMatrix::identity()).max_abs() < 1e-15);
  CHECK(retarded_P(0.0, p, 1.0) == 1.0);
  CHECK((retarded_G(1.0, {0, 0}, 1.0) - SpinMatrix::scalar(std::exp(-1.0))).max_abs() < 1e-16);
  CHECK((retarded_Gbar(1.0, {0, 0}, 1.3) - SpinMatrix::scalar(std::exp(-1.3))).max_abs() <
        1e-16);
  const Momentum2 q{2, 0};
  CHECK(retarded_P(std::log(2.0) / (q.norm2() + 1.0), q, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("G satisfies its Langevin ODE (finite-difference oracle)") {
  const Momentum2 p{2, 0};
  const double m = 1.0, t = 0.3, h = 1e-5;
  const SpinMatrix fd = (retarded_G(t + h, p, m) - retarded_G(t - h, p, m)) * Complex{0.5 / h};
  const SpinMatrix rhs = (SpinMatrix::scalar(m) + kI * slash(p, g)) * retarded_G(t, p, m) *
                         Complex{-1.0};
  CHECK((fd - rhs).max_abs() < 1e-6);
}

TEST_CASE("Gbar is gamma2 G gamma2") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3, 3), ut(0, 4);
  for (int i = 0; i < 100; ++i) {
    const Momentum2 p{u(rng), u(rng)};
    const double t = ut(rng), m = 0.5 + ut(rng);
    const SpinMatrix lhs = g.gamma2 * retarded_G(t, p, m) * g.gamma2;
    CHECK((lhs - retarded_Gbar(t, p, m)).max_abs() < 1e-12);
  }
}

TEST_CASE("kernel semigroup") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3, 3), ut(0, 2);
  for (int i = 0; i < 100; ++i) {
    const Momentum2 p{u(rng), u(rng)};
    const double s = ut(rng), t = ut(rng);
    CHECK((retarded_G(s, p, 1.0) * retarded_G(t, p, 1.0) - retarded_G(s + t, p, 1.0)).max_abs() <
          1e-12);
    CHECK((retarded_Gbar(s, p, 1.0) * retarded_Gbar(t, p, 1.0) - retarded_Gbar(s + t, p, 1.0))
              .max_abs() < 1e-12);
    CHECK(std::abs(retarded_P(s, p, 1.0) * retarded_P(t, p, 1.0) - retarded_P(s + t, p, 1.0)) <
          1e-12);
  }
}

TEST_CASE("stationary fermion correlator") {
  // p = 0: 2 int_0^T exp(-2 m tau) = (1 - exp(-2 m T)) / m.
  CHECK((stationary_fermion_correlator(1.0, {0, 0}, 1.0) -
         SpinMatrix::scalar(1.0 - std::exp(-2.0)))
            .max_abs() < 1e-13);
  CHECK((stationary_fermion_correlator(40.0, {0, 0}, 1.0) - SpinMatrix::identity()).max_abs() <
        1e-10);
  CHECK((stationary_fermion_correlator(20.0, {1, 0}, 1.0) - euclidean_S({1, 0}, 1.0)).max_abs() <
        1e-8);
  CHECK(stationary_fermion_correlator(0.0, {1, 0}, 1.0) == SpinMatrix::zero());
}

TEST_CASE("stationary fermion correlator converges at rate 2m") {
  const double m = 1.0;
  for (const Momentum2 p : {Momentum2{0, 0}, Momentum2{1.3, -0.4}}) {
    std::vector<double> ts, logs;
    for (double t = 1.0; t <= 5.0; t += 0.5) {
      QuadOptions opts;
      opts.abs_tol = 1e-14;
      const double err =
          (stationary_fermion_correlator(t, p, m, opts) - euclidean_S(p, m)).frobenius_norm();
      ts.push_back(t);
      logs.push_back(std::log(err));
    }
    CHECK(std::abs(log_slope(ts, logs) / (-2 * m) - 1.0) < 0.05);
  }
}

TEST_CASE("stationary boson variance") {
  CHECK(stationary_boson_variance(40.0, {0, 0}, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(stationary_boson_variance(std::log(2.0) / 2, {0, 0}, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(stationary_boson_variance(10.0, {2, 0}, 1.0) - 0.2) < 1e-8);
}

TEST_CASE("equal-time Green identity") {
  const ModelParams params{1.0, 1.0, 0.0};
  SUBCASE("vanishes at t1 = t2") {
    for (double t : {0.0, 1.7}) {
      const Momentum2 p = t == 0.0 ? Momentum2{0.3, -0.8} : Momentum2{1, 1};
      const auto r = green_equal_time_identity(t, t, p, params);
      CHECK(r.lhs.max_abs() < 1e-8);
      CHECK(r.rhs.max_abs() == 0.0);
    }
  }
  SUBCASE("unequal times, zero momentum") {
    const auto r = green_equal_time_identity(1.0, 0.5, {0, 0}, params);
    CHECK(r.residual() < 1e-8);
    CHECK(r.lhs.max_abs() > 0.1);
    // Boson block by hand: -exp(-M^2 (t1 - t2)) / 2.
    CHECK(std::abs(r.rhs(4, 4) - Complex{-0.5 * std::exp(-0.5)}) < 1e-15);
  }
  SUBCASE("random points") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-2, 2), ut(-1, 3);
    for (int i = 0; i < 10; ++i) {
      const Momentum2 p{u(rng), u(rng)};
      const auto r = green_equal_time_identity(ut(rng), ut(rng), p, params);
      CHECK(r.residual() < 1e-8);
    }
  }
}

TEST_CASE("model parameter validation") {
  CHECK_THROWS(ModelParams{0.0, 1.0, 0.0}.validate());
  CHECK_THROWS(ModelParams{1.0, -1.0, 0.0}.validate());
  CHECK_NOTHROW(ModelParams{1.0, 1.0, 0.3}.validate());
}
