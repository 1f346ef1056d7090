// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
#include <string>

#include "doctest.h"
#include "sqf/perturb.hpp"

using namespace sqf;

namespace {

long catalan(int n) {
  long c = 1;
  for (int k = 0; k < n; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return c;
}

SpinMatrix dirac_operator(const Momentum2& p, double m) {
  const GammaRep g = build_gamma();
  return SpinMatrix::scalar(m) + kI * (p.p1 * g.gamma1 + p.p2 * g.gamma2);
}

// One fermion mode and a boson zero mode integrate in closed form:
// <psi psibar^T> = (adj A + g^2 c / M^2) / (det A + g^2 (c tr A + 1) / M^2 + O(g^4)).
SpinMatrix one_mode_second_order(const Momentum2& p, double m, double M) {
  const SpinMatrix a = dirac_operator(p, m);
  const SpinMatrix adj{a(1, 1), -a(0, 1), -a(1, 0), a(0, 0)};
  const Complex det = a.det();
  const Complex c = -a.trace() / det;
  const double M2 = M * M;
  return SpinMatrix::scalar(c / (M2 * det)) - adj * ((c * a.trace() + 1.0) / (M2 * det * det));
}

}  // namespace

TEST_CASE("tree enumeration matches the counting recursion and Catalan numbers") {
  for (int k = 0; k <= 3; ++k) {
    const auto psi = expand_fixpoint(k, Observable::FermionTwoPoint);
    const auto phi = expand_fixpoint(k, Observable::BosonOnePoint);
    CHECK(static_cast<long>(psi.size()) == count_trees(k, Observable::FermionTwoPoint));
    CHECK(static_cast<long>(phi.size()) == count_trees(k, Observable::BosonOnePoint));
    CHECK(count_trees(k, Observable::FermionTwoPoint) == catalan(k + 1));
    CHECK(count_trees(k, Observable::BosonOnePoint) == catalan(k));
    for (const auto& t : psi) {
      CHECK(t.order() == k);
      CHECK(t.num_leaves() == k + 2);  // each binary vertex adds one leaf
    }
  }
  CHECK(expand_fixpoint(0, Observable::FermionTwoPoint)[0].to_string() ==
        "(root (psi-leaf) (psibar-leaf))");
  CHECK(expand_fixpoint(1, Observable::BosonOnePoint)[0].to_string() ==
        "(root (phi-vertex (psibar-leaf) (psi-leaf)))");
  CHECK_THROWS(expand_fixpoint(4, Observable::FermionTwoPoint));
}

TEST_CASE("permutation sign is the Koszul sign of reordering") {
  CHECK(permutation_sign({}) == 1);
  CHECK(permutation_sign({0, 1, 2, 3}) == 1);
  CHECK(permutation_sign({1, 0}) == -1);
  CHECK(permutation_sign({0, 3, 2, 1}) == -1);
  CHECK(permutation_sign({2, 0, 1}) == 1);
  // Transposing any two entries flips the sign.
  std::vector<int> v{3, 1, 4, 0, 2, 5};
  const int s = permutation_sign(v);
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      auto w = v;
      std::swap(w[i], w[j]);
      CHECK(permutation_sign(w) == -s);
    }
}

TEST_CASE("toy model counterterm and preconditions") {
  const ModelParams params{0.8, 1.2, 0.4};
  const Momentum2 p{0.3, -0.5};
  const ToyModel toy = make_toy_model(params, {p});
  CHECK(toy.c == doctest::Approx(-(dirac_operator(p, 0.8).inverse().trace().real())).epsilon(1e-14));
  CHECK_THROWS(make_toy_model(params, {}));
  CHECK_THROWS(make_toy_model(params, std::vector<Momentum2>(9)));
  CHECK_THROWS(make_toy_model({-1.0, 1.0, 0.1}, {p}));
  CHECK_THROWS(contract_and_integrate({}, Observable::FermionTwoPoint, toy, 1, 10.0));
  CHECK_THROWS(contract_and_integrate({}, Observable::FermionTwoPoint, toy, 0, 0.0));
  CHECK_THROWS(diagrammatic_oracle(3, Observable::FermionTwoPoint, toy, 0));
  CHECK_THROWS(diagrammatic_oracle(0, Observable::FermionTwoPoint, make_toy_model(params, std::vector<Momentum2>(5)), 0,
                                   OracleMethod::Berezin));
}

TEST_CASE("order zero reproduces the free propagator") {
  for (const auto& [m, p] : {std::pair{1.0, Momentum2{0.4, -0.7}}, std::pair{0.5, Momentum2{2.0, 1.0}},
                             std::pair{2.0, Momentum2{0.0, 0.0}}}) {
    const ToyModel toy = make_toy_model({m, 1.0, 0.3}, {p});
    const auto r = contract_and_integrate(expand_fixpoint(0, Observable::FermionTwoPoint),
                                          Observable::FermionTwoPoint, toy, 0, 40.0 / m);
    CHECK((r.value - dirac_operator(p, m).inverse()).max_abs() < 1e-8);
  }
}

TEST_CASE("order one vanishes and the tadpole cancels") {
  const ToyModel toy = make_toy_model({0.9, 1.1, 0.3}, {{0.4, -0.7}, {1.0, 0.5}});
  const auto psi = contract_and_integrate(expand_fixpoint(1, Observable::FermionTwoPoint),
                                          Observable::FermionTwoPoint, toy, 0, 20.0);
  CHECK(psi.value.max_abs() < 1e-8);
  const auto phi = contract_and_integrate(expand_fixpoint(1, Observable::BosonOnePoint),
                                          Observable::BosonOnePoint, toy, 0, 20.0);
  CHECK(phi.value.max_abs() < 1e-8);
  CHECK(diagrammatic_oracle(1, Observable::BosonOnePoint, toy, 0).max_abs() < 1e-14);
}

TEST_CASE("second order matches the closed-form one-mode integral") {
  for (const auto& [m, M, p] : {std::tuple{1.0, 1.0, Momentum2{0.4, -0.7}},
                                std::tuple{0.8, 1.5, Momentum2{-1.0, 0.3}},
                                std::tuple{1.5, 0.9, Momentum2{0.0, 0.0}}}) {
    const ToyModel toy = make_toy_model({m, M, 0.3}, {p});
    const SpinMatrix oracle = one_mode_second_order(p, m, M);
    CHECK((diagrammatic_oracle(2, Observable::FermionTwoPoint, toy, 0) - oracle).max_abs() < 1e-12);
    const Lemma2Report r = lemma2_compare(2, toy, 0, 20.0);
    CHECK(r.pass);
    CHECK((r.lhs - oracle).max_abs() < 1e-6);
  }
}

TEST_CASE("Langevin trees match equilibrium orders 0..2 on a two-mode toy") {
  const ToyModel toy = make_toy_model({0.7, 1.3, 0.5}, {{0.4, -0.7}, {1.1, 0.2}});
  for (int k = 0; k <= 2; ++k)
    for (int mode = 0; mode < 2; ++mode) {
      const Lemma2Report r = lemma2_compare(k, toy, mode, 20.0);
      CAPTURE(k);
      CAPTURE(mode);
      CHECK(r.diff < 1e-6);
      CHECK(r.pass);
    }
}

TEST_CASE("determinant and Berezin oracles agree") {
  const ToyModel one = make_toy_model({1.0, 1.0, 0.3}, {{0.4, -0.7}});
  const ToyModel three = make_toy_model({0.6, 1.4, 0.3}, {{0.4, -0.7}, {1.1, 0.2}, {-0.3, 0.9}});
  for (const ToyModel* toy : {&one, &three})
    for (int k = 0; k <= 2; ++k)
      for (Observable obs : {Observable::FermionTwoPoint, Observable::BosonOnePoint}) {
        const SpinMatrix det = diagrammatic_oracle(k, obs, *toy, 0, OracleMethod::Determinant);
        const SpinMatrix ber = diagrammatic_oracle(k, obs, *toy, 0, OracleMethod::Berezin);
        CHECK((det - ber).max_abs() < 1e-10);
      }
}

TEST_CASE("every tree term stays inside its analytic envelope") {
  const ToyModel toy = make_toy_model({0.9, 1.2, 0.3}, {{0.4, -0.7}, {1.0, 0.5}});
  for (int k = 0; k <= 2; ++k) {
    const auto r = contract_and_integrate(expand_fixpoint(k, Observable::FermionTwoPoint),
                                          Observable::FermionTwoPoint, toy, 1, 20.0);
    CHECK(r.envelope_ratio <= 1.0);
    CHECK(r.quad_error < 1e-8);
  }
}

TEST_CASE("tree dump lists every term and pairing sign") {
  const ToyModel toy = make_toy_model({1.0, 1.0, 0.3}, {{0.4, -0.7}});
  const std::string dump = dump_trees(2, Observable::FermionTwoPoint, toy, 0);
  CHECK(dump.rfind("order 2 trees 5\n", 0) == 0);
  CHECK(dump.find("tree 4 (root (psi-vertex (phi-vertex (psibar-leaf) (psi-leaf)) (psi-leaf)) (psibar-leaf))") !=
        std::string::npos);
  CHECK(dump.find("config modes=[0,ct]") != std::string::npos);
  CHECK(dump.find("sign - f(0,3) f(2,1)") != std::string::npos);
  CHECK(dump.find("sign + f(1,3) b(0,2)") != std::string::npos);
  CHECK(dump == dump_trees(2, Observable::FermionTwoPoint, toy, 0));
}
