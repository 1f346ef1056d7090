// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one PASS/FAIL line per criterion. A criterion passes when
// every report it runs passes and it finishes inside its time limit.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sqf/checks.hpp"
#include "sqf/cli.hpp"

using namespace sqf;

namespace {

struct Criterion {
  int number;
  std::string name;
  double time_limit;
  std::function<std::vector<Report>()> run;
};

std::string summary(const std::vector<Report>& reports) {
  std::string s;
  for (const Report& r : reports) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s=%.3g/%.3g%s", s.empty() ? "" : " ", r.id.c_str(), r.residual, r.tolerance,
                  r.pass ? "" : "!");
    s += buf;
  }
  return s;
}

}  // namespace

int main() {
  const ModelParams unit{1.0, 1.0, 0.0};
  const std::vector<Criterion> criteria{
      {1, "gamma algebra", 1.0, [] { return std::vector<Report>{check_gamma_algebra()}; }},
      {2, "Dirac fundamental solution on a 64x64 grid", 1.0,
       [] { return std::vector<Report>{check_dirac_grid(1.0, 64)}; }},
      {3, "stationary fermion correlator", 10.0,
       [] {
         return std::vector<Report>{check_stationary_fermion(1.0, 20.0, 16), check_stationary_slope(1.0, 16)};
       }},
      {4, "stationary boson Monte Carlo", 60.0,
       [&] {
         const LatticeSpec spec{16, 16, 1.0};
         ChainConfig chain;
         chain.integrator = Integrator::ExponentialMode;
         chain.n_chains = 8;
         chain.n_burn_in = 20000;
         chain.n_steps = chain.n_burn_in + 100000;
         chain.seed = 42;
         return check_boson_table(boson_rows(run_boson_chain(chain, unit, spec), 1.0), chain, spec, 1.0);
       }},
      {5, "equal-time Green identity", 10.0, [&] { return check_green_identity(42, 20, unit); }},
      {6, "Schwinger-Dyson equation", 120.0,
       [] {
         std::vector<Report> out;
         for (int sites : {1, 2})
           for (double g : {0.0, 0.3}) {
             out.push_back(check_lemma1(sites, {1.0, 1.0, g}, 3));
             out.push_back(check_lemma1_corruption(sites, {1.0, 1.0, g}, 3));
           }
         return out;
       }},
      {7, "Q^T U_l^T = U_r Q^T", 10.0,
       [] {
         std::vector<Report> out;
         for (int sites = 1; sites <= 3; ++sites) out.push_back(check_appendix_a(sites, {1.0, 1.0, 0.3}, 20, 42));
         return out;
       }},
      {8, "Langevin vs Euclidean perturbation theory", 300.0,
       [&] {
         const ToyModel toy = make_toy_model(unit, toy_momenta(1));
         std::vector<Report> out;
         for (int k = 0; k <= 2; ++k) out.push_back(check_lemma2(k, toy, 15.0, 1e-6));
         out.push_back(check_tadpole(toy, 15.0, 1e-8));
         return out;
       }},
      {9, "parity and CT symmetries", 5.0, [&] { return check_symmetry(4, unit); }},
      {10, "determinism of all --quick --seed 42", 120.0,
       [] {
         const std::vector<std::string> args{"all", "--quick", "--seed", "42"};
         std::ostringstream out1, out2, err;
         const int c1 = run_cli(args, out1, err);
         const int c2 = run_cli(args, out2, err);
         const bool same = out1.str() == out2.str() && !out1.str().empty();
         return std::vector<Report>{
             make_report("byte_identical", "repeated seeded runs give byte-identical reports", Json::object(),
                         {{"bytes", out1.str().size()}}, same ? 0.0 : 1.0, 0.0),
             make_report("quick_suite_exit", "quick suite exits 0", Json::object(), {{"exit", c1}, {"exit2", c2}},
                         c1 == kExitPass && c2 == kExitPass ? 0.0 : 1.0, 0.0)};
       }},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<Report> reports;
    std::string error;
    try {
      reports = c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = error.empty() && !reports.empty() && secs <= c.time_limit;
    for (const Report& r : reports) pass = pass && r.pass;
    if (!pass) ++failures;
    std::printf("criterion %2d: %s  %s  [%.2fs / %.0fs]  %s%s\n", c.number, pass ? "PASS" : "FAIL", c.name.c_str(),
                secs, c.time_limit, summary(reports).c_str(), error.empty() ? "" : (" error: " + error).c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
