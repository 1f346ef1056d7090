// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
//
// Verification runs shared by the command-line tool and the acceptance suite.
// Each run returns Reports with pass <=> residual <= tolerance.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "sqf/langevin.hpp"
#include "sqf/perturb.hpp"

namespace sqf {

using Json = nlohmann::json;

struct Report {
  std::string id;
  std::string claim;  // the statement being verified
  Json inputs = Json::object();
  Json values = Json::object();
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double wall_time = 0.0;
};

Report make_report(std::string id, std::string claim, Json inputs, Json values, double residual,
                   double tolerance);

/// Keys are sorted; wall_time is included only on request so that reports
/// stay byte-identical between runs.
Json to_json(const Report& r, bool with_timing);

Report check_gamma_algebra();
Report check_dirac_grid(double m, int grid);

struct StationaryRow {
  int n1 = 0, n2 = 0;
  Momentum2 p;
  double error = 0.0;  // Frobenius norm of C(T_cut, p) - S(p)
};
std::vector<StationaryRow> stationary_errors(double m, double t_cut, int grid);
Report check_stationary_fermion(double m, double t_cut, int grid);
/// Least-squares slope of log ||C(T, p) - S(p)|| over T in [1, 5] against -2m.
Report check_stationary_slope(double m, int grid);

struct BosonRow {
  CorrelatorEntry entry;
  double exact = 0.0;
  double zscore = 0.0;
};
std::vector<BosonRow> boson_rows(const CorrelatorTable& table, double M);
/// Fraction of modes beyond 3 sigma (tolerance 1%) and largest |z| (tolerance 4).
std::vector<Report> check_boson_table(const std::vector<BosonRow>& rows, const ChainConfig& config,
                                      const LatticeSpec& spec, double M);

Report check_green_identity_point(double t1, double t2, const Momentum2& p, const ModelParams& params);
/// `points` random (t, p) at t1 = t2 and as many at t1 != t2.
std::vector<Report> check_green_identity(std::uint64_t seed, int points, const ModelParams& params);

Report check_lemma1(int sites, const ModelParams& params, int order);
/// Residual with m shifted by 0.1 must exceed the true residual 1e5-fold.
Report check_lemma1_corruption(int sites, const ModelParams& params, int order);

Report check_appendix_a(int sites, const ModelParams& params, int trials, std::uint64_t seed);

std::vector<Report> check_symmetry(int sites, const ModelParams& params);

/// `count` toy momenta from the nonzero modes of a 4x4 unit lattice,
/// ordered by |p| and then mode index.
std::vector<Momentum2> toy_momenta(int count);
Report check_lemma2(int order, const ToyModel& toy, double t_cut, double budget);
Report check_tadpole(const ToyModel& toy, double t_cut, double tolerance);

}  // namespace sqf
