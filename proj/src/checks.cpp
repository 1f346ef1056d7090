// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
#include "sqf/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

#include "sqf/micro_model.hpp"
#include "sqf/rng.hpp"
#include "sqf/sdcheck.hpp"

namespace sqf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Json params_json(const ModelParams& p) { return {{"m", p.m}, {"M", p.M}, {"g", p.g}}; }

Json spin_json(const SpinMatrix& s) {
  Json rows = Json::array();
  for (int i = 0; i < 2; ++i) {
    Json row = Json::array();
    for (int j = 0; j < 2; ++j) row.push_back({s(i, j).real(), s(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

Momentum2 grid_momentum(int n1, int n2, int grid) {
  const double k = 2 * std::numbers::pi / grid;
  return {k * n1, k * n2};
}

}  // namespace

Report make_report(std::string id, std::string claim, Json inputs, Json values, double residual,
                   double tolerance) {
  Report r{std::move(id), std::move(claim), std::move(inputs), std::move(values), residual, tolerance,
           false, 0.0};
  r.pass = residual <= tolerance;  // false for NaN
  return r;
}

Json to_json(const Report& r, bool with_timing) {
  Json j{{"id", r.id},           {"claim", r.claim}, {"inputs", r.inputs},     {"values", r.values},
         {"residual", r.residual}, {"tolerance", r.tolerance}, {"pass", r.pass}};
  if (with_timing) j["wall_time"] = r.wall_time;
  return j;
}

Report check_gamma_algebra() {
  const auto t0 = Clock::now();
  const auto res = gamma_residuals(build_gamma());
  double worst = 0.0;
  Json values = Json::object();
  for (const auto& [name, v] : res) {
    values[name] = v;
    worst = std::max(worst, v);
  }
  Report r = make_report("gamma_algebra", "Pauli matrices satisfy the Euclidean Clifford relations",
                         Json::object(), values, worst, 0.0);
  r.wall_time = seconds_since(t0);
  return r;
}

Report check_dirac_grid(double m, int grid) {
  const auto t0 = Clock::now();
  if (grid < 1) throw std::invalid_argument("grid must be positive");
  double worst = 0.0;
  for (int n1 = -grid / 2; n1 < grid - grid / 2; ++n1)
    for (int n2 = -grid / 2; n2 < grid - grid / 2; ++n2) {
      const Momentum2 p = grid_momentum(n1, n2, grid);
      const SpinMatrix r = (kI * slash(p) + SpinMatrix::scalar(m)) * euclidean_S(p, m) - SpinMatrix::identity();
      worst = std::max(worst, r.frobenius_norm());
    }
  Report r = make_report("dirac_fundamental_solution", "(i pslash + m) S(p) = 1 on the momentum grid",
                         {{"m", m}, {"grid", grid}}, Json::object(), worst, 1e-13);
  r.wall_time = seconds_since(t0);
  return r;
}

std::vector<StationaryRow> stationary_errors(double m, double t_cut, int grid) {
  if (grid < 1) throw std::invalid_argument("grid must be positive");
  if (!(t_cut > 0.0)) throw std::invalid_argument("tcut must be positive");
  QuadOptions opts;
  opts.abs_tol = 1e-13;
  std::vector<StationaryRow> rows;
  for (int n1 = -grid / 2; n1 < grid - grid / 2; ++n1)
    for (int n2 = -grid / 2; n2 < grid - grid / 2; ++n2) {
      const Momentum2 p = grid_momentum(n1, n2, grid);
      const double e = (stationary_fermion_correlator(t_cut, p, m, opts) - euclidean_S(p, m)).frobenius_norm();
      rows.push_back({n1, n2, p, e});
    }
  return rows;
}

Report check_stationary_fermion(double m, double t_cut, int grid) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& row : stationary_errors(m, t_cut, grid)) worst = std::max(worst, row.error);
  Report r = make_report("stationary_fermion_correlator",
                         "stationary Langevin fermion correlator equals S(p)",
                         {{"m", m}, {"tcut", t_cut}, {"grid", grid}}, Json::object(), worst, 1e-8);
  r.wall_time = seconds_since(t0);
  return r;
}

Report check_stationary_slope(double m, int grid) {
  const auto t0 = Clock::now();
  QuadOptions opts;
  opts.abs_tol = 1e-14;
  double worst = 0.0;
  Json slopes = Json::array();
  for (int n1 = -grid / 2; n1 < grid - grid / 2; ++n1)
    for (int n2 = -grid / 2; n2 < grid - grid / 2; ++n2) {
      const Momentum2 p = grid_momentum(n1, n2, grid);
      const SpinMatrix s = euclidean_S(p, m);
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int n = 0;
      for (double t = 1.0; t <= 5.0 + 1e-12; t += 0.5, ++n) {
        const double y = std::log((stationary_fermion_correlator(t, p, m, opts) - s).frobenius_norm());
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
      }
      const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
      slopes.push_back({{"n1", n1}, {"n2", n2}, {"slope", slope}});
      worst = std::max(worst, std::abs(slope / (-2 * m) - 1.0));
    }
  Report r = make_report("stationary_fermion_rate",
                         "stationary correlator error decays as exp(-2 m T_cut)",
                         {{"m", m}, {"grid", grid}, {"tcut_range", {1.0, 5.0}}}, {{"slopes", slopes}},
                         worst, 0.05);
  r.wall_time = seconds_since(t0);
  return r;
}

std::vector<BosonRow> boson_rows(const CorrelatorTable& table, double M) {
  std::vector<BosonRow> rows;
  for (const auto& e : table.entries) {
    const double exact = 1.0 / (e.p.norm2() + M * M);
    const double est = std::get<double>(e.estimate);
    rows.push_back({e, exact, (est - exact) / e.std_error});
  }
  return rows;
}

std::vector<Report> check_boson_table(const std::vector<BosonRow>& rows, const ChainConfig& config,
                                      const LatticeSpec& spec, double M) {
  int beyond3 = 0;
  double worst = 0.0;
  for (const auto& r : rows) {
    if (std::abs(r.zscore) > 3.0) ++beyond3;
    worst = std::max(worst, std::abs(r.zscore));
    if (std::isnan(r.zscore)) worst = r.zscore;
  }
  const Json inputs{{"L1", spec.L1},
                    {"L2", spec.L2},
                    {"M", M},
                    {"dt", config.dt},
                    {"steps", config.n_steps},
                    {"burnin", config.n_burn_in},
                    {"chains", config.n_chains},
                    {"seed", config.seed},
                    {"integrator", config.integrator == Integrator::ExponentialMode ? "exp" : "em"}};
  const double frac = rows.empty() ? 1.0 : static_cast<double>(beyond3) / rows.size();
  return {make_report("boson_stationary_3sigma",
                      "stationary Langevin boson variance equals 1/(p^2 + M^2): modes beyond 3 sigma",
                      inputs, {{"modes", rows.size()}, {"beyond_3sigma", beyond3}}, frac, 0.01),
          make_report("boson_stationary_4sigma",
                      "stationary Langevin boson variance equals 1/(p^2 + M^2): largest |z|", inputs,
                      {{"modes", rows.size()}}, worst, 4.0)};
}

Report check_green_identity_point(double t1, double t2, const Momentum2& p, const ModelParams& params) {
  const auto t0 = Clock::now();
  const IdentityResult res = green_equal_time_identity(t1, t2, p, params);
  const bool equal = t1 == t2;
  const double residual = equal ? res.lhs.max_abs() : res.residual();
  Report r = make_report(equal ? "green_identity_equal_time" : "green_identity",
                         equal ? "equal-time Green identity: left side vanishes at t1 = t2"
                               : "equal-time Green identity at t1 != t2",
                         {{"t1", t1}, {"t2", t2}, {"p", {p.p1, p.p2}}, {"params", params_json(params)}},
                         {{"quad_error", res.quad_error}, {"lhs_norm", res.lhs.max_abs()}}, residual, 1e-8);
  r.wall_time = seconds_since(t0);
  return r;
}

std::vector<Report> check_green_identity(std::uint64_t seed, int points, const ModelParams& params) {
  const auto t0 = Clock::now();
  CounterRng rng(seed, 0x9e11, 0);
  auto uni = [&](double a, double b) { return a + (b - a) * rng.uniform(); };
  double equal_worst = 0.0, unequal_worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const Momentum2 p{uni(-2, 2), uni(-2, 2)};
    const double t = uni(-1, 3);
    equal_worst = std::max(equal_worst, green_equal_time_identity(t, t, p, params).lhs.max_abs());
  }
  for (int i = 0; i < points; ++i) {
    const Momentum2 p{uni(-2, 2), uni(-2, 2)};
    double t1 = uni(-1, 3), t2 = uni(-1, 3);
    if (t1 == t2) t2 += 0.5;
    unequal_worst = std::max(unequal_worst, green_equal_time_identity(t1, t2, p, params).residual());
  }
  const Json inputs{{"seed", seed}, {"points", points}, {"params", params_json(params)}};
  std::vector<Report> out{
      make_report("green_identity_equal_time", "equal-time Green identity: left side vanishes at t1 = t2",
                  inputs, Json::object(), equal_worst, 1e-8),
      make_report("green_identity", "equal-time Green identity at t1 != t2", inputs, Json::object(),
                  unequal_worst, 1e-8)};
  for (auto& r : out) r.wall_time = seconds_since(t0);
  return out;
}

Report check_lemma1(int sites, const ModelParams& params, int order) {
  const auto t0 = Clock::now();
  const Lemma1Report rep = lemma1_residual(build_micro_action(sites, params), order);
  Report r = make_report("schwinger_dyson",
                         "Schwinger-Dyson equation (E(Q^T d/dK) - K) Z_ft = 0 on the micro-lattice",
                         {{"sites", sites}, {"order", order}, {"params", params_json(params)}},
                         {{"parity_homogeneous", rep.parity_homogeneous},
                          {"nodes", rep.nodes},
                          {"doubling_discrepancy", rep.doubling_discrepancy}},
                         rep.residual, 1e-9);
  r.wall_time = seconds_since(t0);
  return r;
}

Report check_lemma1_corruption(int sites, const ModelParams& params, int order) {
  const auto t0 = Clock::now();
  const MicroModel model = build_micro_action(sites, params);
  const double base = lemma1_residual(model, order).residual;
  const double corrupt = lemma1_residual(model, order, 0.1).residual;
  // Residual is 1e5 * base / corrupt; pass requires corrupt >= 1e5 * base.
  Report r = make_report("schwinger_dyson_corruption",
                         "Schwinger-Dyson residual detects a mass shifted by 0.1",
                         {{"sites", sites}, {"order", order}, {"params", params_json(params)}, {"mass_shift", 0.1}},
                         {{"residual", base}, {"corrupted_residual", corrupt}},
                         corrupt > 0.0 ? 1e5 * base / corrupt : INFINITY, 1.0);
  r.wall_time = seconds_since(t0);
  return r;
}

Report check_appendix_a(int sites, const ModelParams& params, int trials, std::uint64_t seed) {
  const auto t0 = Clock::now();
  const AppendixAReport rep = appendix_a_check(build_micro_action(sites, params), trials, seed);
  const double residual = std::max({rep.residual, rep.u31_u23_residual, rep.u13_u32_residual,
                                    rep.parity_consistent ? 0.0 : 1.0});
  Report r = make_report("q_u_intertwining", "Q^T U_l^T - U_r Q^T = 0 at random Grassmann field points",
                         {{"sites", sites}, {"trials", trials}, {"seed", seed}, {"params", params_json(params)}},
                         {{"qu_residual", rep.residual},
                          {"u31_u23_residual", rep.u31_u23_residual},
                          {"u13_u32_residual", rep.u13_u32_residual},
                          {"parity_consistent", rep.parity_consistent}},
                         residual, 0.0);
  r.wall_time = seconds_since(t0);
  return r;
}

std::vector<Report> check_symmetry(int sites, const ModelParams& params) {
  const auto t0 = Clock::now();
  const SymmetryReport rep = symmetry_check(build_micro_action(sites, params));
  const Json inputs{{"sites", sites}, {"params", params_json(params)}};
  const Json values{{"p_residual", rep.p_residual},
                    {"ct_mass_flip_residual", rep.ct_mass_flip_residual},
                    {"ct_no_flip_residual", rep.ct_no_flip_residual},
                    {"ct_mass_flip_phi_odd_residual", rep.ct_mass_flip_phi_odd_residual}};
  // With g != 0 the CT map also needs phi -> -phi; report that residual then.
  const double ct = params.g == 0.0 ? rep.ct_mass_flip_residual : rep.ct_mass_flip_phi_odd_residual;
  std::vector<Report> out{
      make_report("parity_invariance", "action is invariant under parity reversal", inputs, values,
                  rep.p_residual, 0.0),
      make_report("ct_invariance", "action is invariant under CT combined with m -> -m", inputs, values, ct, 0.0),
      make_report("ct_needs_mass_flip", "CT without m -> -m is not a symmetry (residual must be nonzero)",
                  inputs, values, rep.ct_no_flip_residual > 0.0 ? 0.0 : 1.0, 0.0)};
  for (auto& r : out) r.wall_time = seconds_since(t0);
  return out;
}

std::vector<Momentum2> toy_momenta(int count) {
  const LatticeSpec spec{4, 4, 1.0};
  std::vector<int> idx;
  for (int k = 0; k < spec.num_modes(); ++k)
    if (spec.momentum(k).norm2() > 0.0) idx.push_back(k);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return spec.momentum(a).norm2() < spec.momentum(b).norm2(); });
  if (count < 1 || count > 8) throw std::invalid_argument("toy model: 1..8 modes");
  std::vector<Momentum2> out;
  for (int i = 0; i < count; ++i) out.push_back(spec.momentum(idx[i]));
  return out;
}

namespace {

Json toy_inputs(const ToyModel& toy, double t_cut) {
  Json modes = Json::array();
  for (const auto& q : toy.modes) modes.push_back({q.p1, q.p2});
  return {{"params", {{"m", toy.params.m}, {"M", toy.params.M}}}, {"modes", modes}, {"tcut", t_cut}};
}

}  // namespace

Report check_lemma2(int order, const ToyModel& toy, double t_cut, double budget) {
  const auto t0 = Clock::now();
  const Lemma2Report rep = lemma2_compare(order, toy, 0, t_cut, budget);
  Json inputs = toy_inputs(toy, t_cut);
  inputs["order"] = order;
  Report r = make_report("langevin_vs_schwinger_order_" + std::to_string(order),
                         "equal-time Langevin two-point function equals the Euclidean one at order g^" +
                             std::to_string(order),
                         inputs, {{"lhs", spin_json(rep.lhs)}, {"rhs", spin_json(rep.rhs)}, {"budget", budget}},
                         rep.diff, budget);
  r.wall_time = seconds_since(t0);
  return r;
}

Report check_tadpole(const ToyModel& toy, double t_cut, double tolerance) {
  const auto t0 = Clock::now();
  const PerturbResult res = contract_and_integrate(expand_fixpoint(1, Observable::BosonOnePoint),
                                                   Observable::BosonOnePoint, toy, 0, t_cut);
  Report r = make_report("boson_tadpole", "Wick counterterm cancels the order-g boson one-point function",
                         toy_inputs(toy, t_cut),
                         {{"value", res.value(0, 0).real()}, {"counterterm", toy.c}, {"quad_error", res.quad_error}},
                         res.value.max_abs(), tolerance);
  r.wall_time = seconds_since(t0);
  return r;
}

}  // namespace sqf
