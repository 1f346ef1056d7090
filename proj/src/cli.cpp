// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
#include "sqf/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "sqf/checks.hpp"

namespace sqf {

namespace {

class ConfigError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Momentum2 parse_momentum(const std::string& s) {
  std::istringstream is(s);
  Momentum2 p;
  char comma = 0;
  if (!(is >> p.p1 >> comma >> p.p2) || comma != ',' || !(is >> std::ws).eof())
    throw ConfigError("momentum must be given as p1,p2: '" + s + "'");
  return p;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

// Options shared by every subcommand.
struct Common {
  std::uint64_t seed = 42;
  std::string out_path;
  bool timing = false;
};

struct Outcome {
  std::string text;  // primary output (JSON or CSV)
  bool pass = true;
  std::vector<std::pair<std::string, std::string>> files;  // extra outputs
};

Outcome json_outcome(const std::string& command, Json config, const std::vector<Report>& reports,
                     const Common& common) {
  config["seed"] = common.seed;
  Json list = Json::array();
  bool pass = true;
  for (const Report& r : reports) {
    list.push_back(to_json(r, common.timing));
    pass = pass && r.pass;
  }
  const Json doc{{"schema", 1}, {"command", command}, {"config", config}, {"reports", list}, {"pass", pass}};
  return {doc.dump(2) + "\n", pass, {}};
}

ModelParams params_of(double m, double M, double g) {
  ModelParams p{m, M, g};
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

void append(std::vector<Report>& to, std::vector<Report> from) {
  for (auto& r : from) to.push_back(std::move(r));
}

struct AllSuite {
  bool quick = false;
};

std::vector<Report> run_all(const AllSuite& suite, const Common& common) {
  const bool q = suite.quick;
  const ModelParams unit{1.0, 1.0, 0.0};
  std::vector<Report> reports;
  reports.push_back(check_gamma_algebra());
  reports.push_back(check_dirac_grid(1.0, 64));
  reports.push_back(check_stationary_fermion(1.0, 20.0, q ? 8 : 16));
  reports.push_back(check_stationary_slope(1.0, q ? 2 : 4));

  // The 3-sigma fraction rule needs the full 16x16 mode count even when quick.
  const LatticeSpec spec{16, 16, 1.0};
  ChainConfig chain;
  chain.seed = common.seed;
  chain.n_burn_in = q ? 5000 : 20000;
  chain.n_steps = chain.n_burn_in + (q ? 25000 : 100000);
  append(reports, check_boson_table(boson_rows(run_boson_chain(chain, unit, spec), 1.0), chain, spec, 1.0));

  append(reports, check_green_identity(common.seed, q ? 5 : 20, unit));

  for (int sites : {1, 2})
    for (double g : {0.0, 0.3}) {
      if (q && sites == 2 && g == 0.0) continue;
      reports.push_back(check_lemma1(sites, {1.0, 1.0, g}, q && sites == 2 ? 2 : 3));
    }
  reports.push_back(check_lemma1_corruption(1, {1.0, 1.0, 0.3}, 3));
  for (int sites = 1; sites <= (q ? 2 : 3); ++sites)
    reports.push_back(check_appendix_a(sites, {1.0, 1.0, 0.3}, q ? 5 : 20, common.seed));
  append(reports, check_symmetry(4, unit));

  const ToyModel toy = make_toy_model(unit, toy_momenta(1));
  for (int k = 0; k <= 2; ++k) reports.push_back(check_lemma2(k, toy, 15.0, 1e-6));
  reports.push_back(check_tadpole(toy, 15.0, 1e-8));
  if (!q) {
    const ToyModel two = make_toy_model({0.7, 1.3, 0.0}, toy_momenta(2));
    reports.push_back(check_lemma2(2, two, 20.0, 1e-6));
    reports.push_back(check_tadpole(two, 20.0, 1e-8));
  }
  return reports;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic quantization workbench: verifications and free-field simulations", "sqf"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--seed", common.seed, "RNG seed (SQF_SEED overrides)");
  app.add_option("--out", common.out_path, "write the report to this file instead of stdout");
  app.add_flag("--timing", common.timing, "include wall times in reports");

  std::function<Outcome()> action;

  auto* gamma = app.add_subcommand("gamma-check", "residuals of the gamma-matrix identities");
  gamma->callback([&] {
    action = [&] { return json_outcome("gamma-check", Json::object(), {check_gamma_algebra()}, common); };
  });

  // greens
  auto* greens = app.add_subcommand("greens", "propagators and retarded kernels");
  greens->require_subcommand(1);
  double gm = 1.0, gM = 1.0, gt = 1.0, t1 = 1.0, t2 = 1.0, tcut = 20.0;
  int grid = 16;
  std::string gp = "0,0", gcsv;
  auto* geval = greens->add_subcommand("eval", "CSV row of G, Gbar and P entries at (t, p)");
  geval->add_option("--m", gm, "fermion mass");
  geval->add_option("--M", gM, "boson mass");
  geval->add_option("--t", gt, "time");
  geval->add_option("--p", gp, "momentum p1,p2");
  geval->add_option("--csv", gcsv, "write the CSV here instead of stdout");
  geval->callback([&] {
    action = [&] {
      const ModelParams params = params_of(gm, gM, 0.0);
      const Momentum2 p = parse_momentum(gp);
      std::ostringstream os;
      os << "t,p1,p2";
      for (const char* k : {"G", "Gbar"})
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) os << ',' << k << i << j << "_re," << k << i << j << "_im";
      os << ",P\n" << num(gt) << ',' << num(p.p1) << ',' << num(p.p2);
      for (const SpinMatrix& k : {retarded_G(gt, p, params.m), retarded_Gbar(gt, p, params.m)})
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) os << ',' << num(k(i, j).real()) << ',' << num(k(i, j).imag());
      os << ',' << num(retarded_P(gt, p, params.M)) << '\n';
      Outcome o{os.str(), true, {}};
      if (!gcsv.empty()) o = Outcome{"", true, {{gcsv, os.str()}}};
      return o;
    };
  });
  auto* gid = greens->add_subcommand("identity", "equal-time Green identity at one point");
  gid->add_option("--t1", t1, "first time");
  gid->add_option("--t2", t2, "second time");
  gid->add_option("--m", gm, "fermion mass");
  gid->add_option("--M", gM, "boson mass");
  gid->add_option("--p", gp, "momentum p1,p2");
  gid->callback([&] {
    action = [&] {
      const ModelParams params = params_of(gm, gM, 0.0);
      const Momentum2 p = parse_momentum(gp);
      return json_outcome("greens identity", {{"t1", t1}, {"t2", t2}, {"m", gm}, {"M", gM}, {"p", gp}},
                          {check_green_identity_point(t1, t2, p, params)}, common);
    };
  });
  auto* gstat = greens->add_subcommand("stationary", "CSV of ||C(T_cut, p) - S(p)|| over a momentum grid");
  gstat->add_option("--m", gm, "fermion mass");
  gstat->add_option("--tcut", tcut, "stochastic time cutoff");
  gstat->add_option("--grid", grid, "grid points per direction")->check(CLI::Range(1, 256));
  gstat->add_option("--csv", gcsv, "write the CSV here instead of stdout");
  gstat->callback([&] {
    action = [&] {
      params_of(gm, 1.0, 0.0);
      if (!(tcut > 0.0)) throw ConfigError("--tcut must be positive");
      std::ostringstream os;
      os << "n1,n2,p1,p2,error\n";
      bool pass = true;
      for (const auto& row : stationary_errors(gm, tcut, grid)) {
        os << row.n1 << ',' << row.n2 << ',' << num(row.p.p1) << ',' << num(row.p.p2) << ',' << num(row.error)
           << '\n';
        pass = pass && row.error <= 1e-8;
      }
      Outcome o{os.str(), pass, {}};
      if (!gcsv.empty()) o = Outcome{"", pass, {{gcsv, os.str()}}};
      return o;
    };
  });

  // langevin
  auto* langevin = app.add_subcommand("langevin", "free-field Langevin simulation");
  langevin->require_subcommand(1);
  int L = 16;
  double lM = 1.0;
  ChainConfig chain;
  std::string integrator = "exp", lcsv;
  auto* boson = langevin->add_subcommand("boson", "stationary boson two-point function on a periodic lattice");
  boson->add_option("--L", L, "lattice size per direction (even)");
  boson->add_option("--M", lM, "boson mass");
  boson->add_option("--dt", chain.dt, "time step");
  boson->add_option("--steps", chain.n_steps, "steps per chain, burn-in included");
  boson->add_option("--burnin", chain.n_burn_in, "burn-in steps");
  boson->add_option("--chains", chain.n_chains, "independent chains");
  boson->add_option("--integrator", integrator, "exp or em")->check(CLI::IsMember({"exp", "em"}));
  boson->add_option("--csv", lcsv, "also write the per-mode table as CSV");
  boson->callback([&] {
    action = [&] {
      const ModelParams params = params_of(1.0, lM, 0.0);
      const LatticeSpec spec{L, L, 1.0};
      chain.seed = common.seed;
      chain.integrator = integrator == "exp" ? Integrator::ExponentialMode : Integrator::EulerMaruyama;
      try {
        spec.validate();
        chain.validate();
        step_boson(BosonField(spec), std::vector<double>(spec.num_modes(), 0.0), params, spec, chain);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
      const auto rows = boson_rows(run_boson_chain(chain, params, spec), lM);
      std::vector<Report> reports = check_boson_table(rows, chain, spec, lM);
      Json modes = Json::array();
      std::ostringstream csv;
      csv << "n1,n2,p1,p2,estimate,stderr,exact,zscore,samples\n";
      for (const auto& r : rows) {
        const double est = std::get<double>(r.entry.estimate);
        modes.push_back({{"mode", {r.entry.n1, r.entry.n2}},
                         {"estimate", est},
                         {"stderr", r.entry.std_error},
                         {"exact", r.exact},
                         {"zscore", r.zscore}});
        csv << r.entry.n1 << ',' << r.entry.n2 << ',' << num(r.entry.p.p1) << ',' << num(r.entry.p.p2) << ','
            << num(est) << ',' << num(r.entry.std_error) << ',' << num(r.exact) << ',' << num(r.zscore) << ','
            << r.entry.n_samples << '\n';
      }
      reports[0].values["modes_table"] = modes;
      Outcome o = json_outcome("langevin boson",
                               {{"L", L}, {"M", lM}, {"dt", chain.dt}, {"steps", chain.n_steps},
                                {"burnin", chain.n_burn_in}, {"chains", chain.n_chains}, {"integrator", integrator}},
                               reports, common);
      if (!lcsv.empty()) o.files.emplace_back(lcsv, csv.str());
      return o;
    };
  });

  // sdcheck
  auto* sd = app.add_subcommand("sdcheck", "exact Grassmann checks on micro-lattices");
  sd->require_subcommand(1);
  int sites = 1, order = 3, trials = 20;
  double sm = 1.0, sM = 1.0, sg = 0.3;
  auto model_opts = [&](CLI::App* c, double default_g) {
    c->add_option("--sites", sites, "number of sites (1..4)")->check(CLI::Range(1, 4));
    c->add_option("--m", sm, "fermion mass");
    c->add_option("--M", sM, "boson mass");
    c->add_option("--g", sg, "Yukawa coupling")->default_val(default_g);
  };
  auto* lemma1 = sd->add_subcommand("lemma1", "Schwinger-Dyson equation for Z_ft");
  model_opts(lemma1, 0.3);
  lemma1->add_option("--order", order, "source order (0..4)")->check(CLI::Range(0, 4));
  lemma1->callback([&] {
    action = [&] {
      const ModelParams params = params_of(sm, sM, sg);
      return json_outcome("sdcheck lemma1", {{"sites", sites}, {"m", sm}, {"M", sM}, {"g", sg}, {"order", order}},
                          {check_lemma1(sites, params, order), check_lemma1_corruption(sites, params, order)},
                          common);
    };
  });
  auto* appa = sd->add_subcommand("appendix-a", "Q^T U_l^T = U_r Q^T at random field points");
  model_opts(appa, 0.3);
  appa->add_option("--trials", trials, "random field points")->check(CLI::Range(1, 1000));
  appa->callback([&] {
    action = [&] {
      const ModelParams params = params_of(sm, sM, sg);
      return json_outcome("sdcheck appendix-a",
                          {{"sites", sites}, {"m", sm}, {"M", sM}, {"g", sg}, {"trials", trials}},
                          {check_appendix_a(sites, params, trials, common.seed)}, common);
    };
  });
  auto* sym = sd->add_subcommand("symmetry", "parity and CT invariance of the micro-lattice action");
  model_opts(sym, 0.0);
  sym->callback([&] {
    action = [&] {
      const ModelParams params = params_of(sm, sM, sg);
      return json_outcome("sdcheck symmetry", {{"sites", sites}, {"m", sm}, {"M", sM}, {"g", sg}},
                          check_symmetry(sites, params), common);
    };
  });

  // perturb
  auto* perturb = app.add_subcommand("perturb", "order-by-order Langevin vs Euclidean perturbation theory");
  perturb->require_subcommand(1);
  int porder = 2, pmodes = 1;
  double pm = 1.0, pM = 1.0, ptcut = 15.0, budget = 1e-6;
  std::string dump_path;
  auto* compare = perturb->add_subcommand("compare", "compare both sides at one order on a toy model");
  compare->add_option("--order", porder, "order in g (0..2)")->check(CLI::Range(0, 2));
  compare->add_option("--m", pm, "fermion mass");
  compare->add_option("--M", pM, "boson mass");
  compare->add_option("--modes", pmodes, "fermion modes kept (1..8)")->check(CLI::Range(1, 8));
  compare->add_option("--tcut", ptcut, "stochastic time cutoff");
  compare->add_option("--budget", budget, "error budget");
  compare->add_option("--dump-trees", dump_path, "write the tree and pairing listing here");
  compare->callback([&] {
    action = [&] {
      const ModelParams params = params_of(pm, pM, 0.0);
      if (!(ptcut > 0.0)) throw ConfigError("--tcut must be positive");
      const ToyModel toy = make_toy_model(params, toy_momenta(pmodes));
      Report r = check_lemma2(porder, toy, ptcut, budget);
      Outcome o = json_outcome("perturb compare",
                               {{"order", porder}, {"m", pm}, {"M", pM}, {"modes", pmodes}, {"tcut", ptcut},
                                {"budget", budget}},
                               {r}, common);
      if (!dump_path.empty())
        o.files.emplace_back(dump_path, dump_trees(porder, Observable::FermionTwoPoint, toy, 0));
      return o;
    };
  });

  // all
  auto* all = app.add_subcommand("all", "run every verification");
  AllSuite suite;
  all->add_flag("--quick", suite.quick, "reduced sizes");
  all->callback([&] {
    action = [&] { return json_outcome("all", {{"quick", suite.quick}}, run_all(suite, common), common); };
  });

  std::vector<std::string> argv_store{"sqf"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "sqf: " << e.what() << '\n';
    return kExitConfigError;
  }

  if (const char* env = std::getenv("SQF_SEED")) {
    try {
      std::size_t used = 0;
      common.seed = std::stoull(env, &used, 0);
      if (env[used] != '\0') throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      err << "sqf: SQF_SEED is not an unsigned integer: '" << env << "'\n";
      return kExitConfigError;
    }
  }

  try {
    const Outcome o = action();
    if (common.out_path.empty())
      out << o.text;
    else
      write_file(common.out_path, o.text);
    for (const auto& [path, text] : o.files) write_file(path, text);
    if (!o.pass) err << "sqf: one or more claims failed\n";
    return o.pass ? kExitPass : kExitClaimFailed;
  } catch (const ConfigError& e) {
    err << "sqf: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    err << "sqf: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::out_of_range& e) {
    err << "sqf: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "sqf: " << e.what() << '\n';
    return kExitClaimFailed;
  }
}

}  // namespace sqf
