// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "sqf/cli.hpp"

using namespace sqf;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("sqf_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST_CASE("gamma-check emits a versioned JSON report") {
  const Run r = run({"gamma-check"});
  CHECK(r.code == kExitPass);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["pass"] == true);
  CHECK(j["config"]["seed"] == 42);
  CHECK(j["reports"][0]["values"].contains("anticommutator"));
  CHECK(!j["reports"][0].contains("wall_time"));
  CHECK(nlohmann::json::parse(run({"--timing", "gamma-check"}).out)["reports"][0].contains("wall_time"));
}

TEST_CASE("configuration errors exit 2 without writing outputs") {
  const fs::path out = temp_path("never.json");
  fs::remove(out);
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"gamma-check", "--bogus"},
        {"--out", out.string(), "sdcheck", "lemma1", "--sites", "9"},
        {"--out", out.string(), "greens", "identity", "--p", "1;2"},
        {"--out", out.string(), "perturb", "compare", "--m", "-1"},
        {"--out", out.string(), "langevin", "boson", "--L", "15"},
        {"--out", out.string(), "langevin", "boson", "--integrator", "rk4"},
        {},
        {"nonsense"}}) {
    const Run r = run(args);
    CAPTURE(r.err);
    CHECK(r.code == kExitConfigError);
    CHECK(r.out.empty());
    CHECK(!r.err.empty());
  }
  CHECK(!fs::exists(out));
}

TEST_CASE("claim failures exit 1") {
  // At T_cut = 1 the stationary correlator is still far from S(p).
  const Run r = run({"greens", "stationary", "--m", "1", "--tcut", "1", "--grid", "2"});
  CHECK(r.code == kExitClaimFailed);
  CHECK(r.out.rfind("n1,n2,p1,p2,error\n", 0) == 0);
  CHECK(run({"greens", "stationary", "--tcut", "20", "--grid", "4"}).code == kExitPass);
}

TEST_CASE("greens eval writes one CSV row in full precision") {
  const Run r = run({"greens", "eval", "--m", "1", "--t", "0.5", "--p", "0,0"});
  CHECK(r.code == kExitPass);
  std::istringstream is(r.out);
  std::string header, row, extra;
  std::getline(is, header);
  std::getline(is, row);
  CHECK(!std::getline(is, extra));
  CHECK(header.rfind("t,p1,p2,G00_re", 0) == 0);
  // G(0.5, 0) = exp(-0.5) to 17 significant digits.
  CHECK(row.find(",0.60653065971263342,") != std::string::npos);
}

TEST_CASE("perturb compare and tree dump") {
  const fs::path dump = temp_path("trees.txt");
  const Run r = run({"perturb", "compare", "--order", "2", "--m", "1", "--M", "1", "--modes", "1", "--tcut", "15",
                     "--dump-trees", dump.string()});
  CHECK(r.code == kExitPass);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["reports"][0]["residual"].get<double>() < 1e-6);
  std::ifstream f(dump);
  std::string first;
  std::getline(f, first);
  CHECK(first == "order 2 trees 5");
  fs::remove(dump);
}

TEST_CASE("seeded runs are byte-identical and SQF_SEED overrides --seed") {
  const std::vector<std::string> args{"--seed", "42", "sdcheck", "appendix-a", "--sites", "2", "--trials", "3"};
  const Run a = run(args), b = run(args);
  CHECK(a.code == kExitPass);
  CHECK(a.out == b.out);
  ::setenv("SQF_SEED", "7", 1);
  const Run c = run(args);
  ::setenv("SQF_SEED", "x7", 1);
  const Run bad = run(args);
  ::unsetenv("SQF_SEED");
  CHECK(nlohmann::json::parse(c.out)["config"]["seed"] == 7);
  CHECK(bad.code == kExitConfigError);
}

TEST_CASE("langevin boson summary and CSV") {
  const fs::path csv = temp_path("boson.csv");
  const Run r = run({"langevin", "boson", "--L", "4", "--steps", "20000", "--burnin", "2000", "--chains", "2",
                     "--csv", csv.string()});
  CHECK(r.code != kExitConfigError);
  const auto j = nlohmann::json::parse(r.out);
  const auto& table = j["reports"][0]["values"]["modes_table"];
  CHECK(table.size() == 10);  // representative modes of a 4x4 lattice
  for (const auto& e : table)
    for (const char* k : {"mode", "estimate", "stderr", "exact", "zscore"}) CHECK(e.contains(k));
  std::ifstream f(csv);
  std::string header;
  std::getline(f, header);
  CHECK(header == "n1,n2,p1,p2,estimate,stderr,exact,zscore,samples");
  fs::remove(csv);
}
