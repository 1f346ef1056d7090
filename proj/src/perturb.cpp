// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
#include "sqf/perturb.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "sqf/grassmann.hpp"

namespace sqf {

using Kind = FixpointTree::Kind;
using Species = FixpointTree::Species;

ToyModel make_toy_model(const ModelParams& params, std::vector<Momentum2> modes) {
  params.validate();
  if (modes.empty() || modes.size() > 8) throw std::invalid_argument("toy model: 1..8 modes");
  ToyModel t{params, std::move(modes), 0.0};
  for (const auto& q : t.modes) t.c -= euclidean_S(q, params.m).trace().real();
  return t;
}

int FixpointTree::order() const {
  return static_cast<int>(
      std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.kind == Kind::Vertex; }));
}

int FixpointTree::num_leaves() const {
  return static_cast<int>(
      std::count_if(nodes.begin(), nodes.end(), [](const Node& n) { return n.kind == Kind::Leaf; }));
}

namespace {

const char* species_name(Species s) {
  switch (s) {
    case Species::Psi: return "psi";
    case Species::Psibar: return "psibar";
    case Species::Phi: return "phi";
  }
  return "?";
}

struct Sub {
  Kind kind;
  Species species;
  std::vector<Sub> children;
};

std::vector<Sub> subtrees(Species s, int k) {
  std::vector<Sub> out;
  if (k == 0) {
    out.push_back({Kind::Leaf, s, {}});
    return out;
  }
  for (int k1 = 0; k1 <= k - 1; ++k1) {
    const int k2 = k - 1 - k1;
    const Species first = s == Species::Phi ? Species::Psibar : Species::Phi;
    const Species second = s == Species::Phi ? Species::Psi : s;
    for (const Sub& a : subtrees(first, k1))
      for (const Sub& b : subtrees(second, k2)) out.push_back({Kind::Vertex, s, {a, b}});
  }
  return out;
}

int flatten(const Sub& s, FixpointTree& t) {
  const int idx = static_cast<int>(t.nodes.size());
  t.nodes.push_back({s.kind, s.species, {}});
  for (const Sub& c : s.children) {
    const int ci = flatten(c, t);
    t.nodes[idx].children.push_back(ci);
  }
  return idx;
}

void write_node(const FixpointTree& t, int i, std::ostringstream& os) {
  const auto& n = t.nodes[i];
  os << '(';
  if (n.kind == Kind::Root)
    os << "root";
  else
    os << species_name(n.species) << (n.kind == Kind::Leaf ? "-leaf" : "-vertex");
  for (int c : n.children) {
    os << ' ';
    write_node(t, c, os);
  }
  os << ')';
}

}  // namespace

std::string FixpointTree::to_string() const {
  std::ostringstream os;
  if (!nodes.empty()) write_node(*this, 0, os);
  return os.str();
}

std::vector<FixpointTree> expand_fixpoint(int order, Observable obs) {
  if (order < 0 || order > 3) throw std::invalid_argument("expand_fixpoint: order 0..3");
  std::vector<Sub> roots;
  if (obs == Observable::FermionTwoPoint) {
    for (int k1 = 0; k1 <= order; ++k1)
      for (const Sub& a : subtrees(Species::Psi, k1))
        for (const Sub& b : subtrees(Species::Psibar, order - k1))
          roots.push_back({Kind::Root, Species::Psi, {a, b}});
  } else {
    for (const Sub& a : subtrees(Species::Phi, order))
      roots.push_back({Kind::Root, Species::Phi, {a}});
  }
  std::vector<FixpointTree> out;
  for (const Sub& r : roots) {
    FixpointTree t;
    flatten(r, t);
    out.push_back(std::move(t));
  }
  return out;
}

long count_trees(int order, Observable obs) {
  std::map<std::pair<int, int>, long> memo;
  std::function<long(Species, int)> count = [&](Species s, int k) -> long {
    if (k == 0) return 1;
    auto key = std::pair{static_cast<int>(s), k};
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    long total = 0;
    for (int k1 = 0; k1 < k; ++k1) {
      if (s == Species::Phi)
        total += count(Species::Psibar, k1) * count(Species::Psi, k - 1 - k1);
      else
        total += count(Species::Phi, k1) * count(s, k - 1 - k1);
    }
    return memo[key] = total;
  };
  if (obs == Observable::BosonOnePoint) return count(Species::Phi, order);
  long total = 0;
  for (int k1 = 0; k1 <= order; ++k1)
    total += count(Species::Psi, k1) * count(Species::Psibar, order - k1);
  return total;
}

int permutation_sign(const std::vector<int>& positions) {
  int inversions = 0;
  for (std::size_t i = 0; i < positions.size(); ++i)
    for (std::size_t j = i + 1; j < positions.size(); ++j)
      if (positions[i] > positions[j]) ++inversions;
  return inversions % 2 ? -1 : 1;
}

namespace {

using Vec2 = std::array<Complex, 2>;

// Tree geometry: parent links, vertex numbering, fermion mode contexts.
struct TreeInfo {
  std::vector<int> parent;
  std::vector<int> vertex_of;    // node -> vertex index or -1
  std::vector<int> vertex_node;  // vertex index -> node
  std::vector<int> time_source;  // node -> vertex index whose time it carries, -1 for 0
  std::vector<int> leaf_nodes;   // depth-first
  // node -> phi-vertex index whose loop mode applies, -1 for the observed mode
  std::vector<int> mode_source;
};

TreeInfo analyse(const FixpointTree& t) {
  const int n = static_cast<int>(t.nodes.size());
  TreeInfo info;
  info.parent.assign(n, -1);
  info.vertex_of.assign(n, -1);
  info.time_source.assign(n, -1);
  info.mode_source.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    const auto& node = t.nodes[i];
    for (int c : node.children) info.parent[c] = i;
    if (node.kind == Kind::Vertex) {
      info.vertex_of[i] = static_cast<int>(info.vertex_node.size());
      info.vertex_node.push_back(i);
    }
    if (node.kind == Kind::Leaf) info.leaf_nodes.push_back(i);
  }
  // Preorder numbering guarantees parents precede children.
  for (int i = 1; i < n; ++i) {
    const int p = info.parent[i];
    info.time_source[i] = info.vertex_of[p] >= 0 ? info.vertex_of[p] : -1;
    if (t.nodes[p].kind == Kind::Vertex && t.nodes[p].species == Species::Phi)
      info.mode_source[i] = info.vertex_of[p];
    else
      info.mode_source[i] = info.mode_source[p];
  }
  return info;
}

struct Config {
  std::vector<int> vertex_mode;  // fermion mode per vertex; loop mode for phi vertices
  std::vector<bool> counterterm;
  std::vector<int> leaves;  // active leaves, as indices into TreeInfo::leaf_nodes
  std::vector<int> leaf_mode;
  std::vector<WickPairing> pairings;
};

void fermion_matchings(const std::vector<int>& psi, const std::vector<int>& psibar,
                       const std::vector<int>& mode, std::vector<int>& perm, std::vector<bool>& used,
                       std::vector<std::vector<int>>& out) {
  const std::size_t i = perm.size();
  if (i == psi.size()) {
    out.push_back(perm);
    return;
  }
  for (std::size_t j = 0; j < psibar.size(); ++j) {
    if (used[j] || mode[psi[i]] != mode[psibar[j]]) continue;
    used[j] = true;
    perm.push_back(static_cast<int>(j));
    fermion_matchings(psi, psibar, mode, perm, used, out);
    perm.pop_back();
    used[j] = false;
  }
}

void boson_matchings(std::vector<int> rest, std::vector<std::pair<int, int>>& cur,
                     std::vector<std::vector<std::pair<int, int>>>& out) {
  if (rest.empty()) {
    out.push_back(cur);
    return;
  }
  const int a = rest.front();
  for (std::size_t j = 1; j < rest.size(); ++j) {
    std::vector<int> next;
    for (std::size_t k = 1; k < rest.size(); ++k)
      if (k != j) next.push_back(rest[k]);
    cur.emplace_back(a, rest[j]);
    boson_matchings(next, cur, out);
    cur.pop_back();
  }
}

std::vector<Config> enumerate_configs(const FixpointTree& t, const TreeInfo& info, int num_modes,
                                      int mode) {
  const int nv = static_cast<int>(info.vertex_node.size());
  std::vector<int> ct_eligible;
  std::vector<int> phi_vertices;
  for (int v = 0; v < nv; ++v) {
    const auto& node = t.nodes[info.vertex_node[v]];
    if (node.species != Species::Phi) continue;
    phi_vertices.push_back(v);
    if (t.nodes[node.children[0]].kind == Kind::Leaf && t.nodes[node.children[1]].kind == Kind::Leaf)
      ct_eligible.push_back(v);
  }

  std::vector<Config> out;
  for (unsigned variant = 0; variant < (1u << ct_eligible.size()); ++variant) {
    std::vector<bool> ct(nv, false);
    for (std::size_t e = 0; e < ct_eligible.size(); ++e)
      if (variant & (1u << e)) ct[ct_eligible[e]] = true;
    std::vector<int> loops;
    for (int v : phi_vertices)
      if (!ct[v]) loops.push_back(v);

    std::size_t combos = 1;
    for (std::size_t l = 0; l < loops.size(); ++l) combos *= static_cast<std::size_t>(num_modes);
    for (std::size_t code = 0; code < combos; ++code) {
      Config cfg;
      cfg.counterterm = ct;
      std::vector<int> loop_mode(nv, -1);
      std::size_t rem = code;
      for (int v : loops) {
        loop_mode[v] = static_cast<int>(rem % num_modes);
        rem /= num_modes;
      }
      auto node_mode = [&](int node) {
        const int src = info.mode_source[node];
        return src < 0 ? mode : loop_mode[src];
      };
      cfg.vertex_mode.resize(nv);
      for (int v = 0; v < nv; ++v) {
        const int node = info.vertex_node[v];
        cfg.vertex_mode[v] = t.nodes[node].species == Species::Phi ? loop_mode[v] : node_mode(node);
      }
      cfg.leaf_mode.assign(info.leaf_nodes.size(), -1);
      std::vector<int> psi, psibar, phi;
      std::vector<int> grassmann_pos(info.leaf_nodes.size(), -1);
      int gpos = 0;
      for (std::size_t l = 0; l < info.leaf_nodes.size(); ++l) {
        const int node = info.leaf_nodes[l];
        const int src = info.time_source[node];
        if (src >= 0 && ct[src]) continue;
        cfg.leaves.push_back(static_cast<int>(l));
        const Species s = t.nodes[node].species;
        if (s == Species::Phi) {
          phi.push_back(static_cast<int>(l));
          continue;
        }
        cfg.leaf_mode[l] = node_mode(node);
        grassmann_pos[l] = gpos++;
        (s == Species::Psi ? psi : psibar).push_back(static_cast<int>(l));
      }
      if (psi.size() != psibar.size() || phi.size() % 2) {
        out.push_back(std::move(cfg));
        continue;
      }
      std::vector<std::vector<int>> fperms;
      std::vector<int> perm;
      std::vector<bool> used(psibar.size(), false);
      fermion_matchings(psi, psibar, cfg.leaf_mode, perm, used, fperms);
      std::vector<std::vector<std::pair<int, int>>> bmatch;
      std::vector<std::pair<int, int>> cur;
      boson_matchings(phi, cur, bmatch);
      for (const auto& fp : fperms) {
        WickPairing w;
        std::vector<int> positions;
        for (std::size_t i = 0; i < psi.size(); ++i) {
          w.fermion.emplace_back(psi[i], psibar[fp[i]]);
          positions.push_back(grassmann_pos[psi[i]]);
          positions.push_back(grassmann_pos[psibar[fp[i]]]);
        }
        w.sign = permutation_sign(positions);
        for (const auto& bm : bmatch) {
          w.boson = bm;
          cfg.pairings.push_back(w);
        }
      }
      out.push_back(std::move(cfg));
    }
  }
  return out;
}

struct Evaluator {
  const FixpointTree& tree;
  const TreeInfo& info;
  const ToyModel& model;
  Observable obs;
  const std::vector<SpinMatrix>& corr;  // stationary fermion correlator per mode
  double boson_var;

  // Scratch filled per call.
  mutable std::vector<SpinMatrix> kernel;
  mutable std::vector<double> scalar_kernel;
  mutable std::vector<int> comp;  // spinor component per leaf index

  double time_of(const std::vector<double>& t, int src) const { return src < 0 ? 0.0 : t[src]; }

  struct Val {
    Vec2 v{};
    Complex s{};
  };

  Val eval(int node, const Config& cfg, const std::vector<int>& leaf_index) const {
    const auto& n = tree.nodes[node];
    Val out;
    if (n.kind == Kind::Leaf) {
      if (n.species == Species::Phi) {
        out.s = 1.0;
      } else {
        out.v[comp[leaf_index[node]]] = 1.0;
      }
      return out;
    }
    const int v = info.vertex_of[node];
    if (n.species == Species::Phi) {
      if (cfg.counterterm[v]) {
        out.s = scalar_kernel[v] * model.c;
        return out;
      }
      const Val a = eval(n.children[0], cfg, leaf_index);
      const Val b = eval(n.children[1], cfg, leaf_index);
      out.s = -scalar_kernel[v] * (a.v[0] * b.v[0] + a.v[1] * b.v[1]);
      return out;
    }
    const Val a = eval(n.children[0], cfg, leaf_index);
    const Val b = eval(n.children[1], cfg, leaf_index);
    const SpinMatrix& k = kernel[v];
    for (int i = 0; i < 2; ++i) out.v[i] = -a.s * (k(i, 0) * b.v[0] + k(i, 1) * b.v[1]);
    return out;
  }

  SpinMatrix operator()(const std::vector<double>& t, const std::vector<Config>& configs,
                        const std::vector<int>& leaf_index) const {
    const int nv = static_cast<int>(info.vertex_node.size());
    const double m = model.params.m;
    const double M2 = model.params.M * model.params.M;
    kernel.resize(nv);
    scalar_kernel.assign(nv, 0.0);
    SpinMatrix total;
    for (const Config& cfg : configs) {
      if (cfg.pairings.empty()) continue;
      for (int v = 0; v < nv; ++v) {
        const int node = info.vertex_node[v];
        const double dt = time_of(t, info.time_source[node]) - t[v];
        const Species s = tree.nodes[node].species;
        if (s == Species::Phi) {
          scalar_kernel[v] = std::exp(-M2 * dt);
        } else {
          const SpinMatrix g = retarded_G(dt, model.modes[cfg.vertex_mode[v]], m);
          kernel[v] = s == Species::Psi ? g : g.transpose();
        }
      }
      auto leaf_time = [&](int l) { return time_of(t, info.time_source[info.leaf_nodes[l]]); };

      // Pair factors depend on times only; evaluate once per pairing.
      std::vector<std::vector<SpinMatrix>> fpair(cfg.pairings.size());
      std::vector<double> bfactor(cfg.pairings.size());
      for (std::size_t w = 0; w < cfg.pairings.size(); ++w) {
        const auto& pr = cfg.pairings[w];
        for (auto [a, b] : pr.fermion) {
          const double d = std::abs(leaf_time(a) - leaf_time(b));
          const int q = cfg.leaf_mode[a];
          fpair[w].push_back(retarded_G(d, model.modes[q], m) * corr[q]);
        }
        double bf = pr.sign;
        for (auto [a, b] : pr.boson) bf *= boson_var * std::exp(-M2 * std::abs(leaf_time(a) - leaf_time(b)));
        bfactor[w] = bf;
      }

      std::vector<int> fleaves;
      for (int l : cfg.leaves)
        if (cfg.leaf_mode[l] >= 0) fleaves.push_back(l);
      comp.assign(info.leaf_nodes.size(), 0);
      for (unsigned bits = 0; bits < (1u << fleaves.size()); ++bits) {
        for (std::size_t i = 0; i < fleaves.size(); ++i) comp[fleaves[i]] = (bits >> i) & 1u;
        Complex weight = 0.0;
        for (std::size_t w = 0; w < cfg.pairings.size(); ++w) {
          Complex f = bfactor[w];
          const auto& pr = cfg.pairings[w];
          for (std::size_t j = 0; j < pr.fermion.size(); ++j)
            f *= fpair[w][j](comp[pr.fermion[j].first], comp[pr.fermion[j].second]);
          weight += f;
        }
        if (weight == Complex{}) continue;
        const auto& root = tree.nodes[0];
        if (obs == Observable::FermionTwoPoint) {
          const Val a = eval(root.children[0], cfg, leaf_index);
          const Val b = eval(root.children[1], cfg, leaf_index);
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) total(i, j) += weight * a.v[i] * b.v[j];
        } else {
          total += SpinMatrix::scalar(weight * eval(root.children[0], cfg, leaf_index).s);
        }
      }
    }
    return total;
  }
};

double envelope(const FixpointTree& t, const TreeInfo& info, const std::vector<Config>& configs,
                const ToyModel& model, const std::vector<SpinMatrix>& corr, double boson_var) {
  double rates = 1.0;
  for (int node : info.vertex_node)
    rates /= t.nodes[node].species == Species::Phi ? model.params.M * model.params.M : model.params.m;
  double sum = 0.0;
  for (const Config& cfg : configs) {
    double ct = 1.0;
    for (bool b : cfg.counterterm)
      if (b) ct *= std::abs(model.c);
    int nf = 0;
    for (int l : cfg.leaves)
      if (cfg.leaf_mode[l] >= 0) ++nf;
    for (const auto& pr : cfg.pairings) {
      double b = std::ldexp(1.0, nf) * ct;
      for (auto [a, x] : pr.fermion) b *= corr[cfg.leaf_mode[a]].frobenius_norm();
      for (std::size_t k = 0; k < pr.boson.size(); ++k) b *= boson_var;
      sum += b;
    }
  }
  return rates * sum;
}

struct Prepared {
  TreeInfo info;
  std::vector<Config> configs;
  std::vector<int> leaf_index;  // node -> leaf index
};

Prepared prepare(const FixpointTree& t, const ToyModel& model, int mode) {
  Prepared p{analyse(t), {}, {}};
  p.configs = enumerate_configs(t, p.info, static_cast<int>(model.modes.size()), mode);
  p.leaf_index.assign(t.nodes.size(), -1);
  for (std::size_t l = 0; l < p.info.leaf_nodes.size(); ++l)
    p.leaf_index[p.info.leaf_nodes[l]] = static_cast<int>(l);
  return p;
}

void check_mode(const ToyModel& model, int mode) {
  if (mode < 0 || mode >= static_cast<int>(model.modes.size()))
    throw std::out_of_range("toy model: mode index out of range");
}

}  // namespace

PerturbResult contract_and_integrate(const std::vector<FixpointTree>& trees, Observable obs,
                                     const ToyModel& model, int mode, double t_cut,
                                     const QuadOptions& opts) {
  check_mode(model, mode);
  if (!(t_cut > 0.0)) throw std::invalid_argument("contract_and_integrate: t_cut must be positive");
  std::vector<SpinMatrix> corr;
  for (const auto& q : model.modes)
    corr.push_back(stationary_fermion_correlator(t_cut, q, model.params.m, {1e-14, 1e-13}));
  const double boson_var = stationary_boson_variance(t_cut, {}, model.params.M, {1e-14, 1e-13});

  PerturbResult res;
  for (const FixpointTree& tree : trees) {
    const Prepared prep = prepare(tree, model, mode);
    const Evaluator ev{tree, prep.info, model, obs, corr, boson_var, {}, {}, {}};
    const int nv = static_cast<int>(prep.info.vertex_node.size());
    std::vector<double> times(nv, 0.0);

    QuadOptions inner = opts;
    inner.abs_tol = opts.abs_tol * 1e-2;
    inner.throw_on_failure = false;
    std::function<SpinMatrix(int)> level = [&](int v) -> SpinMatrix {
      if (v == nv) return ev(times, prep.configs, prep.leaf_index);
      const double upper = ev.time_of(times, prep.info.time_source[prep.info.vertex_node[v]]);
      std::vector<double> cuts(times.begin(), times.begin() + v);
      cuts.push_back(0.0);
      auto f = [&](double s) {
        times[v] = s;
        return level(v + 1);
      };
      if (v == 0) {
        const auto r = integrate(f, -t_cut, upper, opts, cuts);
        res.quad_error += r.error;
        return r.value;
      }
      return integrate(f, -t_cut, upper, inner, cuts).value;
    };
    const SpinMatrix term = level(0);
    res.value += term;
    const double env = envelope(tree, prep.info, prep.configs, model, corr, boson_var);
    if (env > 0.0) res.envelope_ratio = std::max(res.envelope_ratio, term.max_abs() / env);
  }
  return res;
}

namespace {

double phi_moment(int n, double M) {
  if (n % 2) return 0.0;
  double r = 1.0;
  for (int k = n - 1; k > 0; k -= 2) r *= k;
  return r / std::pow(M * M, n / 2);
}

// <prefix B^r> in the free theory; prefix is either empty or (psi_a, psibar_b).
class FermionMoments {
 public:
  FermionMoments(const ToyModel& model, OracleMethod method) : method_(method) {
    const int nm = static_cast<int>(model.modes.size());
    nf_ = 2 * nm;
    S_ = Eigen::MatrixXcd::Zero(nf_, nf_);
    A_ = Eigen::MatrixXcd::Zero(nf_, nf_);
    for (int q = 0; q < nm; ++q) {
      const SpinMatrix s = euclidean_S(model.modes[q], model.params.m);
      const SpinMatrix a = SpinMatrix::scalar(model.params.m) + kI * slash(model.modes[q]);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          S_(2 * q + i, 2 * q + j) = s(i, j);
          A_(2 * q + i, 2 * q + j) = a(i, j);
        }
    }
    if (method_ == OracleMethod::Berezin && nm > 4)
      throw std::invalid_argument("diagrammatic_oracle: Berezin method supports at most 4 modes");
  }

  Complex operator()(std::optional<std::pair<int, int>> prefix, int r) const {
    return method_ == OracleMethod::Determinant ? by_determinant(prefix, r) : by_berezin(prefix, r);
  }

 private:
  Complex by_determinant(std::optional<std::pair<int, int>> prefix, int r) const {
    const int base = prefix ? 1 : 0;
    const int n = base + r;
    if (n == 0) return 1.0;
    std::vector<int> x(r, 0);
    Complex total = 0.0;
    for (;;) {
      std::vector<int> rows, cols;
      if (prefix) {
        rows.push_back(prefix->first);
        cols.push_back(prefix->second);
      }
      for (int v : x) {
        rows.push_back(v);
        cols.push_back(v);
      }
      Eigen::MatrixXcd sub(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sub(i, j) = S_(rows[i], cols[j]);
      total += sub.determinant();
      int k = 0;
      while (k < r && ++x[k] == nf_) x[k++] = 0;
      if (k == r) break;
    }
    return r % 2 ? -total : total;
  }

  Complex by_berezin(std::optional<std::pair<int, int>> prefix, int r) const {
    using G = GrassmannElement<Complex>;
    const int ng = 2 * nf_;
    auto psi = [&](int i) { return G::generator(ng, 2 * i); };
    auto psibar = [&](int i) { return G::generator(ng, 2 * i + 1); };
    G action(ng), bilinear(ng);
    for (int i = 0; i < nf_; ++i) {
      bilinear += psibar(i) * psi(i);
      for (int j = 0; j < nf_; ++j)
        if (A_(i, j) != Complex{}) action += psibar(i) * psi(j) * Polynomial<Complex>{A_(i, j)};
    }
    const G weight = (-action).exp();
    G x = G::scalar(ng, Polynomial<Complex>{Complex{1.0}});
    if (prefix) x = psi(prefix->first) * psibar(prefix->second);
    for (int k = 0; k < r; ++k) x = x * bilinear;
    const std::uint64_t top = ng == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << ng) - 1;
    const Complex z = weight.coefficient(top).constant();
    return (x * weight).coefficient(top).constant() / z;
  }

  OracleMethod method_;
  int nf_ = 0;
  Eigen::MatrixXcd S_, A_;
};

}  // namespace

SpinMatrix diagrammatic_oracle(int order, Observable obs, const ToyModel& model, int mode,
                               OracleMethod method) {
  check_mode(model, mode);
  if (order < 0 || order > 2) throw std::invalid_argument("diagrammatic_oracle: order 0..2");
  const FermionMoments moment(model, method);
  const double M = model.params.M;
  const double c = model.c;

  // <prefix (B - c)^k> by the binomial expansion.
  auto shifted = [&](std::optional<std::pair<int, int>> prefix, int k) {
    Complex total = 0.0;
    double binom = 1.0;
    for (int r = 0; r <= k; ++r) {
      total += binom * std::pow(-c, k - r) * moment(prefix, r);
      binom = binom * (k - r) / (r + 1);
    }
    return total;
  };
  auto coeff = [&](int k) { return (k % 2 ? -1.0 : 1.0) / std::tgamma(k + 1.0); };

  std::vector<Complex> D(order + 1);
  for (int k = 0; k <= order; ++k) D[k] = coeff(k) * phi_moment(k, M) * shifted(std::nullopt, k);

  auto divide = [&](const std::vector<Complex>& N) {
    std::vector<Complex> R(order + 1);
    for (int k = 0; k <= order; ++k) {
      R[k] = N[k];
      for (int j = 1; j <= k; ++j) R[k] -= R[k - j] * D[j];
      R[k] /= D[0];
    }
    return R[order];
  };

  if (obs == Observable::BosonOnePoint) {
    std::vector<Complex> N(order + 1);
    for (int k = 0; k <= order; ++k) N[k] = coeff(k) * phi_moment(k + 1, M) * shifted(std::nullopt, k);
    return SpinMatrix::scalar(divide(N));
  }
  SpinMatrix out;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const auto prefix = std::optional{std::pair{2 * mode + a, 2 * mode + b}};
      std::vector<Complex> N(order + 1);
      for (int k = 0; k <= order; ++k) N[k] = coeff(k) * phi_moment(k, M) * shifted(prefix, k);
      out(a, b) = divide(N);
    }
  return out;
}

Lemma2Report lemma2_compare(int order, const ToyModel& model, int mode, double t_cut, double budget) {
  if (order < 0 || order > 2) throw std::invalid_argument("lemma2_compare: order 0..2");
  Lemma2Report r;
  r.order = order;
  r.budget = budget;
  r.lhs = contract_and_integrate(expand_fixpoint(order, Observable::FermionTwoPoint),
                                 Observable::FermionTwoPoint, model, mode, t_cut)
              .value;
  r.rhs = diagrammatic_oracle(order, Observable::FermionTwoPoint, model, mode);
  r.diff = (r.lhs - r.rhs).max_abs();
  r.pass = r.diff <= budget;
  return r;
}

std::string dump_trees(int order, Observable obs, const ToyModel& model, int mode) {
  check_mode(model, mode);
  std::ostringstream os;
  const auto trees = expand_fixpoint(order, obs);
  os << "order " << order << " trees " << trees.size() << '\n';
  for (std::size_t i = 0; i < trees.size(); ++i) {
    const Prepared prep = prepare(trees[i], model, mode);
    os << "tree " << i << ' ' << trees[i].to_string() << '\n';
    for (const Config& cfg : prep.configs) {
      os << "  config modes=[";
      for (std::size_t v = 0; v < cfg.vertex_mode.size(); ++v)
        os << (v ? "," : "") << (cfg.counterterm[v] ? std::string("ct") : std::to_string(cfg.vertex_mode[v]));
      os << "] pairings " << cfg.pairings.size() << '\n';
      for (const auto& pr : cfg.pairings) {
        os << "    sign " << (pr.sign > 0 ? '+' : '-');
        for (auto [a, b] : pr.fermion) os << " f(" << a << ',' << b << ')';
        for (auto [a, b] : pr.boson) os << " b(" << a << ',' << b << ')';
        os << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace sqf
