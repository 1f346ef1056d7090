// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
#include "sqf/sdcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <tuple>

#include "sqf/quadrature.hpp"
#include "sqf/rng.hpp"

namespace sqf {

namespace {

constexpr std::uint64_t low_bits(int n) {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

// Drops every term whose Grassmann degree in weight_mask plus polynomial
// degree in var_mask exceeds max_weight.
GElem truncate(const GElem& e, std::uint64_t weight_mask, unsigned var_mask, int max_weight) {
  return GElem::multiply(e, GElem::scalar(e.num_generators(), CPoly{Complex{1.0}}), weight_mask,
                         var_mask, max_weight);
}

GElem integrate_boson(const GElem& integrand, int n, const Eigen::VectorXd& mean,
                      const Eigen::MatrixXd& chol, int nodes) {
  const GaussHermiteRule rule = gauss_hermite(nodes);
  const unsigned phi_mask = static_cast<unsigned>(low_bits(n)) << n;
  GElem sum(integrand.num_generators());
  std::vector<int> idx(n, 0);
  for (;;) {
    Eigen::VectorXd z(n);
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      z(d) = rule.nodes[idx[d]];
      w *= rule.weights[idx[d]];
    }
    const Eigen::VectorXd phi = mean + chol * z;
    std::array<Complex, Monomial::kMaxVars> values{};
    for (int x = 0; x < n; ++x) values[n + x] = phi(x);
    sum += integrand.map_coefficients(
        [&](const CPoly& p) { return p.evaluate(phi_mask, values) * Complex{w}; });
    int d = 0;
    while (d < n && ++idx[d] == nodes) idx[d++] = 0;
    if (d == n) break;
  }
  return sum;
}

}  // namespace

ZftResult z_ft(const MicroModel& model, int source_order) {
  const int n = model.num_sites(), nf = model.num_fermion(), ns = 2 * nf;
  if (2 * n > Monomial::kMaxVars) throw std::invalid_argument("z_ft: at most 4 sites");
  if (source_order < 0 || source_order > 8) throw std::invalid_argument("z_ft: order must be 0..8");
  const double g = model.params.g;
  const unsigned j_mask = static_cast<unsigned>(low_bits(n));

  // Fermion integral at fixed phi: det(A) exp(kbar A^{-1} k), A = K + g diag(phi).
  std::vector<std::vector<GElem>> a(nf, std::vector<GElem>(nf, GElem(ns)));
  for (int f = 0; f < nf; ++f)
    for (int h = 0; h < nf; ++h) {
      CPoly entry{model.K(f, h)};
      if (f == h && g != 0.0) entry += CPoly::variable(n + f / 2) * Complex{g};
      a[f][h] = GElem::scalar(ns, entry);
    }
  std::vector<int> k(nf), kbar(nf);
  for (int f = 0; f < nf; ++f) k[f] = f, kbar[f] = nf + f;
  const GElem fermion = gaussian_berezin<Complex>(a, ns, k, kbar, source_order / 2);

  // exp(j phi) through order source_order.
  CPoly jphi, power{Complex{1.0}}, e_jphi{Complex{1.0}};
  for (int x = 0; x < n; ++x) jphi += CPoly::variable(x) * CPoly::variable(n + x);
  for (int r = 1; r <= source_order; ++r) {
    power = power * jphi * Complex{1.0 / r};
    e_jphi += power;
  }
  const GElem integrand = GElem::multiply(fermion, GElem::scalar(ns, e_jphi), low_bits(ns),
                                          j_mask, source_order);

  // exp(-phi B phi / 2 + g c sum phi) is Gaussian with mean g c B^{-1} 1.
  const Eigen::MatrixXd cov = model.B.inverse();
  const Eigen::VectorXd mean = g * model.c * cov * Eigen::VectorXd::Ones(n);
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw std::runtime_error("z_ft: boson form not positive");
  const Eigen::MatrixXd chol = llt.matrixL();

  ZftResult out;
  out.source_order = source_order;
  out.nodes = source_order + 4;
  auto normalized = [&](int nodes) {
    GElem z = integrate_boson(integrand, n, mean, chol, nodes);
    const Complex z0 = z.scalar_part().constant();
    if (z0 == Complex{}) throw std::runtime_error("z_ft: Z(0) vanishes");
    return z * CPoly{1.0 / z0};
  };
  out.z = normalized(out.nodes);
  out.doubling_discrepancy = (out.z - normalized(2 * out.nodes)).max_abs_coeff();
  if (out.doubling_discrepancy > 1e-10)
    throw std::runtime_error("z_ft: Gauss-Hermite node doubling changed Z by more than 1e-10");
  return out;
}

Lemma1Report lemma1_residual(const MicroModel& model, int max_order, double mass_shift) {
  if (max_order < 0 || max_order > 4) throw std::invalid_argument("lemma1_residual: order 0..4");
  const int n = model.num_sites(), nf = model.num_fermion(), ns = 2 * nf;
  const double g = model.params.g;
  const ZftResult zr = z_ft(model, max_order + 2);
  const GElem& z = zr.z;
  const Eigen::MatrixXcd kmat = fermion_matrix(model, model.params.m + mass_shift);
  const std::uint64_t all = low_bits(ns);
  const unsigned j_mask = static_cast<unsigned>(low_bits(n));

  auto dk = [&](const GElem& e, int f) { return -e.derive(f, DerivativeSide::Left); };
  auto dkbar = [&](const GElem& e, int f) { return e.derive(nf + f, DerivativeSide::Left); };
  auto dj = [](const GElem& e, int x) {
    return e.map_coefficients([x](const CPoly& p) { return p.derivative(x); });
  };
  auto times_j = [](const GElem& e, int x) {
    return e.map_coefficients([x](const CPoly& p) { return p * CPoly::variable(x); });
  };

  std::vector<GElem> dkbar_z(nf, GElem(ns)), dk_z(nf, GElem(ns));
  for (int f = 0; f < nf; ++f) {
    dkbar_z[f] = dkbar(z, f);
    dk_z[f] = dk(z, f);
  }

  Lemma1Report rep;
  rep.max_order = max_order;
  rep.nodes = zr.nodes;
  rep.doubling_discrepancy = zr.doubling_discrepancy;
  auto record = [&](const GElem& component) {
    const GElem t = truncate(component, all, j_mask, max_order);
    rep.residual = std::max(rep.residual, t.max_abs_coeff());
    if (!t.parity()) rep.parity_homogeneous = false;
  };

  for (int f = 0; f < nf; ++f) {
    const int x = f / 2;
    // psi row: K psi + g psi phi - k.
    GElem r1 = -(GElem::generator(ns, f) * z);
    // psibar row: K^T psibar + g psibar phi - kbar.
    GElem r2 = -(GElem::generator(ns, nf + f) * z);
    for (int h = 0; h < nf; ++h) {
      if (kmat(f, h) != Complex{}) r1 += dkbar_z[h] * CPoly{kmat(f, h)};
      if (kmat(h, f) != Complex{}) r2 += dk_z[h] * CPoly{kmat(h, f)};
    }
    if (g != 0.0) {
      r1 += dj(dkbar_z[f], x) * CPoly{Complex{g}};
      r2 += dj(dk_z[f], x) * CPoly{Complex{g}};
    }
    record(r1);
    record(r2);
  }
  for (int x = 0; x < n; ++x) {
    // phi row: B phi + g (psibar psi - c) - j.
    GElem r3 = -times_j(z, x);
    for (int y = 0; y < n; ++y)
      if (model.B(x, y) != 0.0) r3 += dj(z, y) * CPoly{Complex{model.B(x, y)}};
    if (g != 0.0) {
      GElem bilinear = z * CPoly{Complex{-model.c}};
      for (int a = 0; a < 2; ++a) bilinear += dk(dkbar_z[2 * x + a], 2 * x + a);
      r3 += bilinear * CPoly{Complex{g}};
    }
    record(r3);
  }
  return rep;
}

MixedOperatorMatrix::MixedOperatorMatrix(std::array<int, 3> sizes, int num_generators)
    : sizes_(sizes), n_(num_generators) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      blocks_[r][c].assign(sizes[r], std::vector<GElem>(sizes[c], GElem(num_generators)));
}

MixedOperatorMatrix MixedOperatorMatrix::q(int nf, int nb, int num_generators, bool transpose) {
  MixedOperatorMatrix m({nf, nf, nb}, num_generators);
  const GElem one = GElem::scalar(num_generators, CPoly{Complex{1.0}});
  for (int i = 0; i < nf; ++i) {
    m.at(0, 1, i, i) = transpose ? one : -one;
    m.at(1, 0, i, i) = transpose ? -one : one;
  }
  for (int i = 0; i < nb; ++i) m.at(2, 2, i, i) = one;
  return m;
}

MixedOperatorMatrix operator*(const MixedOperatorMatrix& a, const MixedOperatorMatrix& b) {
  if (a.sizes_ != b.sizes_ || a.n_ != b.n_)
    throw std::invalid_argument("MixedOperatorMatrix: shape mismatch");
  MixedOperatorMatrix out(a.sizes_, a.n_);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      for (int m = 0; m < 3; ++m)
        for (int i = 0; i < a.sizes_[r]; ++i)
          for (int j = 0; j < a.sizes_[c]; ++j)
            for (int k = 0; k < a.sizes_[m]; ++k) {
              const GElem& x = a.blocks_[r][m][i][k];
              const GElem& y = b.blocks_[m][c][k][j];
              if (!x.is_zero() && !y.is_zero()) out.blocks_[r][c][i][j] += x * y;
            }
  return out;
}

MixedOperatorMatrix operator-(const MixedOperatorMatrix& a, const MixedOperatorMatrix& b) {
  if (a.sizes_ != b.sizes_ || a.n_ != b.n_)
    throw std::invalid_argument("MixedOperatorMatrix: shape mismatch");
  MixedOperatorMatrix out = a;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      for (int i = 0; i < a.sizes_[r]; ++i)
        for (int j = 0; j < a.sizes_[c]; ++j) out.blocks_[r][c][i][j] -= b.blocks_[r][c][i][j];
  return out;
}

double MixedOperatorMatrix::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& row : blocks_)
    for (const auto& blk : row)
      for (const auto& line : blk)
        for (const auto& e : line) m = std::max(m, e.max_abs_coeff());
  return m;
}

bool MixedOperatorMatrix::parity_consistent() const {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      for (const auto& line : blocks_[r][c])
        for (const auto& e : line)
          if (!e.is_zero() && e.parity() != (kParity[r] + kParity[c]) % 2) return false;
  return true;
}

FieldPoint random_field_point(const MicroModel& model, std::uint64_t seed, int num_aux) {
  if (num_aux < 1 || num_aux > 64) throw std::invalid_argument("random_field_point: 1..64 generators");
  CounterRng rng(seed, 0xa11ce, 0);
  auto small_int = [&] { return static_cast<double>(static_cast<int>(rng.next_u64() % 7) - 3); };
  auto odd_element = [&] {
    GElem e(num_aux);
    for (int t = 0; t < 4; ++t) {
      std::uint64_t mask = rng.next_u64() & low_bits(num_aux);
      if (std::popcount(mask) % 2 == 0) mask ^= 1;
      e.add_term(mask, CPoly{Complex{small_int(), small_int()}});
    }
    return e;
  };
  FieldPoint fp;
  fp.num_aux = num_aux;
  for (int f = 0; f < model.num_fermion(); ++f) {
    fp.psi.push_back(odd_element());
    fp.psibar.push_back(odd_element());
  }
  for (int x = 0; x < model.num_sites(); ++x) fp.phi.push_back(small_int());
  return fp;
}

namespace {

enum Species { kPsi = 0, kPsibar = 1, kPhi = 2 };

GElem derive_species(const MicroModel& model, const GElem& e, Species s, int i) {
  switch (s) {
    case kPsi: return e.derive(model.psi(i), DerivativeSide::Left);
    case kPsibar: return e.derive(model.psibar(i), DerivativeSide::Left);
    case kPhi: return e.map_coefficients([i](const CPoly& p) { return p.derivative(i); });
  }
  throw std::logic_error("derive_species");
}

struct TableEntry {
  Species a, b;
  int sign;
};

// Rows are the U_r and U_l^T tables; entry = sign * d/da (dL/db).
constexpr TableEntry kUr[3][3] = {
    {{kPsibar, kPsi, -1}, {kPsibar, kPsibar, -1}, {kPsibar, kPhi, 1}},
    {{kPsi, kPsi, 1}, {kPsi, kPsibar, 1}, {kPsi, kPhi, -1}},
    {{kPhi, kPsi, -1}, {kPhi, kPsibar, -1}, {kPhi, kPhi, 1}},
};
constexpr TableEntry kUlT[3][3] = {
    {{kPsi, kPsibar, 1}, {kPsi, kPsi, -1}, {kPsi, kPhi, 1}},
    {{kPsibar, kPsibar, 1}, {kPsibar, kPsi, -1}, {kPsibar, kPhi, 1}},
    {{kPhi, kPsibar, 1}, {kPhi, kPsi, -1}, {kPhi, kPhi, 1}},
};

MixedOperatorMatrix assemble(const MicroModel& model, const GElem& action,
                             const FieldPoint& point, const TableEntry (&table)[3][3]) {
  const int nf = model.num_fermion(), nb = model.num_sites();
  const std::array<int, 3> sizes{nf, nf, nb};
  auto count = [&](Species s) { return s == kPhi ? nb : nf; };
  std::vector<GElem> images(2 * nf, GElem(point.num_aux));
  for (int f = 0; f < nf; ++f) {
    images[model.psi(f)] = point.psi.at(f);
    images[model.psibar(f)] = point.psibar.at(f);
  }
  std::array<Complex, Monomial::kMaxVars> phi{};
  for (int x = 0; x < nb; ++x) phi[x] = point.phi.at(x);
  const unsigned phi_mask = static_cast<unsigned>(low_bits(nb));
  auto at_point = [&](const CPoly& p) { return p.evaluate(phi_mask, phi); };

  MixedOperatorMatrix u(sizes, point.num_aux);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) {
      const TableEntry t = table[r][c];
      if (count(t.a) != sizes[r] || count(t.b) != sizes[c]) throw std::logic_error("U table shape");
      for (int i = 0; i < sizes[r]; ++i)
        for (int j = 0; j < sizes[c]; ++j) {
          GElem d = derive_species(model, derive_species(model, action, t.b, j), t.a, i);
          if (t.sign < 0) d = -d;
          u.at(r, c, i, j) = d.substitute(std::span<const GElem>(images), point.num_aux, at_point);
        }
    }
  return u;
}

}  // namespace

std::pair<MixedOperatorMatrix, MixedOperatorMatrix> build_U_matrices(const MicroModel& model,
                                                                     const FieldPoint& point) {
  const GElem action = action_element(model);
  return {assemble(model, action, point, kUr), assemble(model, action, point, kUlT)};
}

AppendixAReport appendix_a_check(const MicroModel& model, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("appendix_a_check: trials >= 1");
  AppendixAReport rep;
  rep.trials = trials;
  const int nf = model.num_fermion(), nb = model.num_sites();
  for (int t = 0; t < trials; ++t) {
    const FieldPoint point = random_field_point(model, seed + static_cast<std::uint64_t>(t));
    const auto [ur, ult] = build_U_matrices(model, point);
    const auto qt = MixedOperatorMatrix::q(nf, nb, point.num_aux, true);
    rep.residual = std::max(rep.residual, (qt * ult - ur * qt).max_abs_coeff());
    rep.parity_consistent = rep.parity_consistent && ur.parity_consistent() && ult.parity_consistent();
    for (int i = 0; i < nb; ++i)
      for (int f = 0; f < nf; ++f) {
        rep.u31_u23_residual = std::max(rep.u31_u23_residual,
                                        (ur.at(2, 0, i, f) - ur.at(1, 2, f, i)).max_abs_coeff());
        rep.u13_u32_residual = std::max(rep.u13_u32_residual,
                                        (ur.at(0, 2, f, i) + ur.at(2, 1, i, f)).max_abs_coeff());
      }
  }
  return rep;
}

namespace {

// p with phi_x replaced by sign * phi_{perm[x]}.
CPoly relabel_phi(const CPoly& p, const std::vector<int>& perm, double sign) {
  CPoly out;
  for (const auto& [mono, coeff] : p.terms()) {
    Monomial m;
    int degree = 0;
    for (std::size_t x = 0; x < perm.size(); ++x) {
      const int e = mono.exponent(static_cast<int>(x));
      if (e == 0) continue;
      m = m * Monomial::variable(perm[x], e);
      degree += e;
    }
    out.add_term(m, degree % 2 && sign < 0 ? -coeff : coeff);
  }
  return out;
}

struct SiteMap {
  std::vector<int> image;
  std::vector<int> sign;  // fermion boundary sign
};

// Reflection of coordinate `axis` (1 or 2).
SiteMap reflection(const MicroModel& model, int axis) {
  SiteMap s;
  for (int x = 0; x < model.num_sites(); ++x) {
    int i1 = x / model.L2, i2 = x % model.L2, sg = 1;
    if (axis == 1) std::tie(i1, sg) = reflect_site(i1, model.L1);
    else std::tie(i2, sg) = reflect_site(i2, model.L2);
    s.image.push_back(i1 * model.L2 + i2);
    s.sign.push_back(sg);
  }
  return s;
}

void check_reflection_symmetric(const MicroModel& model) {
  for (int axis : {1, 2}) {
    const SiteMap s = reflection(model, axis);
    const Eigen::MatrixXd& d = axis == 1 ? model.D1 : model.D2;
    for (int x = 0; x < model.num_sites(); ++x)
      for (int y = 0; y < model.num_sites(); ++y) {
        const double rd = s.sign[x] * s.sign[y] * d(s.image[x], s.image[y]);
        if (rd != -d(x, y) || model.B(s.image[x], s.image[y]) != model.B(x, y))
          throw std::invalid_argument("symmetry_check: site graph is not reflection symmetric");
      }
  }
}

}  // namespace

SymmetryReport symmetry_check(const MicroModel& model) {
  check_reflection_symmetric(model);
  const GammaRep gam = build_gamma();
  const int nf = model.num_fermion(), ng = 2 * nf;
  const double m = model.params.m;
  const GElem l_m = action_element(model, m);
  const GElem l_minus = action_element(model, -m);

  auto gen = [&](int i) { return GElem::generator(ng, i); };

  // P: psi_b(x) -> (gamma_1)_bc psi_c(Px), psibar_a(x) -> psibar_d(Px) (gamma_1)_da.
  const SiteMap p = reflection(model, 2);
  std::vector<GElem> p_images(ng, GElem(ng));
  for (int x = 0; x < model.num_sites(); ++x)
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c) {
        const int from = 2 * x + a, to = 2 * p.image[x] + c;
        const Complex s = static_cast<double>(p.sign[x]);
        p_images[model.psi(from)] += gen(model.psi(to)) * CPoly{s * gam.gamma1(a, c)};
        p_images[model.psibar(from)] += gen(model.psibar(to)) * CPoly{s * gam.gamma1(c, a)};
      }
  const GElem lp = l_m.substitute(std::span<const GElem>(p_images), ng, [&](const CPoly& q) {
    return relabel_phi(q, p.image, 1.0);
  });

  // CT: psi_b(x) -> (gamma_2)_bc psibar_c(Tx), psibar_a(x) -> psi_d(Tx) (gamma_2)_da.
  const SiteMap t = reflection(model, 1);
  std::vector<GElem> t_images(ng, GElem(ng));
  for (int x = 0; x < model.num_sites(); ++x)
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c) {
        const int from = 2 * x + a, to = 2 * t.image[x] + c;
        const Complex s = static_cast<double>(t.sign[x]);
        t_images[model.psi(from)] += gen(model.psibar(to)) * CPoly{s * gam.gamma2(a, c)};
        t_images[model.psibar(from)] += gen(model.psi(to)) * CPoly{s * gam.gamma2(c, a)};
      }
  auto ct = [&](double phi_sign) {
    return l_m.substitute(std::span<const GElem>(t_images), ng, [&](const CPoly& q) {
      return relabel_phi(q.conj(), t.image, phi_sign);
    });
  };
  const GElem lct = ct(1.0);

  SymmetryReport rep;
  rep.p_residual = (lp - l_m).max_abs_coeff();
  rep.ct_mass_flip_residual = (lct - l_minus).max_abs_coeff();
  rep.ct_no_flip_residual = (lct - l_m).max_abs_coeff();
  rep.ct_mass_flip_phi_odd_residual = (ct(-1.0) - l_minus).max_abs_coeff();
  return rep;
}

}  // namespace sqf
