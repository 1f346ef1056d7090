// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
//
// Finite Grassmann algebra over at most 64 globally indexed generators, with
// coefficients polynomial in bosonic symbols.
//
// A basis monomial is stored as a bitmask; the canonical product order is by
// increasing generator index. Which generator stands for which field species
// and site is decided by the caller.
//
// Berezin integration: the integral over one generator acts as the right
// derivative, so int dg g = 1 and int dg 1 = 0. A multiple integral
// int dg_{i1} ... dg_{ik} applies the rightmost measure first.
#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "sqf/polynomial.hpp"

namespace sqf {

enum class DerivativeSide { Left, Right };

template <class S>
class GrassmannElement {
 public:
  using Poly = Polynomial<S>;
  using Terms = std::map<std::uint64_t, Poly>;

  explicit GrassmannElement(int num_generators = 0) : n_(num_generators) {
    if (n_ < 0 || n_ > 64) throw std::invalid_argument("GrassmannElement: 0..64 generators");
  }
  static GrassmannElement scalar(int n, const Poly& c) {
    GrassmannElement e(n);
    e.add_term(0, c);
    return e;
  }
  static GrassmannElement generator(int n, int i, const Poly& c = Poly{S{1}}) {
    GrassmannElement e(n);
    e.check_index(i);
    e.add_term(bit(i), c);
    return e;
  }
  static GrassmannElement monomial(int n, std::uint64_t mask, const Poly& c) {
    GrassmannElement e(n);
    if (n < 64 && (mask >> n) != 0) throw std::out_of_range("GrassmannElement: mask out of range");
    e.add_term(mask, c);
    return e;
  }

  int num_generators() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Coefficient of the canonical monomial `mask`.
  Poly coefficient(std::uint64_t mask) const {
    auto it = terms_.find(mask);
    return it == terms_.end() ? Poly{} : it->second;
  }
  Poly scalar_part() const { return coefficient(0); }

  double max_abs_coeff() const {
    double r = 0.0;
    for (const auto& [m, c] : terms_) r = std::max(r, c.max_abs_coeff());
    return r;
  }

  /// 0 (even) or 1 (odd) if every term has the same parity; nullopt otherwise.
  /// The zero element counts as even.
  std::optional<int> parity() const {
    std::optional<int> p;
    for (const auto& [m, c] : terms_) {
      const int q = std::popcount(m) & 1;
      if (p && *p != q) return std::nullopt;
      p = q;
    }
    return p.value_or(0);
  }

  GrassmannElement& operator+=(const GrassmannElement& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  GrassmannElement& operator-=(const GrassmannElement& o) {
    check_same(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  GrassmannElement& operator*=(const Poly& s) {
    Terms out;
    for (auto& [m, c] : terms_) {
      Poly p = c * s;
      if (!p.is_zero()) out.emplace(m, std::move(p));
    }
    terms_ = std::move(out);
    return *this;
  }
  friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
  friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
  friend GrassmannElement operator-(GrassmannElement a) { return a *= Poly{S{-1}}; }
  friend GrassmannElement operator*(GrassmannElement a, const Poly& s) { return a *= s; }
  friend GrassmannElement operator*(const Poly& s, GrassmannElement a) { return a *= s; }
  friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
    return multiply(a, b);
  }
  friend bool operator==(const GrassmannElement&, const GrassmannElement&) = default;

  /// Product with Koszul signs. Terms whose weight exceeds max_weight are
  /// dropped, where weight(mask, coeff) = popcount(mask & weight_mask) plus the
  /// coefficient degree in the variables of var_mask.
  static GrassmannElement multiply(const GrassmannElement& a, const GrassmannElement& b,
                                   std::uint64_t weight_mask = 0, unsigned var_mask = 0,
                                   int max_weight = -1) {
    a.check_same(b);
    GrassmannElement r(a.n_);
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        if (ma & mb) continue;
        if (max_weight >= 0 && std::popcount((ma | mb) & weight_mask) > max_weight) continue;
        Poly c = ca * cb;
        if (max_weight >= 0 && var_mask != 0) {
          const int gw = std::popcount((ma | mb) & weight_mask);
          c = c.filter([&](const Monomial& mono) {
            int d = 0;
            for (int v = 0; v < Monomial::kMaxVars; ++v)
              if (var_mask & (1u << v)) d += mono.exponent(v);
            return gw + d <= max_weight;
          });
        }
        if (reorder_sign(ma, mb) < 0) c *= S{-1};
        r.add_term(ma | mb, c);
      }
    }
    return r;
  }

  GrassmannElement derive(int i, DerivativeSide side) const {
    check_index(i);
    GrassmannElement r(n_);
    const std::uint64_t b = bit(i);
    for (const auto& [m, c] : terms_) {
      if (!(m & b)) continue;
      const std::uint64_t below = m & (b - 1);
      const std::uint64_t above = m & ~((b << 1) - 1) & (i == 63 ? 0 : ~std::uint64_t{0});
      const int passes = std::popcount(side == DerivativeSide::Left ? below : above);
      r.add_term(m & ~b, passes % 2 ? -c : c);
    }
    return r;
  }

  /// Iterated Berezin integral; the last listed index is integrated first.
  GrassmannElement berezin(std::span<const int> indices) const {
    std::uint64_t seen = 0;
    for (int i : indices) {
      check_index(i);
      if (seen & bit(i)) throw std::invalid_argument("berezin: repeated generator index");
      seen |= bit(i);
    }
    GrassmannElement r = *this;
    for (auto it = indices.rbegin(); it != indices.rend(); ++it)
      r = r.derive(*it, DerivativeSide::Right);
    return r;
  }

  /// exp of an element with vanishing scalar part (a finite sum by nilpotency).
  GrassmannElement exp(std::uint64_t weight_mask = 0, unsigned var_mask = 0,
                       int max_weight = -1) const {
    static_assert(!std::is_integral_v<S>, "exp needs a field of scalars");
    if (!scalar_part().is_zero()) throw std::domain_error("exp: scalar part must vanish");
    GrassmannElement result = scalar(n_, Poly{S{1}});
    GrassmannElement power = result;
    for (int k = 1; k <= n_; ++k) {
      power = multiply(power, *this, weight_mask, var_mask, max_weight);
      if (power.is_zero()) break;
      power *= Poly{S{1} / static_cast<S>(k)};
      result += power;
    }
    return result;
  }

  /// Applies f to every coefficient.
  template <class F>
  GrassmannElement map_coefficients(F&& f) const {
    GrassmannElement r(n_);
    for (const auto& [m, c] : terms_) r.add_term(m, f(c));
    return r;
  }

  /// Algebra homomorphism fixing coefficients: generator i maps to images[i]
  /// (an element of the target algebra). Coefficients are transformed by coeff_map.
  template <class F>
  GrassmannElement substitute(std::span<const GrassmannElement> images, int target_n,
                              F&& coeff_map) const {
    if (static_cast<int>(images.size()) != n_)
      throw std::invalid_argument("substitute: need one image per generator");
    GrassmannElement r(target_n);
    for (const auto& [m, c] : terms_) {
      GrassmannElement term = scalar(target_n, coeff_map(c));
      for (int i = 0; i < n_; ++i)
        if (m & bit(i)) term = term * images[i];
      r += term;
    }
    return r;
  }

  void add_term(std::uint64_t m, const Poly& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  /// (-1)^(number of pairs i in a, j in b with i > j).
  static int reorder_sign(std::uint64_t a, std::uint64_t b) {
    int swaps = 0;
    while (b) {
      const int j = std::countr_zero(b);
      b &= b - 1;
      swaps += std::popcount(a >> j >> 1);
    }
    return swaps % 2 ? -1 : 1;
  }

  static constexpr std::uint64_t bit(int i) { return std::uint64_t{1} << i; }

 private:
  void check_index(int i) const {
    if (i < 0 || i >= n_) throw std::out_of_range("GrassmannElement: generator index out of range");
  }
  void check_same(const GrassmannElement& o) const {
    if (o.n_ != n_) throw std::invalid_argument("GrassmannElement: mismatched generator counts");
  }

  int n_ = 0;
  Terms terms_;
};

/// Closed-form fermionic Gaussian integral
///   int prod_i (dpsi_i dpsibar_i) exp(-psibar A psi + psibar k - psi kbar)
///     = det(A) exp(kbar A^{-1} k),
/// expanded through complementary minors so polynomial entries stay polynomial.
/// A's entries must be purely bosonic (no Grassmann content). The result lives
/// in the algebra of `num_generators` generators; `k` and `kbar` list the source
/// generator indices (may be empty for the sourceless integral). If max_pairs
/// >= 0, source monomials with more than max_pairs (kbar k) pairs are omitted.
template <class S>
GrassmannElement<S> gaussian_berezin(const std::vector<std::vector<GrassmannElement<S>>>& a,
                                     int num_generators, std::span<const int> k = {},
                                     std::span<const int> kbar = {}, int max_pairs = -1);

/// Determinant by cofactor expansion.
template <class S>
Polynomial<S> determinant(const std::vector<std::vector<Polynomial<S>>>& a);

}  // namespace sqf

#include "sqf/grassmann_impl.hpp"
