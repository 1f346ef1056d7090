// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
//
// Sparse multivariate polynomials in up to eight commuting (bosonic) symbols.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace sqf {

template <class S>
double scalar_abs(const S& s) {
  if constexpr (std::is_integral_v<S>)
    return static_cast<double>(s < 0 ? -s : s);
  else
    return std::abs(s);
}

template <class S>
S scalar_conj(const S& s) {
  if constexpr (std::is_same_v<S, std::complex<double>>)
    return std::conj(s);
  else
    return s;
}

/// Exponent vector packed one byte per variable.
class Monomial {
 public:
  static constexpr int kMaxVars = 8;

  constexpr Monomial() = default;
  static Monomial variable(int v, int power = 1) {
    check_var(v);
    Monomial m;
    m.key_ = static_cast<std::uint64_t>(power) << (8 * v);
    return m;
  }

  int exponent(int v) const { return static_cast<int>((key_ >> (8 * v)) & 0xffu); }
  int degree() const {
    int d = 0;
    for (int v = 0; v < kMaxVars; ++v) d += exponent(v);
    return d;
  }
  bool is_constant() const { return key_ == 0; }
  std::uint64_t key() const { return key_; }

  Monomial with_exponent(int v, int e) const {
    check_var(v);
    if (e < 0 || e > 255) throw std::overflow_error("Monomial: exponent out of range");
    Monomial m = *this;
    m.key_ &= ~(std::uint64_t{0xff} << (8 * v));
    m.key_ |= static_cast<std::uint64_t>(e) << (8 * v);
    return m;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    for (int v = 0; v < kMaxVars; ++v) {
      const int e = a.exponent(v) + b.exponent(v);
      if (e > 255) throw std::overflow_error("Monomial: exponent overflow");
      m.key_ |= static_cast<std::uint64_t>(e) << (8 * v);
    }
    return m;
  }
  friend auto operator<=>(const Monomial&, const Monomial&) = default;

 private:
  static void check_var(int v) {
    if (v < 0 || v >= kMaxVars) throw std::out_of_range("Monomial: variable index out of range");
  }
  std::uint64_t key_ = 0;
};

template <class S>
class Polynomial {
 public:
  using Terms = std::map<Monomial, S>;

  Polynomial() = default;
  Polynomial(S c) {  // NOLINT(google-explicit-constructor): scalars embed as constants
    if (c != S{}) terms_[Monomial{}] = c;
  }
  static Polynomial variable(int v) {
    Polynomial p;
    p.terms_[Monomial::variable(v)] = S{1};
    return p;
  }
  static Polynomial monomial(const Monomial& m, S c) {
    Polynomial p;
    if (c != S{}) p.terms_[m] = c;
    return p;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant()); }
  S constant() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? S{} : it->second;
  }
  double max_abs_coeff() const {
    double r = 0.0;
    for (const auto& [m, c] : terms_) r = std::max(r, scalar_abs(c));
    return r;
  }
  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }
  /// Degree counted over the variables whose bit is set in var_mask.
  int degree_in(unsigned var_mask) const {
    int d = 0;
    for (const auto& [m, c] : terms_) {
      int e = 0;
      for (int v = 0; v < Monomial::kMaxVars; ++v)
        if (var_mask & (1u << v)) e += m.exponent(v);
      d = std::max(d, e);
    }
    return d;
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Polynomial& operator*=(const S& s) {
    if (s == S{}) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= S{-1}; }
  friend Polynomial operator*(Polynomial a, const S& s) { return a *= s; }
  friend Polynomial operator*(const S& s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) r.add_term(ma * mb, ca * cb);
    return r;
  }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  Polynomial derivative(int v) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) {
      const int e = m.exponent(v);
      if (e == 0) continue;
      r.add_term(m.with_exponent(v, e - 1), c * static_cast<S>(e));
    }
    return r;
  }

  /// Substitutes numeric values for the variables with bit set in var_mask.
  Polynomial evaluate(unsigned var_mask, const std::array<S, Monomial::kMaxVars>& values) const {
    Polynomial r;
    for (const auto& [m, c] : terms_) {
      S coeff = c;
      Monomial rest = m;
      for (int v = 0; v < Monomial::kMaxVars; ++v) {
        if (!(var_mask & (1u << v))) continue;
        for (int e = m.exponent(v); e > 0; --e) coeff *= values[v];
        rest = rest.with_exponent(v, 0);
      }
      r.add_term(rest, coeff);
    }
    return r;
  }

  Polynomial conj() const {
    Polynomial r;
    for (const auto& [m, c] : terms_) r.add_term(m, scalar_conj(c));
    return r;
  }

  /// Keeps the terms for which keep(monomial) holds.
  Polynomial filter(const std::function<bool(const Monomial&)>& keep) const {
    Polynomial r;
    for (const auto& [m, c] : terms_)
      if (keep(m)) r.terms_.emplace(m, c);
    return r;
  }

  void add_term(const Monomial& m, const S& c) {
    if (c == S{}) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == S{}) terms_.erase(it);
    }
  }

 private:
  Terms terms_;
};

}  // namespace sqf
