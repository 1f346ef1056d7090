// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <numeric>

namespace sqf {

template <class S>
Polynomial<S> determinant(const std::vector<std::vector<Polynomial<S>>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return Polynomial<S>{S{1}};
  if (n == 1) return a[0][0];
  Polynomial<S> det;
  for (std::size_t col = 0; col < n; ++col) {
    if (a[0][col].is_zero()) continue;
    std::vector<std::vector<Polynomial<S>>> minor(n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (c != col) minor[r - 1].push_back(a[r][c]);
    Polynomial<S> term = a[0][col] * determinant(minor);
    if (col % 2) term *= S{-1};
    det += term;
  }
  return det;
}

template <class S>
GrassmannElement<S> gaussian_berezin(const std::vector<std::vector<GrassmannElement<S>>>& a,
                                     int num_generators, std::span<const int> k,
                                     std::span<const int> kbar, int max_pairs) {
  using Poly = Polynomial<S>;
  const int n = static_cast<int>(a.size());
  if (n > 16) throw std::invalid_argument("gaussian_berezin: matrix too large");
  std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n));
  for (int r = 0; r < n; ++r) {
    if (static_cast<int>(a[r].size()) != n)
      throw std::invalid_argument("gaussian_berezin: matrix must be square");
    for (int c = 0; c < n; ++c) {
      const auto& e = a[r][c];
      for (const auto& [mask, coeff] : e.terms()) {
        if (mask == 0) continue;
        if (std::popcount(mask) % 2)
          throw std::invalid_argument("gaussian_berezin: odd-graded matrix entry");
        throw std::invalid_argument("gaussian_berezin: entries must be purely bosonic");
      }
      m[r][c] = e.scalar_part();
    }
  }
  const bool with_sources = !k.empty() || !kbar.empty();
  if (with_sources && (static_cast<int>(k.size()) != n || static_cast<int>(kbar.size()) != n))
    throw std::invalid_argument("gaussian_berezin: need one source generator per row");

  if (!with_sources) return GrassmannElement<S>::scalar(num_generators, determinant(m));

  // exp(kbar B k) = sum_{I,J} det B[I,J] prod_l (kbar_{i_l} k_{j_l}), and by
  // Jacobi det(A) det(A^{-1})[I,J] = (-1)^{sum I + sum J} det A[J^c, I^c].
  auto submatrix = [&](unsigned rows, unsigned cols) {
    std::vector<std::vector<Poly>> s;
    for (int r = 0; r < n; ++r) {
      if (!(rows & (1u << r))) continue;
      s.emplace_back();
      for (int c = 0; c < n; ++c)
        if (cols & (1u << c)) s.back().push_back(m[r][c]);
    }
    return s;
  };
  const unsigned full = (1u << n) - 1;
  GrassmannElement<S> result(num_generators);
  for (unsigned I = 0; I <= full; ++I) {
    for (unsigned J = 0; J <= full; ++J) {
      if (std::popcount(I) != std::popcount(J)) continue;
      if (max_pairs >= 0 && std::popcount(I) > max_pairs) continue;
      Poly minor = determinant(submatrix(full & ~J, full & ~I));
      if (minor.is_zero()) continue;
      int index_sum = 0;
      std::vector<int> is, js;
      for (int x = 0; x < n; ++x) {
        if (I & (1u << x)) is.push_back(x), index_sum += x;
        if (J & (1u << x)) js.push_back(x), index_sum += x;
      }
      if (index_sum % 2) minor *= S{-1};
      GrassmannElement<S> mono = GrassmannElement<S>::scalar(num_generators, minor);
      for (std::size_t l = 0; l < is.size(); ++l) {
        mono = mono * GrassmannElement<S>::generator(num_generators, kbar[is[l]]);
        mono = mono * GrassmannElement<S>::generator(num_generators, k[js[l]]);
      }
      result += mono;
    }
  }
  return result;
}

}  // namespace sqf
