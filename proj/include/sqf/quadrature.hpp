// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
//
// Adaptive Gauss-Kronrod integration for scalar- and matrix-valued integrands,
// plus Gauss-Hermite rules for Gaussian-weighted moments.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "sqf/spinor.hpp"

namespace sqf {

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved error " + std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

inline double error_norm(double x) { return std::abs(x); }
inline double error_norm(Complex x) { return std::abs(x); }
inline double error_norm(const SpinMatrix& m) { return m.max_abs(); }

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_intervals = 4000;
  bool throw_on_failure = true;
};

template <class V>
struct QuadResult {
  V value{};
  double error = 0.0;
  int intervals = 0;
  bool converged = true;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F, class V>
void gk15(const F& f, double a, double b, V& value, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  V center = f(c);
  V kron = center * kKronrodWeights[7];
  V gauss = center * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kKronrodNodes[i];
    const V sum = f(c - dx) + f(c + dx);
    kron = kron + sum * kKronrodWeights[i];
    if (i % 2 == 1) gauss = gauss + sum * kGaussWeights[i / 2];
  }
  value = kron * h;
  err = error_norm((kron - gauss) * h);
}

}  // namespace detail

/// Integrates f over [a, b], splitting first at any interior breakpoints.
template <class F>
auto integrate(const F& f, double a, double b, const QuadOptions& opts = {},
               std::vector<double> breakpoints = {})
    -> QuadResult<std::invoke_result_t<F, double>> {
  using V = std::invoke_result_t<F, double>;
  QuadResult<V> res;
  if (!(b > a)) return res;

  struct Piece {
    double a, b;
    V value;
    double err;
    bool operator<(const Piece& o) const { return err < o.err; }
  };
  std::priority_queue<Piece> heap;

  std::vector<double> cuts{a};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double x : breakpoints)
    if (x > a && x < b && x > cuts.back()) cuts.push_back(x);
  cuts.push_back(b);

  V total{};
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Piece p{cuts[i], cuts[i + 1], V{}, 0.0};
    detail::gk15(f, p.a, p.b, p.value, p.err);
    total = total + p.value;
    total_err += p.err;
    heap.push(p);
  }

  auto target = [&] { return std::max(opts.abs_tol, opts.rel_tol * error_norm(total)); };
  while (total_err > target() && static_cast<int>(heap.size()) < opts.max_intervals) {
    Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      heap.push(worst);
      break;
    }
    Piece left{worst.a, mid, V{}, 0.0};
    Piece right{mid, worst.b, V{}, 0.0};
    detail::gk15(f, left.a, left.b, left.value, left.err);
    detail::gk15(f, right.a, right.b, right.value, right.err);
    total = total - worst.value + left.value + right.value;
    total_err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
  }

  // Re-sum to avoid drift from the incremental updates.
  total = V{};
  total_err = 0.0;
  res.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    total = total + heap.top().value;
    total_err += heap.top().err;
    heap.pop();
  }
  res.value = total;
  res.error = total_err;
  res.converged = total_err <= target();
  if (!res.converged && opts.throw_on_failure)
    throw QuadratureError("adaptive quadrature did not converge", total_err);
  return res;
}

/// Gauss-Hermite rule for the standard normal weight: sum w_i f(x_i) = E[f(Z)].
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch construction; exact for polynomials of degree <= 2n-1.
GaussHermiteRule gauss_hermite(int n);

}  // namespace sqf
