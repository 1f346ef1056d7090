// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference computations, independent of the library code paths.
#pragma once

#include <cmath>
#include <random>

#include "sqf/spinor.hpp"

namespace sqf::oracle {

/// exp(-A t) by scaling-and-squaring of a truncated Taylor series.
inline SpinMatrix taylor_exp(const SpinMatrix& a, double t, int terms = 30) {
  const SpinMatrix x = a * Complex{-t};
  int squarings = 0;
  double scale = 1.0;
  while (x.max_abs() * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  const SpinMatrix y = x * Complex{scale};
  SpinMatrix sum = SpinMatrix::identity();
  SpinMatrix term = SpinMatrix::identity();
  for (int k = 1; k < terms; ++k) {
    term = term * y * Complex{1.0 / k};
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

inline SpinMatrix random_matrix(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {Complex{u(rng), u(rng)}, Complex{u(rng), u(rng)}, Complex{u(rng), u(rng)},
          Complex{u(rng), u(rng)}};
}

}  // namespace sqf::oracle
