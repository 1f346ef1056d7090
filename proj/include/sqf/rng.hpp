// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
//
// Counter-based random numbers. A stream is fully determined by
// (seed, chain, step); draws within a stream are numbered 0, 1, 2, ...
// Every draw is SplitMix64's finalizer applied to a stream key plus a counter,
// so results do not depend on thread scheduling or on the standard library's
// distribution implementations.
#pragma once

#include <cstdint>

namespace sqf {

/// SplitMix64 output function.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t chain, std::uint64_t step);

  std::uint64_t next_u64();
  /// Uniform on (0, 1], 53 bits.
  double uniform();
  /// Standard normal by Box-Muller; the second value of each pair is cached.
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sqf
