// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
#include "sqf/rng.hpp"

#include <cmath>
#include <numbers>

namespace sqf {

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t chain, std::uint64_t step)
    : key_(splitmix64(splitmix64(splitmix64(seed) ^ chain) ^ step)) {}

std::uint64_t CounterRng::next_u64() {
  return splitmix64(key_ + 0xd1b54a32d192ed03ULL * ++counter_);
}

double CounterRng::uniform() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double theta = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace sqf
