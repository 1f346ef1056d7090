// Copyright 2026 The sqf Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sqf {

inline constexpr int kExitPass = 0;
inline constexpr int kExitClaimFailed = 1;
inline constexpr int kExitConfigError = 2;

/// Runs the command line `args` (without the program name). Reports go to
/// `out` unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sqf
