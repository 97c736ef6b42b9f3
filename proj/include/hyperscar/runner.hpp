// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file runner.hpp
 * @brief Batch commands behind the hyperscar executable.
 *
 * Each command reads a validated RunConfig, writes its CSV/JSON artifacts to
 * the output directory and always finishes with manifest.json, including on
 * failure.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace hyperscar {

inline constexpr const char* kVersion = "0.3.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitCapacity = 3,
  kExitNumerical = 4,
};

struct RunOptions {
  std::string command;  ///< spectrum, evolve, scan, sweep, hypercube or sw
  std::string config_path;
  std::string out_dir = ".";
  unsigned workers = 1;
  std::optional<std::uint64_t> seed;  ///< overrides the config seed
};

[[nodiscard]] const std::vector<std::string>& command_names();

/// Runs one command; progress goes to `log`. Returns an ExitCode.
int run(const RunOptions& options, std::ostream& log);

}  // namespace hyperscar
