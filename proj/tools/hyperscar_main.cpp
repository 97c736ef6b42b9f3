// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: hyperscar <command> --config run.json [--out DIR] [--workers N] [--seed U64]

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "hyperscar/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Scar diagnostics for dimerized XY models on programmable coupling graphs"};
  app.set_version_flag("--version", std::string("hyperscar ") + hyperscar::kVersion);
  app.require_subcommand(1);

  const std::map<std::string, std::string> help = {
      {"spectrum", "full diagonalization: levels, <r>, entropies, towers"},
      {"evolve", "time evolution of the configured initial states"},
      {"scan", "rank basis states by Fourier weight at the tower frequency"},
      {"sweep", "imbalance peak height against f_a/f_e"},
      {"hypercube", "effective hypercube sizes and the spacing formula"},
      {"sw", "effective couplings of a coupler circuit"},
  };

  hyperscar::RunOptions options;
  std::uint64_t seed = 0;
  for (const auto& name : hyperscar::command_names()) {
    auto* sub = app.add_subcommand(name, help.count(name) ? help.at(name) : "");
    sub->add_option("--config", options.config_path, "run configuration (JSON)")->required();
    sub->add_option("--out", options.out_dir, "output directory")->capture_default_str();
    sub->add_option("--workers", options.workers, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--seed", seed, "override the configured seed");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hyperscar::kExitConfig;
  }
  for (auto* sub : app.get_subcommands()) {
    options.command = sub->get_name();
    if (sub->count("--seed") > 0) options.seed = seed;
  }
  return hyperscar::run(options, std::cerr);
}
