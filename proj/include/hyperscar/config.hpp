// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file config.hpp
 * @brief Run configuration: JSON schema, validation and model construction.
 *
 * The schema is documented in docs/config.md. Every object rejects keys it
 * does not know, and every field is checked before any computation starts;
 * violations throw ConfigError naming the offending path.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hyperscar/analysis.hpp"
#include "hyperscar/dynamics.hpp"
#include "hyperscar/hilbert.hpp"
#include "hyperscar/model.hpp"
#include "hyperscar/spectral.hpp"

namespace hyperscar {

struct CrossCouplingConfig {
  double f_lo = 0.3;
  double f_hi = 1.2;
  std::optional<std::uint64_t> seed;  ///< defaults to the run seed
  int grid_cols = 6;                  ///< snake embedding width; rows follow from L
};

struct CircuitConfig {
  std::string device_csv;
  std::string coupler_csv;
  double interaction_ghz = 4.375;
};

struct ModelConfig {
  Geometry geometry = Geometry::Chain;
  bool from_circuit = false;
  int sites = 0;     ///< chain
  int n_dimers = 0;  ///< comb
  Boundary boundary = Boundary::Open;
  double f_a = -9.0;
  double f_e = -6.0;
  std::optional<CrossCouplingConfig> cross;
  std::optional<std::string> edges_file;
  double f_nn = 0.0;
  OnsitePattern onsite = onsite::Uniform{0.0};
  std::optional<CircuitConfig> circuit;
};

/// A named collective state, an explicit word, or a block of seeded random basis states.
struct StateSpec {
  struct Random {
    std::size_t count = 0;
    std::optional<std::uint64_t> seed;
  };
  std::variant<CollectiveState, Word, Random> what;
};

struct SpectrumConfig {
  bool eigenvectors = true;
  bool use_symmetries = true;
  double discard_fraction = 0.1;
  int dos_bins = 50;
  std::vector<int> entropy_cut;  ///< empty: first L/2 sites
  TowerPolicy towers;
};

struct ScanConfig {
  std::vector<CollectiveState> include = {CollectiveState::Pi, CollectiveState::PiPrime};
  std::size_t random_count = 120;
  std::optional<double> f1_mhz;
  double halfwidth_mhz = 2.0;
  double separation_factor = 10.0;
};

struct SweepConfig {
  std::vector<double> ratios = {1.0, 1.5, 2.0, 2.5};  ///< f_a / f_e with f_e fixed
  CollectiveState state = CollectiveState::Pi;
  double halfwidth_mhz = 2.0;
};

struct HypercubeConfig {
  std::vector<int> sizes = {4, 8, 12, 16, 20, 24};
  std::vector<double> ratios = {1.5, 2.0, 2.5};
};

enum class Propagator { Auto, Krylov, Dense };

struct RunConfig {
  ModelConfig model;
  std::optional<int> photons;  ///< default L/2
  std::uint64_t seed = 1;
  std::vector<StateSpec> initial_states = {{CollectiveState::Pi}};
  double t_max_ns = 400.0;
  double dt_ns = 1.0;
  double pad_to_ns = kDefaultPadNs;
  std::vector<int> subsystem = {0, 1, 2, 3};
  Propagator propagator = Propagator::Auto;
  KrylovOptions krylov;
  bool record_populations = true;
  bool state_dump = false;
  SpectrumConfig spectrum;
  ScanConfig scan;
  SweepConfig sweep;
  HypercubeConfig hypercube;
};

/// Parses and validates JSON text. Throws ConfigError.
[[nodiscard]] RunConfig parse_config(const std::string& json_text);
/// Reads a file; relative CSV paths inside resolve against the file's directory.
[[nodiscard]] RunConfig load_config(const std::string& path);

/// Graph described by the model section (cross couplings, extra edges, J_nn and on-site terms applied).
[[nodiscard]] CouplingGraph build_graph(const ModelConfig& model, std::uint64_t run_seed);

[[nodiscard]] int site_count(const ModelConfig& model);

struct ResolvedState {
  std::string label;
  Word word = 0;
};

/// Expands the state specs; random blocks skip words already listed. Throws ConfigError for words outside the sector.
[[nodiscard]] std::vector<ResolvedState> resolve_states(std::span<const StateSpec> specs, const CouplingGraph& graph,
                                                        const BasisSector& sector, std::uint64_t run_seed);

/// Parses "Pi", "PiPrime", "Theta", "ThetaPrime". Throws ConfigError.
[[nodiscard]] CollectiveState parse_collective(const std::string& name);

}  // namespace hyperscar
