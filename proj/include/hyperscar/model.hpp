// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file model.hpp
 * @brief Coupling graphs for dimerized XY models and the circuit-to-effective reduction.
 *
 * All couplings and on-site terms are ordinary frequencies f = J/2pi in MHz.
 * Attractive couplings are negative.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hyperscar/hilbert.hpp"

namespace hyperscar {

enum class EdgeKind { Intra, Inter, Cross, NextNearest, Explicit };

[[nodiscard]] const char* to_string(EdgeKind kind) noexcept;

struct Edge {
  int i = 0;
  int j = 0;
  double f_mhz = 0.0;
  EdgeKind kind = EdgeKind::Explicit;
};

struct GridCoord {
  int row = 0;
  int col = 0;
  friend bool operator==(const GridCoord&, const GridCoord&) = default;
};

using Embedding = std::vector<GridCoord>;

enum class Boundary { Open, Periodic };
enum class Geometry { Chain, Comb, Custom };

/// Ordered pair of sites; the first one is occupied in the d+ = |10> state.
using Dimer = std::pair<int, int>;

/**
 * Sites, weighted hopping edges, on-site frequencies, an optional dimer
 * partition and an optional grid embedding. Edge insertion rejects self-edges
 * and repeated unordered pairs.
 */
class CouplingGraph {
 public:
  CouplingGraph() = default;
  explicit CouplingGraph(int sites, Geometry geometry = Geometry::Custom, Boundary boundary = Boundary::Open);

  [[nodiscard]] int sites() const noexcept { return sites_; }
  [[nodiscard]] Geometry geometry() const noexcept { return geometry_; }
  [[nodiscard]] Boundary boundary() const noexcept { return boundary_; }

  [[nodiscard]] std::span<const Edge> edges() const noexcept { return edges_; }
  [[nodiscard]] std::span<const double> onsite() const noexcept { return onsite_; }
  [[nodiscard]] std::span<const Dimer> dimers() const noexcept { return dimers_; }
  [[nodiscard]] const std::optional<Embedding>& embedding() const noexcept { return embedding_; }

  [[nodiscard]] bool has_edge(int i, int j) const noexcept;
  [[nodiscard]] std::optional<Edge> find_edge(int i, int j) const noexcept;

  /// Throws DomainError for self-edges, out-of-range sites or an existing pair.
  void add_edge(Edge edge);
  /// Throws DomainError unless the list has one value per site.
  void set_onsite(std::vector<double> values);
  /// Throws DomainError unless the pairs cover every site exactly once.
  void set_dimers(std::vector<Dimer> dimers);
  /// Throws DomainError for the wrong length or two sites sharing a cell.
  void set_embedding(Embedding embedding);

 private:
  int sites_ = 0;
  Geometry geometry_ = Geometry::Custom;
  Boundary boundary_ = Boundary::Open;
  std::vector<Edge> edges_;
  std::vector<double> onsite_;
  std::vector<Dimer> dimers_;
  std::optional<Embedding> embedding_;
};

/// Dimerized chain: intra bonds (2k,2k+1) at f_intra, inter bonds (2k+1,2k+2) at f_inter.
[[nodiscard]] CouplingGraph build_chain(int sites, Boundary boundary, double f_intra, double f_inter);

/// Comb with backbone site 2k and tooth site 2k+1 per dimer; backbone bonds (2k,2k+2).
[[nodiscard]] CouplingGraph build_comb(int n_dimers, double f_intra, double f_inter);

/// Row-by-row serpentine placement of `sites` sites on a rows x cols grid.
[[nodiscard]] Embedding snake_grid_embedding(int sites, int rows, int cols);

/// Name and version of the generator behind every seeded draw; written to manifests.
inline constexpr const char* kPrngName = "mt19937_64+u53/v1";

/**
 * Deterministic uniform stream: std::mt19937_64 with doubles formed from the
 * top 53 bits, so draws do not depend on the standard library's distributions.
 */
class SeededUniform {
 public:
  explicit SeededUniform(std::uint64_t seed);
  [[nodiscard]] double next();                  ///< uniform on [0, 1)
  [[nodiscard]] double next(double lo, double hi);
  [[nodiscard]] std::uint64_t below(std::uint64_t n);  ///< unbiased integer in [0, n)

 private:
  std::mt19937_64 engine_;
};

/**
 * Adds an edge for every site pair at diagonal grid distance (sqrt(2) cells),
 * strength uniform on [f_lo, f_hi]. Pairs are drawn in order of (max site, min
 * site), so a smaller chain embedded the same way receives a prefix of the
 * same draws. Throws StateError when the graph has no embedding.
 */
[[nodiscard]] CouplingGraph add_cross_couplings(const CouplingGraph& graph, double f_lo, double f_hi,
                                                std::uint64_t seed);

/// Adds (i, i+3) at f_nn; wraps around for periodic chains. Chain graphs only.
[[nodiscard]] CouplingGraph add_nnn_couplings(const CouplingGraph& graph, double f_nn);

/// Adds explicit edges (e.g. measured cross couplings loaded from CSV).
[[nodiscard]] CouplingGraph add_explicit_edges(const CouplingGraph& graph, std::span<const Edge> edges);

namespace onsite {
struct Uniform {
  double f_mhz = 0.0;
};
/// The last two sites at f_mhz, the rest at zero.
struct EndImpurity {
  double f_mhz = 0.0;
};
/// Dimer k (1-based n = k+1) at n * step on both of its sites.
struct Staircase {
  double step_mhz = 0.0;
};
struct Explicit {
  std::vector<double> values_mhz;
};
}  // namespace onsite

using OnsitePattern = std::variant<onsite::Uniform, onsite::EndImpurity, onsite::Staircase, onsite::Explicit>;

[[nodiscard]] CouplingGraph set_onsite(const CouplingGraph& graph, const OnsitePattern& pattern);

/// Circuit-level parameters of qubits and tunable couplers.
struct CircuitParams {
  struct Coupler {
    std::string label;
    int qubit_a = 0;
    int qubit_b = 0;
    double omega_ghz = 0.0;  ///< coupler frequency / 2pi
    double g_a_mhz = 0.0;    ///< qubit a - coupler coupling / 2pi
    double g_b_mhz = 0.0;    ///< qubit b - coupler coupling / 2pi
    double g_ab_mhz = 0.0;   ///< direct qubit-qubit coupling / 2pi
  };
  std::vector<std::string> qubit_labels;
  std::vector<double> qubit_ghz;  ///< interaction frequencies / 2pi
  std::vector<Coupler> couplers;
};

/**
 * Dispersive (Schrieffer-Wolff) elimination of the couplers:
 *   J_ij    = g_ij + sum_c g_ic g_jc (1/Delta_ic + 1/Delta_jc)
 *   Omega_i = omega_i + sum_c g_ic^2 / Delta_ic
 * with Delta_ic = omega_i - omega_c, all in MHz. Throws DispersiveRegimeError
 * when |Delta_ic| <= |g_ic| for any pair.
 */
[[nodiscard]] CouplingGraph effective_from_circuit(const CircuitParams& params);

/// Device table: qubit_label, omega0_GHz, omega_idle_GHz, e_sq_pct, T1_us, T2star_us
/// and optionally omega_int_GHz. Qubits without omega_int_GHz get `interaction_ghz`.
/// Coupler table: coupler_label, qubit_a, qubit_b, omega_c_GHz, g_ac_MHz, g_bc_MHz, g_ab_MHz.
[[nodiscard]] CircuitParams load_circuit_csv(const std::string& device_csv, const std::string& coupler_csv,
                                             double interaction_ghz);

/// Explicit edge table with columns i, j, f_MHz (0-indexed sites).
[[nodiscard]] std::vector<Edge> load_edges_csv(const std::string& path, EdgeKind kind = EdgeKind::Explicit);

/// Reflection i -> L-1-i maps the graph (edges, on-site terms) onto itself.
[[nodiscard]] bool is_reflection_symmetric(const CouplingGraph& graph, double tol = 1e-12);

/// Named collective product states built from the dimer partition.
enum class CollectiveState { Pi, PiPrime, Theta, ThetaPrime };

[[nodiscard]] const char* to_string(CollectiveState s) noexcept;

/**
 * |Pi> = d+ d- d+ ..., |Pi'> its complement, |Theta> = d+ d+ ..., |Theta'> = d- d- ...
 * where d+ occupies the first site of a dimer. Throws StateError without dimers.
 */
[[nodiscard]] Word collective_state(const CouplingGraph& graph, CollectiveState which);

}  // namespace hyperscar
