// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file spectral.hpp
 * @brief Dense exact diagonalization and spectral diagnostics.
 *
 * Energies are angular frequencies in rad/ns. Symmetry resolution uses
 * involutions of the occupation word (site reflection, global spin flip);
 * each symmetry-adapted block is diagonalized separately and eigenvectors are
 * lifted back to the computational basis of the sector.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperscar/hamiltonian.hpp"
#include "hyperscar/hilbert.hpp"
#include "hyperscar/model.hpp"

namespace hyperscar {

struct Eigensystem {
  std::vector<double> energies;           ///< ascending, rad/ns
  std::optional<Eigen::MatrixXd> vectors;  ///< column n is |E_n> in the sector basis
  /// Symmetry block of each eigenstate (index into block_characters); empty when unresolved.
  std::vector<int> block;
  /// Per block, the eigenvalue (+1/-1) of each resolved involution, in `symmetry_names` order.
  std::vector<std::vector<int>> block_characters;
  std::vector<std::string> symmetry_names;

  [[nodiscard]] std::size_t size() const noexcept { return energies.size(); }
  /// Eigenvalue of eigenstate n under involution `which` (0 when unresolved).
  [[nodiscard]] int parity(std::size_t n, std::size_t which = 0) const;
};

/// Largest sector dimension accepted by the dense solver.
inline constexpr Index kDenseDimLimit = 70'000;
/// Default memory ceiling for dense work arrays.
inline constexpr std::size_t kDefaultDenseBudget = std::size_t{3} << 30;

/// Symmetric eigenproblem of a dense matrix (LAPACK dsyevd for values, dsyevr for vectors).
[[nodiscard]] Eigensystem diagonalize_matrix(Eigen::MatrixXd matrix, bool want_vectors);

/**
 * Full spectrum of H. Throws CapacityError when the dimension exceeds
 * kDenseDimLimit or the work arrays would exceed `memory_budget` bytes.
 */
[[nodiscard]] Eigensystem diagonalize(const SparseHamiltonian& H, bool want_vectors,
                                      std::size_t memory_budget = kDefaultDenseBudget);

enum class Involution { Reflection, SpinFlip };

[[nodiscard]] const char* to_string(Involution s) noexcept;

/// Image of a word: reflection i -> L-1-i, or complement of all L bits.
[[nodiscard]] Word apply_involution(Involution s, Word w, int sites) noexcept;

/// Involutions that commute with the Hamiltonian built from `graph` on `sector`.
[[nodiscard]] std::vector<Involution> available_symmetries(const CouplingGraph& graph, const BasisSector& sector);

/**
 * Symmetry-adapted basis for the abelian group generated by commuting
 * involutions. Each orbit {g u} contributes at most one vector per character,
 * sum_g chi(g) |g u> normalized; characters whose vector vanishes are skipped.
 */
class SymmetryBasis {
 public:
  struct Block {
    std::vector<int> characters;         ///< +1 or -1 per generator
    std::vector<std::size_t> offsets;    ///< CSR over block basis vectors
    std::vector<Index> support;          ///< sector indices
    std::vector<double> amplitudes;
    [[nodiscard]] Index dim() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
  };

  /// Throws SymmetryAbsentError when a generator does not commute with the graph's Hamiltonian.
  SymmetryBasis(const CouplingGraph& graph, const BasisSector& sector, std::vector<Involution> generators);

  [[nodiscard]] std::span<const Involution> generators() const noexcept { return generators_; }
  [[nodiscard]] std::span<const Block> blocks() const noexcept { return blocks_; }
  [[nodiscard]] const BasisSector& sector() const noexcept { return sector_; }

  /// <v_a|H|v_b> for the basis vectors of one block.
  [[nodiscard]] Eigen::MatrixXd block_matrix(const SparseHamiltonian& H, std::size_t block) const;
  /// Sector-basis columns for block coefficient columns.
  [[nodiscard]] Eigen::MatrixXd lift(std::size_t block, const Eigen::MatrixXd& coefficients) const;

 private:
  BasisSector sector_;
  std::vector<Involution> generators_;
  std::vector<Block> blocks_;
  // Per sector index: block basis vector holding it, for each block (-1 if none), and its amplitude.
  std::vector<std::vector<std::int64_t>> position_;
  std::vector<std::vector<double>> amplitude_;
};

/// Reflection-resolved basis. Throws SymmetryAbsentError when the graph is not mirror symmetric.
[[nodiscard]] SymmetryBasis parity_sectors(const CouplingGraph& graph, const BasisSector& sector);

/// Diagonalizes every block of `basis` and merges the spectra in ascending order.
[[nodiscard]] Eigensystem diagonalize_resolved(const SparseHamiltonian& H, const SymmetryBasis& basis,
                                               bool want_vectors, std::size_t memory_budget = kDefaultDenseBudget);

struct GapRatio {
  double mean = 0.0;
  std::size_t ratios = 0;             ///< number of r_n averaged
  std::size_t excluded_degenerate = 0; ///< r_n dropped because a spacing was below the tolerance
};

/**
 * <r> over the bulk: the lowest and highest `discard_fraction` of the sorted
 * levels are dropped. Throws DomainError with fewer than 100 bulk levels.
 */
[[nodiscard]] GapRatio mean_gap_ratio(std::span<const double> energies, double discard_fraction = 0.1,
                                      double degenerate_tol = 1e-12);

/// Per-block <r>, pooled with weights equal to each block's ratio count.
[[nodiscard]] GapRatio mean_gap_ratio(const Eigensystem& eig, double discard_fraction = 0.1,
                                      double degenerate_tol = 1e-12);

/// Von Neumann entropy of every eigenvector for the cut `map`. Throws StateError without vectors.
[[nodiscard]] std::vector<double> eigenstate_entropies(const Eigensystem& eig, const SubsystemMap& map);

/// |<alpha|E_n>|^2 for every n. Throws StateError without vectors.
[[nodiscard]] std::vector<double> overlaps(const Eigensystem& eig, const BasisSector& sector, Word alpha);

/// Adjacent eigenvalue pairs closer than `tol`, as indices of the lower level.
[[nodiscard]] std::vector<std::size_t> near_degeneracies(std::span<const double> energies, double tol = 1e-10);

struct TowerPolicy {
  double threshold_factor = 5.0;    ///< tower members exceed this multiple of the mean overlap
  double seed_factor = 10.0;        ///< states used for the first spacing estimate
  double merge_fraction = 0.25;     ///< seed clusters merge within this fraction of their spacing
  double seed_weight_fraction = 0.1;   ///< seed clusters lighter than this share of the heaviest are ignored
  double lattice_tolerance = 0.25;     ///< accepted offset from the ladder, as a fraction of the spacing
  double rung_weight_fraction = 0.05;  ///< a rung lighter than this share of its inner neighbour ends the walk
  int max_iterations = 5;
  std::size_t min_towers = 3;
};

struct TowerReport {
  bool detected = false;
  std::string message;
  std::vector<std::vector<std::size_t>> members;  ///< eigenstate indices per tower, by energy
  std::vector<double> energies;                   ///< overlap-weighted tower centres, rad/ns
  std::vector<double> weights;                    ///< summed overlap per tower
  double spacing = 0.0;                           ///< mean adjacent spacing Delta E, rad/ns
  double max_relative_deviation = 0.0;            ///< max |s_k - Delta E| / Delta E
  double threshold = 0.0;
  double merge_distance = 0.0;

  [[nodiscard]] std::size_t count() const noexcept { return energies.size(); }
};

/**
 * Groups high-overlap eigenstates into evenly spaced towers.
 *
 * States above seed_factor times the mean overlap are clustered by single
 * linkage (merge distance merge_fraction times the largest gap, then times
 * the cluster spacing until stable); the smallest spacing between these
 * clusters holding at least seed_weight_fraction of the heaviest one's
 * weight is the first estimate of Delta E. The ladder is then followed
 * outward from the heaviest cluster: rung k collects the states above
 * threshold_factor times the mean within lattice_tolerance * Delta E of
 * anchor + k Delta E, Delta E is refit after each rung, and the walk stops at
 * an empty rung or one lighter than rung_weight_fraction of the previous.
 * Fewer than min_towers rungs yields detected = false.
 */
[[nodiscard]] TowerReport detect_towers(std::span<const double> overlaps, std::span<const double> energies,
                                        const TowerPolicy& policy = {});

struct Histogram {
  std::vector<double> edges;   ///< bins + 1 edges
  std::vector<double> density; ///< normalized to unit area
  std::vector<std::size_t> counts;
};

[[nodiscard]] Histogram density_of_states(std::span<const double> energies, int bins = 50);

/// spectrum.csv: n, E_over_2pi_MHz, parity, S_half, overlap_Pi (empty spans leave columns as NaN).
void write_spectrum_csv(const std::string& path, const Eigensystem& eig, std::span<const double> entropies,
                        std::span<const double> overlap_pi);
void write_towers_csv(const std::string& path, const TowerReport& report);
void write_dos_csv(const std::string& path, const Histogram& h);

}  // namespace hyperscar
