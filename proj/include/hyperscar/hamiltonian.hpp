// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hamiltonian.hpp
 * @brief Sector-restricted effective XY Hamiltonian
 *
 *   H = sum_(i,j) J_ij (S-_i S+_j + S+_i S-_j) + sum_i Omega_i n_i
 *
 * in angular units (rad/ns). Off-diagonal entries connect two words that
 * differ by moving one photon along a graph edge; all entries are real.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperscar/hilbert.hpp"
#include "hyperscar/model.hpp"

namespace hyperscar {

using Complex = std::complex<double>;

/// Angular frequency in rad/ns of an ordinary frequency of 1 MHz.
inline constexpr double kRadPerNsPerMHz = 2.0 * 3.14159265358979323846 * 1e-3;

[[nodiscard]] constexpr double to_angular(double f_mhz) noexcept { return kRadPerNsPerMHz * f_mhz; }
[[nodiscard]] constexpr double to_mhz(double omega) noexcept { return omega / kRadPerNsPerMHz; }

enum class StorageMode { Auto, Explicit, MatrixFree };

[[nodiscard]] const char* to_string(StorageMode mode) noexcept;

struct HopTerm {
  Word mask = 0;  ///< bits i and j set
  double omega = 0.0;
  int i = 0;
  int j = 0;
  EdgeKind kind = EdgeKind::Explicit;
};

struct Triplet {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

class SparseHamiltonian {
 public:
  /// Auto picks matrix-free above this dimension.
  static constexpr Index kMatrixFreeThreshold = 1'000'000;
  static constexpr std::size_t kDefaultExplicitBudget = std::size_t{2} << 30;

  /**
   * Throws DomainError when graph and sector disagree on L, and CapacityError
   * when Explicit storage is requested beyond `explicit_budget_bytes`.
   */
  SparseHamiltonian(const CouplingGraph& graph, BasisSector sector, StorageMode mode = StorageMode::Auto,
                    std::size_t explicit_budget_bytes = kDefaultExplicitBudget);

  [[nodiscard]] const BasisSector& sector() const noexcept { return sector_; }
  [[nodiscard]] Index dim() const noexcept { return sector_.dim(); }
  [[nodiscard]] int sites() const noexcept { return sector_.sites(); }
  [[nodiscard]] StorageMode mode() const noexcept { return mode_; }
  [[nodiscard]] std::span<const HopTerm> hops() const noexcept { return hops_; }
  [[nodiscard]] std::span<const double> onsite() const noexcept { return onsite_; }
  [[nodiscard]] const FastRanker& ranker() const noexcept { return ranker_; }

  /// Number of stored off-diagonal entries (explicit mode), otherwise counted on demand.
  [[nodiscard]] std::size_t off_diagonal_count() const;

  [[nodiscard]] double diagonal(Word w) const noexcept {
    double d = 0.0;
    for (int s = 0; s < sector_.sites(); ++s) {
      if ((w >> s) & 1U) d += onsite_[s];
    }
    return d;
  }

  /// Entry (u, v) in rad/ns without building a row. Zero for words outside the sector.
  [[nodiscard]] double matrix_element(Word u, Word v) const noexcept;

  /// Calls f(neighbour_word, omega, hop) for every off-diagonal entry of row `u`, in edge order.
  template <class F>
  void for_each_neighbor(Word u, F&& f) const {
    for (const HopTerm& h : hops_) {
      const Word m = u & h.mask;
      if (m != 0 && m != h.mask) f(u ^ h.mask, h.omega, h);
    }
  }

  /// y = H x. Throws DomainError on size mismatch; x and y must not alias.
  void apply(std::span<const Complex> x, std::span<Complex> y) const;
  void apply(std::span<const double> x, std::span<double> y) const;

  /// Dense copy. Throws CapacityError above `max_dim`.
  [[nodiscard]] Eigen::MatrixXd dense(Index max_dim = 20'000) const;

  /// All nonzero entries in row order (diagonal first, then edge order).
  [[nodiscard]] std::vector<Triplet> triplets() const;

 private:
  template <class T>
  void apply_impl(std::span<const T> x, std::span<T> y) const;

  BasisSector sector_;
  StorageMode mode_;
  std::vector<HopTerm> hops_;
  std::vector<double> onsite_;
  FastRanker ranker_;
  std::vector<double> diag_;
  std::vector<Index> binom_;  // C(n, k) at n * (kMaxSites + 1) + k
  // CSR storage, explicit mode only.
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
};

[[nodiscard]] SparseHamiltonian assemble(const CouplingGraph& graph, const BasisSector& sector,
                                         StorageMode mode = StorageMode::Auto);

/// Debug dump (u, v, value) with u, v sector indices. Throws CapacityError above dim 5000.
void write_triplets_csv(const SparseHamiltonian& h, const std::string& path);

}  // namespace hyperscar
