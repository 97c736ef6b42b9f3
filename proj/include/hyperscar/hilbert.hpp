// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file hilbert.hpp
 * @brief Fixed-photon-number basis sectors of L two-level sites.
 *
 * Qubit i is bit i of a 64-bit occupation word. A sector holds every word
 * with exactly N set bits among the low L bits, ordered by increasing numeric
 * value; the rank of a word is its position in that order (combinatorial
 * number system, colex order on the set-bit positions).
 */

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace hyperscar {

using Word = std::uint64_t;
using Index = std::uint64_t;

inline constexpr int kMaxSites = 30;

/// Sectors up to this dimension keep an explicit state table.
inline constexpr Index kMaterializeLimit = 10'000'000;

/// Binomial coefficient C(n, k) for 0 <= n <= 62; zero outside 0 <= k <= n.
[[nodiscard]] Index binomial(int n, int k);

/// Next word with the same popcount (Gosper's hack). `w` must be nonzero.
[[nodiscard]] constexpr Word next_same_popcount(Word w) noexcept {
  const Word c = w & (~w + 1);
  const Word r = w + c;
  return (((r ^ w) >> 2) / c) | r;
}

class BasisSector {
 public:
  /// Throws CapacityError for L > 30 and DomainError unless 0 <= N <= L.
  BasisSector(int sites, int photons);

  [[nodiscard]] int sites() const noexcept { return sites_; }
  [[nodiscard]] int photons() const noexcept { return photons_; }
  [[nodiscard]] Index dim() const noexcept { return dim_; }

  /// True when the state table is held in memory (dim <= kMaterializeLimit).
  [[nodiscard]] bool materialized() const noexcept { return !table_.empty() || dim_ == 0; }

  [[nodiscard]] bool contains(Word w) const noexcept;

  /// Position of `w` in the sector. O(L). Throws DomainError if `w` is not in the sector.
  [[nodiscard]] Index rank(Word w) const;

  /// Inverse of rank. O(L). Throws DomainError for index >= dim.
  [[nodiscard]] Word unrank(Index index) const;

  /// Table lookup when materialized, unrank otherwise.
  [[nodiscard]] Word state(Index index) const {
    return table_.empty() ? unrank(index) : table_[index];
  }

  /// Explicit table; throws StateError for lazy sectors.
  [[nodiscard]] std::span<const Word> states() const;

  [[nodiscard]] Word first() const noexcept { return (photons_ == 0) ? 0 : ((Word{1} << photons_) - 1); }

  /// Visits every state in increasing order without touching the table.
  template <class F>
  void for_each(F&& f) const {
    if (dim_ == 0) return;
    Word w = first();
    for (Index i = 0; i < dim_; ++i) {
      f(i, w);
      if (photons_ > 0 && i + 1 < dim_) w = next_same_popcount(w);
    }
  }

  friend bool operator==(const BasisSector& a, const BasisSector& b) noexcept {
    return a.sites_ == b.sites_ && a.photons_ == b.photons_;
  }

 private:
  int sites_;
  int photons_;
  Index dim_;
  std::vector<Word> table_;
};

/// Builds the (L, N) sector. Same as the constructor, named for call sites.
[[nodiscard]] BasisSector enumerate_sector(int sites, int photons);

/// Rank in the combinatorial number system for a word with any popcount:
/// position among all words with the same popcount.
[[nodiscard]] Index colex_rank(Word w) noexcept;

/**
 * Table-driven ranker for hot loops. Splits a word into 10-bit chunks; each
 * chunk's contribution depends only on its bits and the popcount below it.
 * Three lookups per rank for L <= 30.
 */
class FastRanker {
 public:
  explicit FastRanker(const BasisSector& sector);

  [[nodiscard]] Index operator()(Word w) const noexcept {
    Index r = 0;
    int below = 0;
    for (int c = 0; c < chunks_; ++c) {
      const auto bits = static_cast<std::uint32_t>((w >> (kChunkBits * c)) & kChunkMask);
      r += tables_[c][static_cast<std::size_t>(below) * kChunkSize + bits];
      below += std::popcount(bits);
    }
    return r;
  }

 private:
  static constexpr int kChunkBits = 10;
  static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
  static constexpr Word kChunkMask = kChunkSize - 1;
  int chunks_ = 0;
  std::array<std::vector<std::uint32_t>, 3> tables_;
};

/**
 * Decomposition of sector indices into (subsystem, complement) coordinates.
 *
 * For index u, `local(u)` packs the occupations of the subsystem sites in list
 * order (bit k = site A[k]); `complement(u)` is the colex rank of the remaining
 * sites' occupations, compressed to L-|A| bits, within their photon-count class.
 */
class SubsystemMap {
 public:
  static constexpr int kMaxSubsystem = 12;

  /// Throws CapacityError for |A| > 12 and DomainError for duplicate or out-of-range sites.
  SubsystemMap(const BasisSector& sector, std::vector<int> sites);

  [[nodiscard]] std::span<const int> sites() const noexcept { return sites_; }
  [[nodiscard]] int subsystem_size() const noexcept { return static_cast<int>(sites_.size()); }
  [[nodiscard]] int complement_size() const noexcept { return sector_sites_ - subsystem_size(); }
  [[nodiscard]] int photons() const noexcept { return photons_; }
  [[nodiscard]] Index dim() const noexcept { return local_.size(); }

  [[nodiscard]] std::uint32_t local(Index u) const { return local_[u]; }
  [[nodiscard]] std::uint32_t complement(Index u) const { return complement_[u]; }

  /// Number of complement configurations holding `photons` photons.
  [[nodiscard]] Index complement_class_size(int photons) const {
    return binomial(complement_size(), photons);
  }

 private:
  std::vector<int> sites_;
  int sector_sites_;
  int photons_;
  std::vector<std::uint32_t> local_;
  std::vector<std::uint32_t> complement_;
};

[[nodiscard]] SubsystemMap subsystem_maps(const BasisSector& sector, std::vector<int> sites);

/// Gathers the bits of `w` at `sites` into a packed word (bit k = site k of the list).
[[nodiscard]] Word gather_bits(Word w, std::span<const int> sites) noexcept;

}  // namespace hyperscar
