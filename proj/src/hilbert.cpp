// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperscar/hilbert.hpp"

#include <algorithm>
#include <string>

#include "hyperscar/errors.hpp"

namespace hyperscar {

namespace {

constexpr int kBinomialRows = 63;

struct BinomialTable {
  std::array<std::array<Index, kBinomialRows>, kBinomialRows> c{};
  BinomialTable() {
    for (int n = 0; n < kBinomialRows; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k < n ? c[n - 1][k] : 0);
    }
  }
};

const BinomialTable& binomials() {
  static const BinomialTable table;
  return table;
}

}  // namespace

Index binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n || n >= kBinomialRows) return 0;
  return binomials().c[n][k];
}

Index colex_rank(Word w) noexcept {
  Index r = 0;
  int k = 0;
  while (w != 0) {
    const int p = std::countr_zero(w);
    ++k;
    r += binomial(p, k);
    w &= w - 1;
  }
  return r;
}

Word gather_bits(Word w, std::span<const int> sites) noexcept {
  Word out = 0;
  for (std::size_t k = 0; k < sites.size(); ++k) out |= ((w >> sites[k]) & 1U) << k;
  return out;
}

// ---------------------------------------------------------------------------
// BasisSector
// ---------------------------------------------------------------------------

BasisSector::BasisSector(int sites, int photons) : sites_(sites), photons_(photons), dim_(0) {
  if (sites > kMaxSites) {
    throw CapacityError("sector with L=" + std::to_string(sites) + " exceeds the " +
                        std::to_string(kMaxSites) + "-site limit");
  }
  if (sites < 0 || photons < 0 || photons > sites) {
    throw DomainError("invalid sector (L=" + std::to_string(sites) + ", N=" + std::to_string(photons) + ")");
  }
  dim_ = binomial(sites, photons);
  if (dim_ <= kMaterializeLimit) {
    table_.reserve(dim_);
    for_each([this](Index, Word w) { table_.push_back(w); });
  }
}

bool BasisSector::contains(Word w) const noexcept {
  return (w >> sites_) == 0 && std::popcount(w) == photons_;
}

Index BasisSector::rank(Word w) const {
  if (!contains(w)) {
    throw DomainError("word " + std::to_string(w) + " is not in sector (L=" + std::to_string(sites_) +
                      ", N=" + std::to_string(photons_) + ")");
  }
  return colex_rank(w);
}

Word BasisSector::unrank(Index index) const {
  if (index >= dim_) throw DomainError("sector index " + std::to_string(index) + " out of range");
  Word w = 0;
  Index r = index;
  int c = sites_ - 1;
  for (int k = photons_; k >= 1; --k) {
    while (binomial(c, k) > r) --c;
    w |= Word{1} << c;
    r -= binomial(c, k);
    --c;
  }
  return w;
}

std::span<const Word> BasisSector::states() const {
  if (!materialized()) {
    throw StateError("sector of dimension " + std::to_string(dim_) + " is enumerated lazily");
  }
  return table_;
}

BasisSector enumerate_sector(int sites, int photons) { return BasisSector(sites, photons); }

// ---------------------------------------------------------------------------
// FastRanker
// ---------------------------------------------------------------------------

FastRanker::FastRanker(const BasisSector& sector) {
  const int n = sector.photons();
  chunks_ = std::max(1, (sector.sites() + kChunkBits - 1) / kChunkBits);
  for (int c = 0; c < chunks_; ++c) {
    auto& table = tables_[c];
    table.assign(static_cast<std::size_t>(n + 1) * kChunkSize, 0);
    for (int below = 0; below <= n; ++below) {
      for (std::uint32_t bits = 0; bits < kChunkSize; ++bits) {
        if (below + std::popcount(bits) > n) continue;
        Index r = 0;
        int k = below;
        for (int q = 0; q < kChunkBits; ++q) {
          if ((bits >> q) & 1U) r += binomial(kChunkBits * c + q, ++k);
        }
        table[static_cast<std::size_t>(below) * kChunkSize + bits] = static_cast<std::uint32_t>(r);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// SubsystemMap
// ---------------------------------------------------------------------------

SubsystemMap::SubsystemMap(const BasisSector& sector, std::vector<int> sites)
    : sites_(std::move(sites)), sector_sites_(sector.sites()), photons_(sector.photons()) {
  if (static_cast<int>(sites_.size()) > kMaxSubsystem) {
    throw CapacityError("subsystem of " + std::to_string(sites_.size()) + " sites exceeds the limit of " +
                        std::to_string(kMaxSubsystem));
  }
  Word mask = 0;
  for (int s : sites_) {
    if (s < 0 || s >= sector.sites()) throw DomainError("subsystem site " + std::to_string(s) + " out of range");
    if ((mask >> s) & 1U) throw DomainError("duplicate subsystem site " + std::to_string(s));
    mask |= Word{1} << s;
  }
  std::vector<int> rest;
  for (int s = 0; s < sector.sites(); ++s) {
    if (!((mask >> s) & 1U)) rest.push_back(s);
  }

  local_.resize(sector.dim());
  complement_.resize(sector.dim());
  sector.for_each([&](Index u, Word w) {
    local_[u] = static_cast<std::uint32_t>(gather_bits(w, sites_));
    complement_[u] = static_cast<std::uint32_t>(colex_rank(gather_bits(w, rest)));
  });
}

SubsystemMap subsystem_maps(const BasisSector& sector, std::vector<int> sites) {
  return SubsystemMap(sector, std::move(sites));
}

}  // namespace hyperscar
