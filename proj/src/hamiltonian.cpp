// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperscar/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "hyperscar/errors.hpp"
#include "hyperscar/io.hpp"

namespace hyperscar {

const char* to_string(StorageMode mode) noexcept {
  switch (mode) {
    case StorageMode::Auto: return "auto";
    case StorageMode::Explicit: return "explicit";
    case StorageMode::MatrixFree: return "matrix_free";
  }
  return "unknown";
}

SparseHamiltonian::SparseHamiltonian(const CouplingGraph& graph, BasisSector sector, StorageMode mode,
                                     std::size_t explicit_budget_bytes)
    : sector_(std::move(sector)), mode_(mode), ranker_(sector_) {
  if (graph.sites() != sector_.sites()) {
    throw DomainError("graph has " + std::to_string(graph.sites()) + " sites, sector has " +
                      std::to_string(sector_.sites()));
  }
  for (const Edge& e : graph.edges()) {
    hops_.push_back({(Word{1} << e.i) | (Word{1} << e.j), to_angular(e.f_mhz), e.i, e.j, e.kind});
  }
  for (double f : graph.onsite()) onsite_.push_back(to_angular(f));
  binom_.resize(static_cast<std::size_t>(kMaxSites + 1) * (kMaxSites + 1));
  for (int n = 0; n <= kMaxSites; ++n) {
    for (int k = 0; k <= kMaxSites; ++k) binom_[static_cast<std::size_t>(n) * (kMaxSites + 1) + k] = binomial(n, k);
  }

  if (sector_.materialized()) {
    diag_.resize(sector_.dim());
    sector_.for_each([this](Index u, Word w) { diag_[u] = diagonal(w); });
  }

  const bool want_explicit =
      mode == StorageMode::Explicit || (mode == StorageMode::Auto && sector_.dim() <= kMatrixFreeThreshold);
  if (!want_explicit) {
    mode_ = StorageMode::MatrixFree;
    return;
  }

  const std::size_t nnz = off_diagonal_count();
  const std::size_t bytes = nnz * (sizeof(std::uint32_t) + sizeof(double)) + (sector_.dim() + 1) * sizeof(std::size_t);
  if (bytes > explicit_budget_bytes || !sector_.materialized()) {
    if (mode == StorageMode::Explicit) {
      throw CapacityError("explicit storage needs " + std::to_string(bytes) + " bytes, over the budget of " +
                          std::to_string(explicit_budget_bytes) + "; use matrix-free mode");
    }
    mode_ = StorageMode::MatrixFree;
    return;
  }
  mode_ = StorageMode::Explicit;
  row_ptr_.reserve(sector_.dim() + 1);
  cols_.reserve(nnz);
  vals_.reserve(nnz);
  row_ptr_.push_back(0);
  for (Word w : sector_.states()) {
    for_each_neighbor(w, [&](Word v, double omega, const HopTerm&) {
      cols_.push_back(static_cast<std::uint32_t>(ranker_(v)));
      vals_.push_back(omega);
    });
    row_ptr_.push_back(cols_.size());
  }
}

std::size_t SparseHamiltonian::off_diagonal_count() const {
  if (mode_ == StorageMode::Explicit && !row_ptr_.empty()) return cols_.size();
  std::size_t n = 0;
  sector_.for_each([&](Index, Word w) { for_each_neighbor(w, [&](Word, double, const HopTerm&) { ++n; }); });
  return n;
}

double SparseHamiltonian::matrix_element(Word u, Word v) const noexcept {
  if (!sector_.contains(u) || !sector_.contains(v)) return 0.0;
  if (u == v) return diagonal(u);
  double out = 0.0;
  const Word diff = u ^ v;
  for (const HopTerm& h : hops_) {
    if (diff == h.mask) out += h.omega;
  }
  return out;
}

template <class T>
void SparseHamiltonian::apply_impl(std::span<const T> x, std::span<T> y) const {
  const Index n = sector_.dim();
  if (x.size() != n || y.size() != n) {
    throw DomainError("apply: vector length " + std::to_string(x.size()) + "/" + std::to_string(y.size()) +
                      " does not match dimension " + std::to_string(n));
  }
  if (mode_ == StorageMode::Explicit) {
    for (Index u = 0; u < n; ++u) {
      T acc = diag_[u] * x[u];
      for (std::size_t k = row_ptr_[u]; k < row_ptr_[u + 1]; ++k) acc += vals_[k] * x[cols_[k]];
      y[u] = acc;
    }
    return;
  }
  auto row = [&](Index u, Word w, double d) {
    T acc = d * x[u];
    for (const HopTerm& h : hops_) {
      const Word m = w & h.mask;
      if (m != 0 && m != h.mask) acc += h.omega * x[ranker_(w ^ h.mask)];
    }
    y[u] = acc;
  };
  if (sector_.materialized()) {
    // Hop-major within row blocks. For a fixed hop, u -> rank(w ^ mask) preserves colex order on the rows
    // where the hop acts, so reads of x stream instead of jumping. Small blocks keep y and both x windows
    // in L1. Summation order per row matches `row`.
    //
    // Nearest-neighbour hops skip the ranker: moving the photon between bits i and i+1 changes the colex
    // rank by C(i, k), k = photons below bit i.
    constexpr Index kBlock = 256;
    const auto states = sector_.states();
    for (Index b0 = 0; b0 < n; b0 += kBlock) {
      const Index b1 = std::min(n, b0 + kBlock);
      for (Index u = b0; u < b1; ++u) y[u] = diag_[u] * x[u];
      for (const HopTerm& h : hops_) {
        const int lo = std::min(h.i, h.j);
        if (std::max(h.i, h.j) == lo + 1) {
          const Word below = (Word{1} << lo) - 1;
          const Index* step = &binom_[static_cast<std::size_t>(lo) * (kMaxSites + 1)];
          for (Index u = b0; u < b1; ++u) {
            const Word w = states[u];
            const Word pair = (w >> lo) & 3;
            if (pair == 1) {
              y[u] += h.omega * x[u + step[std::popcount(w & below)]];
            } else if (pair == 2) {
              y[u] += h.omega * x[u - step[std::popcount(w & below)]];
            }
          }
        } else {
          for (Index u = b0; u < b1; ++u) {
            const Word w = states[u];
            if (std::popcount(w & h.mask) == 1) y[u] += h.omega * x[ranker_(w ^ h.mask)];
          }
        }
      }
    }
  } else {
    sector_.for_each([&](Index u, Word w) { row(u, w, diagonal(w)); });
  }
}

void SparseHamiltonian::apply(std::span<const Complex> x, std::span<Complex> y) const { apply_impl(x, y); }
void SparseHamiltonian::apply(std::span<const double> x, std::span<double> y) const { apply_impl(x, y); }

Eigen::MatrixXd SparseHamiltonian::dense(Index max_dim) const {
  if (dim() > max_dim) {
    throw CapacityError("dense matrix of dimension " + std::to_string(dim()) + " exceeds the limit of " +
                        std::to_string(max_dim));
  }
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  sector_.for_each([&](Index u, Word w) {
    const auto r = static_cast<Eigen::Index>(u);
    m(r, r) = diagonal(w);
    for_each_neighbor(w, [&](Word v, double omega, const HopTerm&) { m(r, static_cast<Eigen::Index>(ranker_(v))) += omega; });
  });
  return m;
}

std::vector<Triplet> SparseHamiltonian::triplets() const {
  std::vector<Triplet> out;
  sector_.for_each([&](Index u, Word w) {
    out.push_back({u, u, diagonal(w)});
    for_each_neighbor(w, [&](Word v, double omega, const HopTerm&) { out.push_back({u, ranker_(v), omega}); });
  });
  return out;
}

SparseHamiltonian assemble(const CouplingGraph& graph, const BasisSector& sector, StorageMode mode) {
  return SparseHamiltonian(graph, sector, mode);
}

void write_triplets_csv(const SparseHamiltonian& h, const std::string& path) {
  if (h.dim() > 5000) throw CapacityError("triplet dump is limited to dimension 5000");
  io::CsvWriter out(path);
  const std::string header[] = {"u", "v", "value"};
  out.header(header);
  for (const Triplet& t : h.triplets()) {
    const double row[] = {static_cast<double>(t.row), static_cast<double>(t.col), t.value};
    out.row(row);
  }
}

}  // namespace hyperscar
