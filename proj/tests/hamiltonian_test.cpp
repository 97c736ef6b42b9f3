// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperscar/hamiltonian.hpp"

#include <cmath>
#include <map>
#include <random>

#include "gtest/gtest.h"
#include "hyperscar/errors.hpp"

using namespace hyperscar;

namespace {

CouplingGraph chain_with_cross(int L, std::uint64_t seed) {
  CouplingGraph g = build_chain(L, Boundary::Open, -9, -6);
  g.set_embedding(snake_grid_embedding(L, (L + 5) / 6, 6));
  return add_cross_couplings(g, 0.3, 1.2, seed);
}

// Independent construction: apply S+_j S-_i and S+_i S-_j to every word of the full 2^L space.
std::map<std::pair<Word, Word>, double> full_space_entries(const CouplingGraph& g) {
  std::map<std::pair<Word, Word>, double> out;
  const int L = g.sites();
  for (Word u = 0; u < (Word{1} << L); ++u) {
    double d = 0;
    for (int s = 0; s < L; ++s) d += ((u >> s) & 1) * to_angular(g.onsite()[s]);
    if (d != 0) out[{u, u}] += d;
    for (const Edge& e : g.edges()) {
      const bool bi = (u >> e.i) & 1, bj = (u >> e.j) & 1;
      if (bi && !bj) out[{u, u - (Word{1} << e.i) + (Word{1} << e.j)}] += to_angular(e.f_mhz);
      if (bj && !bi) out[{u, u - (Word{1} << e.j) + (Word{1} << e.i)}] += to_angular(e.f_mhz);
    }
  }
  return out;
}

std::vector<Complex> random_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Complex> v(n);
  for (auto& c : v) c = {normal(rng), normal(rng)};
  return v;
}

}  // namespace

TEST(Assemble, TwoSiteMatrix) {
  CouplingGraph g(2);
  g.add_edge({0, 1, -9.0});
  g.set_onsite({1.5, -2.0});
  const SparseHamiltonian H(g, BasisSector(2, 1));
  const Eigen::MatrixXd m = H.dense();
  EXPECT_DOUBLE_EQ(m(0, 0), to_angular(1.5));
  EXPECT_DOUBLE_EQ(m(1, 1), to_angular(-2.0));
  EXPECT_DOUBLE_EQ(m(0, 1), to_angular(-9.0));
  EXPECT_DOUBLE_EQ(m(1, 0), to_angular(-9.0));
}

TEST(Assemble, FourSiteChainAgainstBruteForce) {
  const auto g = build_chain(4, Boundary::Open, -9, -6);
  const BasisSector s(4, 2);
  const SparseHamiltonian H(g, s);
  const auto oracle = full_space_entries(g);
  const Eigen::MatrixXd m = H.dense();
  int nonzero = 0;
  for (Index u = 0; u < s.dim(); ++u) {
    for (Index v = 0; v < s.dim(); ++v) {
      const auto it = oracle.find({s.state(u), s.state(v)});
      const double expected = it == oracle.end() ? 0.0 : it->second;
      EXPECT_DOUBLE_EQ(m(u, v), expected);
      if (u != v && m(u, v) != 0) ++nonzero;
    }
  }
  // Six unordered edge-connected pairs among the six states, each stored twice.
  std::size_t pairs = 0;
  for (const auto& [uv, val] : oracle) pairs += (uv.first < uv.second && val != 0 && std::popcount(uv.first) == 2);
  EXPECT_EQ(pairs, 6U);
  EXPECT_EQ(nonzero, 12);
  EXPECT_EQ(H.off_diagonal_count(), 2 * pairs);
}

TEST(Assemble, FullSpaceEmbeddingHasNoLeakage) {
  // Every full-space entry from a sector word lands inside the same sector and matches.
  for (int L = 2; L <= 8; L += 2) {
    auto g = chain_with_cross(L, 5);
    std::vector<double> onsite(L);
    for (int s = 0; s < L; ++s) onsite[s] = 0.1 * s;
    g.set_onsite(onsite);
    const auto oracle = full_space_entries(g);
    for (int N = 0; N <= L; ++N) {
      const BasisSector s(L, N);
      const SparseHamiltonian H(g, s);
      for (const auto& [uv, val] : oracle) {
        if (std::popcount(uv.first) != N) continue;
        ASSERT_EQ(std::popcount(uv.second), N);
        EXPECT_NEAR(H.matrix_element(uv.first, uv.second), val, 1e-15);
      }
      const auto trip = H.triplets();
      for (const Triplet& t : trip) {
        if (t.value == 0) continue;
        const auto it = oracle.find({s.state(t.row), s.state(t.col)});
        ASSERT_NE(it, oracle.end());
      }
    }
  }
}

TEST(Assemble, ModesAgreeAtSixteenSites) {
  const auto g = chain_with_cross(16, 11);
  const BasisSector s(16, 8);
  const SparseHamiltonian explicit_h(g, s, StorageMode::Explicit);
  const SparseHamiltonian free_h(g, s, StorageMode::MatrixFree);
  EXPECT_EQ(explicit_h.mode(), StorageMode::Explicit);
  EXPECT_EQ(free_h.mode(), StorageMode::MatrixFree);
  const auto x = random_vector(s.dim(), 1);
  std::vector<Complex> y1(s.dim()), y2(s.dim());
  explicit_h.apply(x, y1);
  free_h.apply(x, y2);
  double err = 0, scale = 0;
  for (Index u = 0; u < s.dim(); ++u) {
    err = std::max(err, std::abs(y1[u] - y2[u]));
    scale = std::max(scale, std::abs(y1[u]));
  }
  EXPECT_LT(err, 1e-12 * std::max(1.0, scale));
}

TEST(Assemble, ModesAgreeWithWrapAndReversedEdges) {
  // Wrap-around, (i, i+3) and reversed-endpoint hops take different matrix-free paths.
  const auto base = add_nnn_couplings(build_chain(14, Boundary::Periodic, -9, -6), 0.7);
  CouplingGraph g(14);
  for (const Edge& e : base.edges()) g.add_edge({e.j, e.i, e.f_mhz, e.kind});
  g.add_edge({11, 2, -0.4, EdgeKind::Explicit});
  for (int N : {1, 6, 7, 13}) {
    const BasisSector s(14, N);
    const SparseHamiltonian explicit_h(g, s, StorageMode::Explicit);
    const SparseHamiltonian free_h(g, s, StorageMode::MatrixFree);
    const auto x = random_vector(s.dim(), 3);
    std::vector<Complex> y1(s.dim()), y2(s.dim());
    explicit_h.apply(x, y1);
    free_h.apply(x, y2);
    double err = 0;
    for (Index u = 0; u < s.dim(); ++u) err = std::max(err, std::abs(y1[u] - y2[u]));
    EXPECT_LT(err, 1e-12) << "N=" << N;
  }
}

TEST(Assemble, LazySectorMatrixFree) {
  // A sector above the materialization limit still supports element queries.
  const auto g = build_chain(30, Boundary::Open, -9, -6);
  const SparseHamiltonian H(g, BasisSector(30, 15));
  EXPECT_EQ(H.mode(), StorageMode::MatrixFree);
  const Word pi = collective_state(g, CollectiveState::Pi);
  EXPECT_DOUBLE_EQ(H.matrix_element(pi, pi ^ 0b11), to_angular(-9));
}

TEST(Assemble, ExplicitOverBudgetThrows) {
  const auto g = build_chain(16, Boundary::Open, -9, -6);
  EXPECT_THROW(SparseHamiltonian(g, BasisSector(16, 8), StorageMode::Explicit, 1024), CapacityError);
  const SparseHamiltonian fallback(g, BasisSector(16, 8), StorageMode::Auto, 1024);
  EXPECT_EQ(fallback.mode(), StorageMode::MatrixFree);
  EXPECT_THROW(SparseHamiltonian(g, BasisSector(14, 7)), DomainError);
}

TEST(Apply, SymmetricAndHermitianExpectation) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto g = chain_with_cross(12, seed);
    std::vector<double> onsite(12);
    for (int s = 0; s < 12; ++s) onsite[s] = std::sin(1.0 + s + seed);
    g.set_onsite(onsite);
    const SparseHamiltonian H(g, BasisSector(12, 6));
    const Eigen::MatrixXd m = H.dense();
    EXPECT_LT((m - m.transpose()).norm(), 1e-14);
    const auto v = random_vector(H.dim(), seed + 100);
    std::vector<Complex> hv(H.dim());
    H.apply(v, hv);
    Complex e = 0;
    for (Index u = 0; u < H.dim(); ++u) e += std::conj(v[u]) * hv[u];
    EXPECT_LT(std::abs(e.imag()), 1e-12 * std::max(1.0, std::abs(e.real())));
  }
}

TEST(Apply, RealAndComplexPathsAgree) {
  const auto g = chain_with_cross(10, 2);
  const SparseHamiltonian H(g, BasisSector(10, 5));
  std::vector<double> x(H.dim()), y(H.dim());
  std::vector<Complex> xc(H.dim()), yc(H.dim());
  for (Index u = 0; u < H.dim(); ++u) xc[u] = x[u] = std::cos(0.3 * u);
  H.apply(x, y);
  H.apply(xc, yc);
  for (Index u = 0; u < H.dim(); ++u) EXPECT_DOUBLE_EQ(y[u], yc[u].real());
}

TEST(Apply, DimensionMismatch) {
  const SparseHamiltonian H(build_chain(4, Boundary::Open, -9, -6), BasisSector(4, 2));
  std::vector<Complex> x(5), y(6);
  EXPECT_THROW(H.apply(x, y), DomainError);
}

TEST(Apply, TraceIsDiagonalSum) {
  auto g = chain_with_cross(10, 3);
  g = set_onsite(g, onsite::Staircase{0.8});
  const BasisSector s(10, 5);
  const SparseHamiltonian H(g, s);
  double expected = 0;
  s.for_each([&](Index, Word w) {
    for (int i = 0; i < 10; ++i) expected += ((w >> i) & 1) * to_angular(g.onsite()[i]);
  });
  EXPECT_NEAR(H.dense().trace(), expected, 1e-10);
}

TEST(MatrixElement, Cases) {
  auto g = build_chain(6, Boundary::Open, -9, -6);
  g = set_onsite(g, onsite::Staircase{0.8});
  const SparseHamiltonian H(g, BasisSector(6, 3));
  EXPECT_NEAR(H.matrix_element(0b000111, 0b000111), to_angular(0.8 + 0.8 + 1.6), 1e-15);
  EXPECT_EQ(H.matrix_element(0b000111, 0b111000), 0.0);
  EXPECT_EQ(H.matrix_element(0b000111, 0b001011), to_angular(-9));  // 2 -> 3
  EXPECT_EQ(H.matrix_element(0b000111, 0b001101), 0.0);              // 1 -> 3, not an edge
  EXPECT_EQ(H.matrix_element(0b000111, 0b010110), 0.0);              // 0 -> 4, not an edge
}
