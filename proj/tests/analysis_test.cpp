// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperscar/analysis.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "gtest/gtest.h"
#include "hyperscar/errors.hpp"

using namespace hyperscar;

namespace {

CouplingGraph device_chain(int L, double f_a, double f_e, std::uint64_t seed) {
  CouplingGraph g = build_chain(L, Boundary::Open, f_a, f_e);
  g.set_embedding(snake_grid_embedding(L, (L + 5) / 6, 6));
  return add_cross_couplings(g, 0.3, 1.2, seed);
}

std::vector<double> cosine(const std::vector<double>& t, double f_mhz, double amp = 1.0) {
  std::vector<double> x;
  for (double s : t) x.push_back(amp * std::cos(2 * M_PI * f_mhz * 1e-3 * s));
  return x;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("hyperscar_analysis_" + name)).string();
}

}  // namespace

TEST(Fourier, CosinePeak) {
  const auto t = uniform_times(400, 1);
  const auto s = fourier_amplitude(t, cosine(t, 21.0));
  EXPECT_EQ(s.padded_samples, 4000U);
  EXPECT_DOUBLE_EQ(s.resolution_mhz(), 0.25);
  const auto p = dominant_peak(s);
  EXPECT_NEAR(p.frequency_mhz, 21.0, 0.25);
  EXPECT_NEAR(p.amplitude, 1.0, 0.03);
  EXPECT_NEAR(peak_at(s, 21.0, 2.0), p.amplitude, 1e-15);
}

TEST(Fourier, BinCentredCosineHasUnitAmplitude) {
  // 400 samples holding exactly 8 periods of a 20 MHz cosine.
  std::vector<double> t(400);
  std::iota(t.begin(), t.end(), 0.0);
  const auto s = fourier_amplitude(t, cosine(t, 20.0, 0.3));
  EXPECT_NEAR(peak_at(s, 20.0, 0.1), 0.3, 1e-12);
}

TEST(Fourier, GridIsUniformAndStartsAboveDc) {
  const auto t = uniform_times(400, 1);
  const auto s = fourier_amplitude(t, cosine(t, 13.0));
  for (std::size_t k = 0; k < s.frequencies_mhz.size(); ++k)
    EXPECT_NEAR(s.frequencies_mhz[k], 0.25 * static_cast<double>(k + 1), 1e-12);
  EXPECT_NEAR(s.frequencies_mhz.back(), 500.0, 1e-12);
}

TEST(Fourier, ConstantSeriesIsFlatZero) {
  const std::vector<double> x(401, 0.7);
  const auto s = fourier_amplitude(x, 1.0);
  for (double a : s.amplitude) EXPECT_LT(a, 1e-13);
}

TEST(Fourier, PowerBoundedByVariance) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(100 + 37 * trial);
    for (double& v : x) v = normal(rng) + 0.1 * trial;
    const auto s = fourier_amplitude(x, 0.5, 0.5 * 10 * static_cast<double>(x.size()));
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    double var = 0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= static_cast<double>(x.size());
    double power = 0;
    for (std::size_t k = 0; k + 1 < s.amplitude.size(); ++k) power += s.amplitude[k] * s.amplitude[k];
    power *= static_cast<double>(s.raw_samples) / (2.0 * static_cast<double>(s.padded_samples));
    EXPECT_LE(power, var * (1 + 1e-12));
  }
}

TEST(Fourier, RejectsBadGrids) {
  const std::vector<double> t = {0, 1, 2.5, 3};
  const std::vector<double> x = {1, 2, 3, 4};
  EXPECT_THROW((void)fourier_amplitude(t, x), DomainError);
  EXPECT_THROW((void)fourier_amplitude(x, 1.0, 2.0), DomainError);
  EXPECT_THROW((void)fourier_amplitude(x, 0.0), DomainError);
  const auto s = fourier_amplitude(x, 1.0, 100.0);
  EXPECT_THROW((void)peak_at(s, 1.0, 5.0), DomainError);
  EXPECT_THROW((void)peak_at(s, 499.0, 5.0), DomainError);
}

TEST(RandomStates, DistinctDeterministicAndExcluding) {
  const BasisSector s(12, 6);
  const std::vector<Word> exclude = {0b010101010101, 0b101010101010};
  const auto a = random_basis_states(s, 120, 7, exclude);
  EXPECT_EQ(a, random_basis_states(s, 120, 7, exclude));
  EXPECT_NE(a, random_basis_states(s, 120, 8, exclude));
  const std::set<Word> unique(a.begin(), a.end());
  EXPECT_EQ(unique.size(), 120U);
  for (Word w : a) {
    EXPECT_TRUE(s.contains(w));
    EXPECT_EQ(std::count(exclude.begin(), exclude.end(), w), 0);
  }
  const std::vector<Word> small_exclude = {0b0101, 0b1010};
  EXPECT_THROW((void)random_basis_states(BasisSector(4, 2), 5, 1, small_exclude), DomainError);
  EXPECT_EQ(random_basis_states(BasisSector(4, 2), 4, 1, small_exclude).size(), 4U);
  EXPECT_EQ(random_basis_states(BasisSector(4, 2), 6, 1).size(), 6U);
}

TEST(Scan, EmptyEntries) {
  const auto g = device_chain(8, -9, -6, 1);
  const SparseHamiltonian H(g, BasisSector(8, 4));
  EXPECT_TRUE(scan_states(H, {}).records.empty());
}

TEST(Scan, DeterministicAcrossWorkerCounts) {
  const auto g = device_chain(10, -9, -6, 3);
  const BasisSector s(10, 5);
  const SparseHamiltonian H(g, s);
  std::vector<ScanEntry> entries = {{"Pi", collective_state(g, CollectiveState::Pi)},
                                    {"PiPrime", collective_state(g, CollectiveState::PiPrime)}};
  const std::vector<Word> skip = {entries[0].word, entries[1].word};
  for (Word w : random_basis_states(s, 12, 5, skip)) entries.push_back({"random", w});
  ScanOptions opt;
  opt.times = uniform_times(200, 1);
  const auto one = scan_states(H, entries, opt);
  opt.workers = 3;
  const auto three = scan_states(H, entries, opt);
  ASSERT_EQ(one.records.size(), entries.size());
  EXPECT_EQ(one.f1_mhz, three.f1_mhz);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    EXPECT_EQ(one.records[k].word, entries[k].word);
    EXPECT_EQ(one.records[k].g2, three.records[k].g2);
    EXPECT_TRUE(one.records[k].error.empty());
  }
  const auto ranks = scan_ranks(one);
  const std::set<std::size_t> distinct(ranks.begin(), ranks.end());
  EXPECT_EQ(distinct.size(), ranks.size());
  EXPECT_EQ(*distinct.begin(), 1U);

  const std::string path = temp_path("scan.csv");
  write_scan_csv(path, one);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "state_bits_hex,label,g2_at_f1,rank,scar_candidate");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, entries.size());
}

TEST(Scan, ScoreIsSquaredPeakOfOwnImbalance) {
  const auto g = device_chain(8, -9, -6, 2);
  const BasisSector s(8, 4);
  const SparseHamiltonian H(g, s);
  const Word pi = collective_state(g, CollectiveState::Pi);
  const std::vector<ScanEntry> entries = {{"Pi", pi}};
  ScanOptions opt;
  opt.times = uniform_times(300, 1);
  const auto res = scan_states(H, entries, opt);
  const auto traj = evolve_dense(H, basis_vector(s, pi), opt.times);
  const auto spec = fourier_amplitude(opt.times, imbalance(traj, s));
  EXPECT_NEAR(res.f1_mhz, dominant_peak(spec, 1.0).frequency_mhz, 1e-12);
  const double g1 = peak_at(spec, res.f1_mhz, 2.0);
  EXPECT_NEAR(res.records[0].g2, g1 * g1, 1e-9);
}

TEST(Scan, FailedEntriesAreReportedAndScanContinues) {
  const auto g = device_chain(8, -9, -6, 2);
  const SparseHamiltonian H(g, BasisSector(8, 4));
  const std::vector<ScanEntry> entries = {{"Pi", collective_state(g, CollectiveState::Pi)}, {"random", 0b00001111}};
  ScanOptions opt;
  opt.krylov.max_dim = 2;
  opt.krylov.max_halvings = 0;
  opt.krylov.tol = 1e-300;
  opt.f1_mhz = 20.0;
  const auto res = scan_states(H, entries, opt);
  for (const auto& r : res.records) {
    EXPECT_TRUE(std::isnan(r.g2));
    EXPECT_FALSE(r.error.empty());
    EXPECT_FALSE(r.scar_candidate);
  }
  opt.f1_mhz.reset();
  EXPECT_THROW((void)scan_states(H, entries, opt), NumericalError);
}

TEST(Hypercube, FourSiteVertices) {
  const auto v = hypercube_vertices(build_chain(4, Boundary::Open, -9, -6));
  EXPECT_EQ(v, (std::vector<Word>{0b0101, 0b0110, 0b1001, 0b1010}));
}

TEST(Hypercube, VertexCountAndCollectiveStates) {
  const auto g = build_chain(20, Boundary::Open, -9, -6);
  const auto v = hypercube_vertices(g);
  EXPECT_EQ(v.size(), 1024U);
  for (Word w : v) EXPECT_EQ(std::popcount(w), 10);
  for (auto c : {CollectiveState::Pi, CollectiveState::PiPrime, CollectiveState::Theta, CollectiveState::ThetaPrime})
    EXPECT_TRUE(std::binary_search(v.begin(), v.end(), collective_state(g, c)));
  EXPECT_THROW((void)hypercube_vertices(CouplingGraph(6)), DomainError);
}

TEST(Hypercube, DeltaClosedFormOnCleanChains) {
  for (int n = 2; n <= 6; ++n) {
    const auto r = hypercube_report(build_chain(2 * n, Boundary::Open, -9, -6));
    EXPECT_EQ(r.vertices, std::size_t{1} << n);
    EXPECT_NEAR(r.delta, n * std::pow(2.0, n - 1) * to_angular(9), 1e-9) << "N=" << n;
    EXPECT_EQ(r.delta_by_kind.size(), 1U);
    EXPECT_EQ(r.delta_by_kind.count(EdgeKind::Intra), 1U);
  }
}

TEST(Hypercube, GammaByBruteForceAndCrossCouplingsStayOutside) {
  const auto g = device_chain(10, -9, -6, 6);
  const BasisSector s(10, 5);
  const SparseHamiltonian H(g, s);
  const auto r = hypercube_report(H, g);
  const auto v = hypercube_vertices(g);
  const std::set<Word> in(v.begin(), v.end());
  double delta = 0, gamma = 0;
  for (Word a : v) {
    for (Index b = 0; b < s.dim(); ++b) {
      const double h = std::abs(H.matrix_element(a, s.state(b)));
      if (a == s.state(b)) continue;
      (in.count(s.state(b)) ? delta : gamma) += h;
    }
  }
  EXPECT_NEAR(r.delta, delta / 2, 1e-9);
  EXPECT_NEAR(r.gamma, gamma, 1e-9);
  EXPECT_EQ(r.delta_by_kind.count(EdgeKind::Cross), 0U);
  EXPECT_GT(r.gamma_by_kind.at(EdgeKind::Cross), 0.0);
  EXPECT_GT(r.gamma_by_kind.at(EdgeKind::Inter), 0.0);
  const auto from_graph = hypercube_report(g);
  EXPECT_NEAR(from_graph.delta, r.delta, 1e-12);
  EXPECT_NEAR(from_graph.gamma, r.gamma, 1e-12);

  const std::string path = temp_path("hypercube.json");
  write_hypercube_json(path, r);
  std::ifstream f(path);
  const std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  EXPECT_NE(text.find("\"gamma_by_category\""), std::string::npos);
  EXPECT_NE(text.find("\"ratio\""), std::string::npos);
}

TEST(Revival, FirstMaximumAfterFirstMinimum) {
  const auto t = uniform_times(200, 1);
  std::vector<double> f;
  for (double s : t) f.push_back(std::exp(-s / 150) * std::pow(std::cos(M_PI * s / 50), 2));
  const auto r = first_revival(t, f);
  EXPECT_NEAR(r.t, 50.0, 1.0);
  EXPECT_NEAR(r.value, f[r.index], 0.0);
  EXPECT_NEAR(first_revival(t, f, 60.0).t, 100.0, 1.0);
  const std::vector<double> mono = {1.0, 0.8, 0.6, 0.5};
  EXPECT_THROW((void)first_revival(std::vector<double>{0, 1, 2, 3}, mono), DomainError);
}

TEST(FidelityDensity, Values) {
  EXPECT_EQ(fidelity_density(1.0, 12), 0.0);
  EXPECT_NEAR(fidelity_density(std::exp(-1.2), 12), -0.1, 1e-15);
  EXPECT_TRUE(std::isinf(fidelity_density(0.0, 12)));
  EXPECT_LT(fidelity_density(0.0, 12), 0.0);
  EXPECT_THROW((void)fidelity_density(-0.1, 12), DomainError);
  EXPECT_THROW((void)fidelity_density(1.5, 12), DomainError);
}

TEST(SpectralOracle, MatchesTrajectoryImbalance) {
  const auto g = device_chain(8, -9, -6, 9);
  const BasisSector s(8, 4);
  const SparseHamiltonian H(g, s);
  const auto eig = diagonalize(H, true);
  const auto times = uniform_times(400, 2);
  for (Word alpha : {collective_state(g, CollectiveState::Pi), Word{0b11000011}, Word{0b00101101}}) {
    const auto oracle = imbalance_spectral_oracle(eig, s, alpha, times);
    const auto direct = imbalance(evolve_krylov(H, basis_vector(s, alpha), times), s);
    EXPECT_NEAR(oracle[0], 1.0, 1e-12);
    for (std::size_t k = 0; k < times.size(); ++k) EXPECT_NEAR(oracle[k], direct[k], 1e-8);
  }
}

TEST(SpectralOracle, DiagonalHamiltonianIsStationary) {
  CouplingGraph g(6);
  g.set_onsite({1, 2, 4, 8, 16, 32});
  const BasisSector s(6, 3);
  const auto eig = diagonalize(SparseHamiltonian(g, s), true);
  for (double v : imbalance_spectral_oracle(eig, s, 0b101010, uniform_times(100, 5))) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(SpectralOracle, Limits) {
  Eigensystem no_vectors;
  no_vectors.energies = {0.0};
  EXPECT_THROW((void)imbalance_spectral_oracle(no_vectors, BasisSector(2, 1), 0b01, std::vector<double>{0.0}),
               StateError);
  Eigensystem big;
  EXPECT_THROW((void)imbalance_spectral_oracle(big, BasisSector(14, 7), 0b1111111, std::vector<double>{0.0}),
               CapacityError);
}

TEST(TowerApproximation, SinglePairIsOneCosine) {
  const double a2 = 0.3, de = 0.12;
  const auto t = uniform_times(100, 1);
  const auto full = imbalance_from_towers(std::vector<double>{a2, a2}, de, 0.05, t);
  const auto lead = imbalance_from_towers(std::vector<double>{a2, a2}, de, 0.05, t, TowerSum::Leading);
  for (std::size_t k = 0; k < t.size(); ++k) {
    EXPECT_NEAR(full[k] - 0.05, 2 * a2 * a2 * std::cos(de * t[k]), 1e-15);
    EXPECT_NEAR(lead[k], full[k], 1e-15);
  }
}

TEST(TowerApproximation, LeadingTermOfFourTowers) {
  const std::vector<double> w = {0.05, 0.2, 0.2, 0.05};
  const double de = 0.1;
  const auto t = uniform_times(50, 1);
  const auto lead = imbalance_from_towers(w, de, 0.0, t, TowerSum::Leading);
  for (std::size_t k = 0; k < t.size(); ++k)
    EXPECT_NEAR(lead[k], (4 * 0.2 * 0.05 + 2 * 0.2 * 0.2) * std::cos(de * t[k]), 1e-15);
}

TEST(TowerApproximation, EightTowersGiveOneDominantPeak) {
  // Weights decreasing away from the centre, as for L = 14.
  const std::vector<double> w = {0.004, 0.03, 0.1, 0.14, 0.14, 0.1, 0.03, 0.004};
  const double de = to_angular(20.0);
  const auto t = uniform_times(400, 1);
  const auto s = fourier_amplitude(t, imbalance_from_towers(w, de, 0.0, t));
  const auto p = dominant_peak(s, 1.0);
  EXPECT_NEAR(p.frequency_mhz, 20.0, 0.5);
  EXPECT_GT(p.amplitude, peak_at(s, 40.0, 2.0));
  EXPECT_GT(p.amplitude, peak_at(s, 60.0, 2.0));
}

TEST(TowerApproximation, FullSumIsFidelityOfFreeDimers) {
  // Decoupled dimers: towers are exact, so sum_{j,k} a_j a_k cos((j-k) dE t) = F(t).
  const int L = 8;
  const auto g = build_chain(L, Boundary::Open, -9, 0);
  const BasisSector s(L, L / 2);
  const Word pi = collective_state(g, CollectiveState::Pi);
  std::vector<double> w;
  for (int k = 0; k <= L / 2; ++k) w.push_back(static_cast<double>(binomial(L / 2, k)) / std::pow(2.0, L / 2));
  const double sum_sq = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
  const auto t = uniform_times(200, 1);
  const auto approx = imbalance_from_towers(w, 2 * to_angular(9), sum_sq, t);
  const auto F = global_fidelity(evolve_dense(SparseHamiltonian(g, s), basis_vector(s, pi), t));
  for (std::size_t k = 0; k < t.size(); ++k) EXPECT_NEAR(approx[k], F[k], 1e-10);
}

// Registered as its own ctest entry: the tower sum tracks the fidelity, and its
// first harmonic underestimates the imbalance amplitude.
TEST(TowerApproximationVsDynamics, PeakAmplitudeWithinTwentyPercentAtL12) {
  const auto g = device_chain(12, -9, -6, 1);
  const BasisSector s(12, 6);
  const SparseHamiltonian H(g, s);
  const Word pi = collective_state(g, CollectiveState::Pi);
  const auto eig = diagonalize(H, true);
  const auto towers = detect_towers(overlaps(eig, s, pi), eig.energies);
  ASSERT_TRUE(towers.detected) << towers.message;
  const auto t = uniform_times(400, 1);
  const auto exact = fourier_amplitude(t, imbalance(evolve_dense(eig, s, basis_vector(s, pi), t), s));
  const auto approx = fourier_amplitude(t, imbalance_from_towers(towers.weights, towers.spacing, 0.0, t));
  const auto p = dominant_peak(exact, 1.0);
  const double ga = peak_at(approx, p.frequency_mhz, 2.0);
  RecordProperty("exact_peak", std::to_string(p.amplitude));
  RecordProperty("tower_peak", std::to_string(ga));
  EXPECT_NEAR(ga / p.amplitude, 1.0, 0.2) << "exact " << p.amplitude << " towers " << ga;
}
