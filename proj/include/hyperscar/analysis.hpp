// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file analysis.hpp
 * @brief Scar diagnostics: Fourier amplitudes of time series, product-state
 * scans, hypercube couplings, fidelity density and spectral decompositions of
 * the imbalance.
 */

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperscar/dynamics.hpp"
#include "hyperscar/hamiltonian.hpp"
#include "hyperscar/hilbert.hpp"
#include "hyperscar/model.hpp"
#include "hyperscar/spectral.hpp"

namespace hyperscar {

/// Single-sided amplitude spectrum of a mean-subtracted, zero-padded series.
struct FourierSpectrum {
  std::vector<double> frequencies_mhz;  ///< k / (padded duration), k = 1 .. M/2
  std::vector<double> amplitude;        ///< 2 |X_k| / (raw samples)
  std::string source;
  double dt_ns = 0.0;
  double padded_ns = 0.0;
  std::size_t raw_samples = 0;
  std::size_t padded_samples = 0;

  [[nodiscard]] double resolution_mhz() const noexcept { return 1e3 / padded_ns; }
};

inline constexpr double kDefaultPadNs = 4000.0;

/**
 * FFT of `series` sampled every dt ns, zero-padded to pad_to_ns (rounded to
 * whole samples). The DC bin is dropped. Throws DomainError when dt <= 0, the
 * series has fewer than 2 samples or the padding is shorter than the series.
 */
[[nodiscard]] FourierSpectrum fourier_amplitude(std::span<const double> series, double dt_ns,
                                                double pad_to_ns = kDefaultPadNs, std::string source = {});

/// Same, checking that `times` is a uniform grid (relative tolerance 1e-9).
[[nodiscard]] FourierSpectrum fourier_amplitude(std::span<const double> times, std::span<const double> series,
                                                double pad_to_ns = kDefaultPadNs, std::string source = {});

struct SpectralPeak {
  double frequency_mhz = 0.0;
  double amplitude = 0.0;
};

/// Largest amplitude at frequencies >= min_mhz.
[[nodiscard]] SpectralPeak dominant_peak(const FourierSpectrum& spectrum, double min_mhz = 0.0);

/// Max amplitude in [f1 - halfwidth, f1 + halfwidth]. Throws DomainError when the window leaves the grid.
[[nodiscard]] double peak_at(const FourierSpectrum& spectrum, double f1_mhz, double halfwidth_mhz = 2.0);

/**
 * Re-expresses an amplitude of `spectrum` as |X_k| / M, M the padded sample
 * count: the normalization of a plain FFT of the padded series divided by its
 * length. Used to compare against amplitudes quoted in that convention.
 */
[[nodiscard]] double padded_length_amplitude(const FourierSpectrum& spectrum, double amplitude);

/// `count` distinct basis words of the sector drawn with SeededUniform, skipping `exclude`.
[[nodiscard]] std::vector<Word> random_basis_states(const BasisSector& sector, std::size_t count, std::uint64_t seed,
                                                    std::span<const Word> exclude = {});

struct ScanEntry {
  std::string label;  ///< "Pi", "PiPrime", ..., or "random"
  Word word = 0;
};

struct ScanRecord {
  std::string label;
  Word word = 0;
  double g2 = 0.0;  ///< squared Fourier amplitude of I(t) at f1; NaN when the run failed
  bool scar_candidate = false;
  std::string error;
};

struct ScanOptions {
  std::vector<double> times = uniform_times(400.0, 1.0);
  double pad_to_ns = kDefaultPadNs;
  std::optional<double> f1_mhz;  ///< defaults to the global peak of the first entry
  double halfwidth_mhz = 2.0;
  double min_frequency_mhz = 1.0;  ///< lower bound of the global-peak search
  double separation_factor = 10.0;  ///< candidate: g2 > factor * median g2
  unsigned workers = 1;
  KrylovOptions krylov;
};

struct ScanResult {
  std::vector<ScanRecord> records;  ///< in entry order
  double f1_mhz = 0.0;
  double threshold = 0.0;
};

/**
 * Evolves every entry with the Krylov propagator and scores g^2(f1) of its
 * imbalance. Entries run on `workers` threads; results do not depend on the
 * worker count. A failing entry is reported in its record and the scan goes on.
 */
[[nodiscard]] ScanResult scan_states(const SparseHamiltonian& H, std::span<const ScanEntry> entries,
                                     const ScanOptions& options = {});

/// Rank of each record by decreasing g2 (1 = largest), NaN last.
[[nodiscard]] std::vector<std::size_t> scan_ranks(const ScanResult& result);

void write_scan_csv(const std::string& path, const ScanResult& result);

/// The 2^N basis words with exactly one photon per dimer, ascending. Throws DomainError unless N = L/2.
[[nodiscard]] std::vector<Word> hypercube_vertices(const CouplingGraph& graph);

struct HypercubeReport {
  int n_dimers = 0;
  std::size_t vertices = 0;
  double delta = 0.0;  ///< sum of |H_uv| over unordered vertex pairs, rad/ns
  double gamma = 0.0;  ///< sum of |H_uv| over (vertex, exterior) pairs, rad/ns
  std::map<EdgeKind, double> delta_by_kind;
  std::map<EdgeKind, double> gamma_by_kind;
  [[nodiscard]] double ratio() const noexcept { return delta / gamma; }
};

/// Couplings of the dimer hypercube, read off the graph's hopping terms. Feasible well beyond L = 30 sectors.
[[nodiscard]] HypercubeReport hypercube_report(const CouplingGraph& graph);
[[nodiscard]] HypercubeReport hypercube_report(const SparseHamiltonian& H, const CouplingGraph& graph);

void write_hypercube_json(const std::string& path, const HypercubeReport& report);

struct Revival {
  std::size_t index = 0;
  double t = 0.0;
  double value = 0.0;
};

/**
 * First local maximum of `series` after its first local minimum at t >= t_min,
 * using nearest-neighbour comparisons. Throws DomainError when there is none.
 */
[[nodiscard]] Revival first_revival(std::span<const double> times, std::span<const double> series,
                                    double t_min = 0.0);

/// (1/L) ln F. F = 0 gives -infinity; F outside [0, 1 + 1e-12] throws DomainError.
[[nodiscard]] double fidelity_density(double f_t1, int sites);

inline constexpr Index kSpectralOracleLimit = 2000;

/**
 * I(t) for basis state `alpha` from the eigendecomposition alone:
 * I(t) = sum_{n,m} c_an c_am W_nm cos((E_m - E_n) t) with
 * W = C^T diag(w) C and w_b = (1/L) sum_i s_{a,i} s_{b,i}.
 * Needs eigenvectors; throws CapacityError above kSpectralOracleLimit.
 */
[[nodiscard]] std::vector<double> imbalance_spectral_oracle(const Eigensystem& eig, const BasisSector& sector,
                                                            Word alpha, std::span<const double> times);

enum class TowerSum { Full, Leading };

/**
 * Tower approximation of the imbalance. `weights` holds a^2 for every tower in
 * energy order; tower j sits at (j - (T-1)/2) * delta_e. Full keeps
 * I0 + sum_{j != k} a^2_j a^2_k cos((j - k) delta_e t); Leading keeps only the
 * first harmonic, 2 sum_j a^2_j a^2_{j+1} cos(delta_e t), which for four towers
 * is (4 a^2_2 a^2_1 + 2 a^4_1) cos(delta_e t).
 */
[[nodiscard]] std::vector<double> imbalance_from_towers(std::span<const double> weights, double delta_e, double i0,
                                                        std::span<const double> times,
                                                        TowerSum mode = TowerSum::Full);

}  // namespace hyperscar
