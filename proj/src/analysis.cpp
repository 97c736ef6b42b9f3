// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperscar/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>
#include <unordered_set>

#include <fftw3.h>

#include <json.hpp>

#include "hyperscar/errors.hpp"
#include "hyperscar/io.hpp"

namespace hyperscar {

namespace {

// FFTW's planner is not reentrant; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FourierSpectrum fourier_amplitude(std::span<const double> series, double dt_ns, double pad_to_ns,
                                  std::string source) {
  if (!(dt_ns > 0.0)) throw DomainError("fourier_amplitude: dt must be positive");
  const std::size_t n = series.size();
  if (n < 2) throw DomainError("fourier_amplitude: need at least two samples");
  const auto m = static_cast<std::size_t>(std::llround(pad_to_ns / dt_ns));
  if (m < n) throw DomainError("fourier_amplitude: padding shorter than the series");

  const double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  double* in = fftw_alloc_real(m);
  fftw_complex* out = fftw_alloc_complex(m / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), in, out, FFTW_ESTIMATE);
  }
  for (std::size_t k = 0; k < m; ++k) in[k] = k < n ? series[k] - mean : 0.0;
  fftw_execute(plan);

  FourierSpectrum s;
  s.source = std::move(source);
  s.dt_ns = dt_ns;
  s.padded_ns = static_cast<double>(m) * dt_ns;
  s.raw_samples = n;
  s.padded_samples = m;
  const std::size_t bins = m / 2;
  s.frequencies_mhz.reserve(bins);
  s.amplitude.reserve(bins);
  for (std::size_t k = 1; k <= bins; ++k) {
    s.frequencies_mhz.push_back(1e3 * static_cast<double>(k) / s.padded_ns);
    s.amplitude.push_back(2.0 * std::hypot(out[k][0], out[k][1]) / static_cast<double>(n));
  }
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return s;
}

FourierSpectrum fourier_amplitude(std::span<const double> times, std::span<const double> series, double pad_to_ns,
                                  std::string source) {
  if (times.size() != series.size()) throw DomainError("fourier_amplitude: times and series differ in length");
  if (times.size() < 2) throw DomainError("fourier_amplitude: need at least two samples");
  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (std::abs(times[k] - times[k - 1] - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw DomainError("fourier_amplitude: time grid is not uniform");
  }
  return fourier_amplitude(series, dt, pad_to_ns, std::move(source));
}

SpectralPeak dominant_peak(const FourierSpectrum& spectrum, double min_mhz) {
  SpectralPeak best{0.0, -1.0};
  for (std::size_t k = 0; k < spectrum.amplitude.size(); ++k) {
    if (spectrum.frequencies_mhz[k] >= min_mhz && spectrum.amplitude[k] > best.amplitude)
      best = {spectrum.frequencies_mhz[k], spectrum.amplitude[k]};
  }
  if (best.amplitude < 0) throw DomainError("dominant_peak: no bins above the frequency floor");
  return best;
}

double peak_at(const FourierSpectrum& spectrum, double f1_mhz, double halfwidth_mhz) {
  if (spectrum.frequencies_mhz.empty()) throw DomainError("peak_at: empty spectrum");
  const double lo = f1_mhz - halfwidth_mhz;
  const double hi = f1_mhz + halfwidth_mhz;
  if (halfwidth_mhz < 0 || lo < 0 || hi > spectrum.frequencies_mhz.back())
    throw DomainError("peak_at: window outside the frequency grid");
  double g = -1.0;
  for (std::size_t k = 0; k < spectrum.amplitude.size(); ++k) {
    const double f = spectrum.frequencies_mhz[k];
    if (f >= lo && f <= hi) g = std::max(g, spectrum.amplitude[k]);
  }
  if (g < 0) throw DomainError("peak_at: window contains no bins");
  return g;
}

double padded_length_amplitude(const FourierSpectrum& spectrum, double amplitude) {
  if (spectrum.padded_samples == 0) throw DomainError("padded_length_amplitude: empty spectrum");
  return amplitude * static_cast<double>(spectrum.raw_samples) / (2.0 * static_cast<double>(spectrum.padded_samples));
}

std::vector<Word> random_basis_states(const BasisSector& sector, std::size_t count, std::uint64_t seed,
                                      std::span<const Word> exclude) {
  std::unordered_set<Word> taken(exclude.begin(), exclude.end());
  std::size_t excluded_in_sector = 0;
  for (Word w : taken) excluded_in_sector += sector.contains(w) ? 1 : 0;
  if (count + excluded_in_sector > sector.dim())
    throw DomainError("random_basis_states: sector too small for " + std::to_string(count) + " states");
  SeededUniform rng(seed);
  std::vector<Word> out;
  out.reserve(count);
  while (out.size() < count) {
    const Word w = sector.unrank(rng.below(sector.dim()));
    if (taken.insert(w).second) out.push_back(w);
  }
  return out;
}

ScanResult scan_states(const SparseHamiltonian& H, std::span<const ScanEntry> entries, const ScanOptions& options) {
  ScanResult result;
  result.records.resize(entries.size());
  if (entries.empty()) return result;
  const BasisSector& sector = H.sector();
  std::vector<std::optional<FourierSpectrum>> spectra(entries.size());

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < entries.size(); k = next++) {
      ScanRecord& rec = result.records[k];
      rec.label = entries[k].label;
      rec.word = entries[k].word;
      try {
        ObservableRecorder recorder(sector, rec.word, {}, false);
        (void)evolve_krylov(H, basis_vector(sector, rec.word), options.times, options.krylov, false,
                            recorder.observer());
        spectra[k] = fourier_amplitude(options.times, recorder.series().imbalance, options.pad_to_ns, rec.label);
      } catch (const Error& e) {
        rec.error = e.what();
      }
    }
  };
  const unsigned workers = std::max(1U, std::min<unsigned>(options.workers, static_cast<unsigned>(entries.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  if (options.f1_mhz) {
    result.f1_mhz = *options.f1_mhz;
  } else {
    if (!spectra[0]) throw NumericalError("scan_states: reference run failed: " + result.records[0].error);
    result.f1_mhz = dominant_peak(*spectra[0], options.min_frequency_mhz).frequency_mhz;
  }

  std::vector<double> finite;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (spectra[k]) {
      const double g = peak_at(*spectra[k], result.f1_mhz, options.halfwidth_mhz);
      result.records[k].g2 = g * g;
      finite.push_back(g * g);
    } else {
      result.records[k].g2 = std::numeric_limits<double>::quiet_NaN();
    }
  }
  if (!finite.empty()) {
    std::nth_element(finite.begin(), finite.begin() + finite.size() / 2, finite.end());
    result.threshold = options.separation_factor * finite[finite.size() / 2];
  }
  for (auto& rec : result.records) rec.scar_candidate = rec.g2 > result.threshold;
  return result;
}

std::vector<std::size_t> scan_ranks(const ScanResult& result) {
  const auto& r = result.records;
  std::vector<std::size_t> order(r.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const bool na = std::isnan(r[a].g2);
    const bool nb = std::isnan(r[b].g2);
    if (na != nb) return nb;
    return !na && r[a].g2 > r[b].g2;
  });
  std::vector<std::size_t> rank(r.size());
  for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k + 1;
  return rank;
}

void write_scan_csv(const std::string& path, const ScanResult& result) {
  io::CsvWriter out(path);
  out.raw_line("state_bits_hex,label,g2_at_f1,rank,scar_candidate");
  const auto ranks = scan_ranks(result);
  for (std::size_t k = 0; k < result.records.size(); ++k) {
    const auto& r = result.records[k];
    out.raw_line(io::hex_word(r.word) + "," + r.label + "," + io::format_double(r.g2) + "," +
                 std::to_string(ranks[k]) + "," + (r.scar_candidate ? "1" : "0"));
  }
}

std::vector<Word> hypercube_vertices(const CouplingGraph& graph) {
  const auto dimers = graph.dimers();
  const int n = static_cast<int>(dimers.size());
  if (n == 0 || 2 * n != graph.sites())
    throw DomainError("hypercube_vertices: need L/2 dimers covering every site");
  if (n > 30) throw CapacityError("hypercube_vertices: too many dimers");
  std::vector<Word> out;
  out.reserve(std::size_t{1} << n);
  for (Word c = 0; c < (Word{1} << n); ++c) {
    Word w = 0;
    for (int d = 0; d < n; ++d) {
      const int site = ((c >> d) & 1U) ? dimers[d].second : dimers[d].first;
      w |= Word{1} << site;
    }
    out.push_back(w);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

HypercubeReport hypercube_from_hops(std::span<const HopTerm> hops, const CouplingGraph& graph) {
  const auto vertices = hypercube_vertices(graph);
  HypercubeReport r;
  r.n_dimers = static_cast<int>(graph.dimers().size());
  r.vertices = vertices.size();
  const auto is_vertex = [&](Word w) { return std::binary_search(vertices.begin(), vertices.end(), w); };
  for (Word u : vertices) {
    for (const HopTerm& h : hops) {
      const Word m = u & h.mask;
      if (m == 0 || m == h.mask) continue;
      const double a = std::abs(h.omega);
      if (is_vertex(u ^ h.mask)) {
        r.delta += 0.5 * a;
        r.delta_by_kind[h.kind] += 0.5 * a;
      } else {
        r.gamma += a;
        r.gamma_by_kind[h.kind] += a;
      }
    }
  }
  return r;
}

}  // namespace

HypercubeReport hypercube_report(const CouplingGraph& graph) {
  std::vector<HopTerm> hops;
  for (const Edge& e : graph.edges())
    hops.push_back({(Word{1} << e.i) | (Word{1} << e.j), to_angular(e.f_mhz), e.i, e.j, e.kind});
  return hypercube_from_hops(hops, graph);
}

HypercubeReport hypercube_report(const SparseHamiltonian& H, const CouplingGraph& graph) {
  if (H.sites() != graph.sites()) throw DomainError("hypercube_report: graph and Hamiltonian differ in L");
  return hypercube_from_hops(H.hops(), graph);
}

void write_hypercube_json(const std::string& path, const HypercubeReport& report) {
  nlohmann::ordered_json j;
  j["N"] = report.n_dimers;
  j["vertices"] = report.vertices;
  j["delta"] = report.delta;
  j["gamma"] = report.gamma;
  auto by_kind = [](const std::map<EdgeKind, double>& m) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m) o[to_string(k)] = v;
    return o;
  };
  j["delta_by_category"] = by_kind(report.delta_by_kind);
  j["gamma_by_category"] = by_kind(report.gamma_by_kind);
  j["ratio"] = report.ratio();
  j["units"] = "rad/ns";
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open " + path);
  out << j.dump(2) << '\n';
}

Revival first_revival(std::span<const double> times, std::span<const double> series, double t_min) {
  if (times.size() != series.size()) throw DomainError("first_revival: times and series differ in length");
  std::size_t k = 1;
  while (k + 1 < series.size() && times[k] < t_min) ++k;
  bool seen_minimum = false;
  for (; k + 1 < series.size(); ++k) {
    if (!seen_minimum) {
      seen_minimum = series[k] < series[k - 1] && series[k] <= series[k + 1];
    } else if (series[k] > series[k - 1] && series[k] >= series[k + 1]) {
      return {k, times[k], series[k]};
    }
  }
  throw DomainError("first_revival: no local maximum after a minimum");
}

double fidelity_density(double f_t1, int sites) {
  if (sites <= 0) throw DomainError("fidelity_density: L must be positive");
  if (!(f_t1 >= 0.0) || f_t1 > 1.0 + 1e-12) throw DomainError("fidelity_density: F outside [0, 1]");
  if (f_t1 == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(std::min(f_t1, 1.0)) / sites;
}

std::vector<double> imbalance_spectral_oracle(const Eigensystem& eig, const BasisSector& sector, Word alpha,
                                              std::span<const double> times) {
  const Index dim = sector.dim();
  if (dim > kSpectralOracleLimit) throw CapacityError("imbalance_spectral_oracle: dimension above limit");
  if (!eig.vectors) throw StateError("imbalance_spectral_oracle: eigenvectors required");
  const Eigen::MatrixXd& C = *eig.vectors;
  if (static_cast<Index>(C.rows()) != dim) throw DomainError("imbalance_spectral_oracle: eigensystem/sector mismatch");
  const Index a = sector.rank(alpha);
  const int L = sector.sites();

  // w_b = (1/L) sum_i s_{a,i} s_{b,i} = 1 - 2 hamming(a, b) / L.
  Eigen::VectorXd w(static_cast<Eigen::Index>(dim));
  for (Index b = 0; b < dim; ++b)
    w(static_cast<Eigen::Index>(b)) = 1.0 - 2.0 * std::popcount(sector.state(b) ^ alpha) / static_cast<double>(L);
  const Eigen::VectorXd q = C.row(static_cast<Eigen::Index>(a)).transpose();
  Eigen::MatrixXd W = C.transpose() * w.asDiagonal() * C;
  W = q.asDiagonal() * W * q.asDiagonal();

  const auto n = static_cast<Eigen::Index>(dim);
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    Eigen::VectorXd c(n), s(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      c(k) = std::cos(eig.energies[static_cast<std::size_t>(k)] * t);
      s(k) = std::sin(eig.energies[static_cast<std::size_t>(k)] * t);
    }
    // cos(E_m t - E_n t) = c_m c_n + s_m s_n.
    out.push_back(c.dot(W * c) + s.dot(W * s));
  }
  return out;
}

std::vector<double> imbalance_from_towers(std::span<const double> weights, double delta_e, double i0,
                                          std::span<const double> times, TowerSum mode) {
  const std::size_t T = weights.size();
  std::vector<double> out(times.size(), i0);
  if (mode == TowerSum::Leading) {
    double c1 = 0.0;
    for (std::size_t j = 0; j + 1 < T; ++j) c1 += 2.0 * weights[j] * weights[j + 1];
    for (std::size_t k = 0; k < times.size(); ++k) out[k] += c1 * std::cos(delta_e * times[k]);
    return out;
  }
  // Collect harmonics d = j - k > 0; each appears twice.
  std::vector<double> harmonic(T, 0.0);
  for (std::size_t j = 0; j < T; ++j)
    for (std::size_t k = 0; k < j; ++k) harmonic[j - k] += 2.0 * weights[j] * weights[k];
  for (std::size_t k = 0; k < times.size(); ++k)
    for (std::size_t d = 1; d < T; ++d) out[k] += harmonic[d] * std::cos(static_cast<double>(d) * delta_e * times[k]);
  return out;
}

}  // namespace hyperscar
