// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperscar/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "hyperscar/dynamics.hpp"
#include "hyperscar/errors.hpp"
#include "hyperscar/io.hpp"

namespace hyperscar {

namespace {

void check_budget(Index n, bool want_vectors, std::size_t extra_bytes, std::size_t budget) {
  if (n > kDenseDimLimit) {
    throw CapacityError("dense diagonalization of dimension " + std::to_string(n) + " exceeds the limit of " +
                        std::to_string(kDenseDimLimit));
  }
  const double n2 = static_cast<double>(n) * static_cast<double>(n) * sizeof(double);
  const double bytes = n2 * (want_vectors ? 2.0 : 1.0) + static_cast<double>(extra_bytes);
  if (bytes > static_cast<double>(budget)) {
    throw CapacityError("dense diagonalization of dimension " + std::to_string(n) + " needs about " +
                        std::to_string(static_cast<long long>(bytes / (1 << 20))) + " MiB, over the budget of " +
                        std::to_string(budget >> 20) + " MiB");
  }
}

}  // namespace

int Eigensystem::parity(std::size_t n, std::size_t which) const {
  if (block.empty()) return 0;
  const auto& chars = block_characters.at(static_cast<std::size_t>(block.at(n)));
  return which < chars.size() ? chars[which] : 0;
}

Eigensystem diagonalize_matrix(Eigen::MatrixXd matrix, bool want_vectors) {
  const auto n = static_cast<lapack_int>(matrix.rows());
  if (matrix.cols() != matrix.rows()) throw DomainError("diagonalize_matrix needs a square matrix");
  Eigensystem out;
  out.energies.resize(static_cast<std::size_t>(n));
  if (n == 0) {
    if (want_vectors) out.vectors = Eigen::MatrixXd(0, 0);
    return out;
  }
  lapack_int info = 0;
  if (!want_vectors) {
    info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'U', n, matrix.data(), n, out.energies.data());
  } else {
    Eigen::MatrixXd z(n, n);
    std::vector<lapack_int> support(2 * static_cast<std::size_t>(n));
    lapack_int found = 0;
    info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', n, matrix.data(), n, 0.0, 0.0, 0, 0, 0.0, &found,
                          out.energies.data(), z.data(), n, support.data());
    if (info == 0 && found != n) info = -1000;
    out.vectors = std::move(z);
  }
  if (info != 0) throw NumericalError("LAPACK symmetric eigensolver failed, info = " + std::to_string(info));
  return out;
}

Eigensystem diagonalize(const SparseHamiltonian& H, bool want_vectors, std::size_t memory_budget) {
  check_budget(H.dim(), want_vectors, 0, memory_budget);
  return diagonalize_matrix(H.dense(kDenseDimLimit), want_vectors);
}

// ---------------------------------------------------------------------------
// Symmetries
// ---------------------------------------------------------------------------

const char* to_string(Involution s) noexcept {
  switch (s) {
    case Involution::Reflection: return "reflection";
    case Involution::SpinFlip: return "spin_flip";
  }
  return "unknown";
}

Word apply_involution(Involution s, Word w, int sites) noexcept {
  if (s == Involution::SpinFlip) return ~w & ((Word{1} << sites) - 1);
  Word out = 0;
  for (int i = 0; i < sites; ++i) {
    if ((w >> i) & 1U) out |= Word{1} << (sites - 1 - i);
  }
  return out;
}

namespace {

bool commutes(Involution s, const CouplingGraph& graph, const BasisSector& sector) {
  if (s == Involution::Reflection) return is_reflection_symmetric(graph);
  // The XY hopping term is invariant under a global flip; the on-site term only
  // maps onto itself (up to a constant) when it is uniform and the flip keeps N.
  if (2 * sector.photons() != sector.sites()) return false;
  const auto on = graph.onsite();
  return std::all_of(on.begin(), on.end(), [&](double f) { return std::abs(f - on[0]) <= 1e-12; });
}

}  // namespace

std::vector<Involution> available_symmetries(const CouplingGraph& graph, const BasisSector& sector) {
  std::vector<Involution> out;
  for (Involution s : {Involution::Reflection, Involution::SpinFlip}) {
    if (commutes(s, graph, sector)) out.push_back(s);
  }
  return out;
}

SymmetryBasis::SymmetryBasis(const CouplingGraph& graph, const BasisSector& sector, std::vector<Involution> generators)
    : sector_(sector), generators_(std::move(generators)) {
  if (generators_.size() > 3) throw DomainError("at most three commuting involutions are supported");
  for (Involution s : generators_) {
    if (!commutes(s, graph, sector_)) {
      throw SymmetryAbsentError(std::string("the Hamiltonian is not invariant under ") + to_string(s));
    }
  }
  const int L = sector_.sites();
  const std::size_t k = generators_.size();
  const std::size_t group = std::size_t{1} << k;
  const Index n = sector_.dim();

  blocks_.resize(group);
  position_.assign(group, std::vector<std::int64_t>(n, -1));
  amplitude_.assign(group, std::vector<double>(n, 0.0));
  for (std::size_t c = 0; c < group; ++c) {
    for (std::size_t j = 0; j < k; ++j) blocks_[c].characters.push_back(((c >> j) & 1U) ? -1 : 1);
    blocks_[c].offsets.push_back(0);
  }

  std::vector<bool> visited(n, false);
  std::vector<Index> image(group);
  for (Index u = 0; u < n; ++u) {
    if (visited[u]) continue;
    const Word w = sector_.state(u);
    for (std::size_t m = 0; m < group; ++m) {
      Word x = w;
      for (std::size_t j = 0; j < k; ++j) {
        if ((m >> j) & 1U) x = apply_involution(generators_[j], x, L);
      }
      image[m] = sector_.rank(x);
      visited[image[m]] = true;
    }
    std::vector<Index> distinct(image.begin(), image.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    for (std::size_t c = 0; c < group; ++c) {
      std::vector<double> amp(distinct.size(), 0.0);
      for (std::size_t m = 0; m < group; ++m) {
        const double chi = (std::popcount(m & c) % 2) ? -1.0 : 1.0;
        amp[std::lower_bound(distinct.begin(), distinct.end(), image[m]) - distinct.begin()] += chi;
      }
      double norm = 0.0;
      for (double a : amp) norm += a * a;
      if (norm < 1e-12) continue;
      norm = std::sqrt(norm);
      Block& b = blocks_[c];
      const auto vec = static_cast<std::int64_t>(b.dim());
      for (std::size_t q = 0; q < distinct.size(); ++q) {
        if (amp[q] == 0.0) continue;
        b.support.push_back(distinct[q]);
        b.amplitudes.push_back(amp[q] / norm);
        position_[c][distinct[q]] = vec;
        amplitude_[c][distinct[q]] = amp[q] / norm;
      }
      b.offsets.push_back(b.support.size());
    }
  }
}

Eigen::MatrixXd SymmetryBasis::block_matrix(const SparseHamiltonian& H, std::size_t block) const {
  if (!(H.sector() == sector_)) throw DomainError("Hamiltonian and symmetry basis use different sectors");
  const Block& b = blocks_.at(block);
  const auto m = static_cast<Eigen::Index>(b.dim());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  const auto& pos = position_[block];
  const auto& amp = amplitude_[block];
  for (Eigen::Index col = 0; col < m; ++col) {
    for (std::size_t e = b.offsets[col]; e < b.offsets[col + 1]; ++e) {
      const Index idx = b.support[e];
      const double a_col = b.amplitudes[e];
      const Word w = sector_.state(idx);
      out(pos[idx], col) += amp[idx] * H.diagonal(w) * a_col;
      H.for_each_neighbor(w, [&](Word v, double omega, const HopTerm&) {
        const Index r = H.ranker()(v);
        if (pos[r] >= 0) out(pos[r], col) += amp[r] * omega * a_col;
      });
    }
  }
  return out;
}

Eigen::MatrixXd SymmetryBasis::lift(std::size_t block, const Eigen::MatrixXd& coefficients) const {
  const Block& b = blocks_.at(block);
  if (coefficients.rows() != static_cast<Eigen::Index>(b.dim())) throw DomainError("coefficient rows do not match block");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sector_.dim()), coefficients.cols());
  for (Index a = 0; a < b.dim(); ++a) {
    for (std::size_t e = b.offsets[a]; e < b.offsets[a + 1]; ++e) {
      out.row(static_cast<Eigen::Index>(b.support[e])) = b.amplitudes[e] * coefficients.row(static_cast<Eigen::Index>(a));
    }
  }
  return out;
}

SymmetryBasis parity_sectors(const CouplingGraph& graph, const BasisSector& sector) {
  return SymmetryBasis(graph, sector, {Involution::Reflection});
}

Eigensystem diagonalize_resolved(const SparseHamiltonian& H, const SymmetryBasis& basis, bool want_vectors,
                                 std::size_t memory_budget) {
  const Index n = H.dim();
  Index largest = 0;
  for (const auto& b : basis.blocks()) largest = std::max(largest, b.dim());
  const std::size_t lifted = want_vectors ? static_cast<std::size_t>(n) * n * sizeof(double) : 0;
  check_budget(largest, want_vectors, lifted, memory_budget);

  Eigensystem out;
  for (Involution s : basis.generators()) out.symmetry_names.emplace_back(to_string(s));
  Eigen::MatrixXd vectors;
  if (want_vectors) vectors.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::Index column = 0;
  for (std::size_t bi = 0; bi < basis.blocks().size(); ++bi) {
    out.block_characters.push_back(basis.blocks()[bi].characters);
    if (basis.blocks()[bi].dim() == 0) continue;
    Eigensystem part = diagonalize_matrix(basis.block_matrix(H, bi), want_vectors);
    out.energies.insert(out.energies.end(), part.energies.begin(), part.energies.end());
    out.block.insert(out.block.end(), part.energies.size(), static_cast<int>(bi));
    if (want_vectors) {
      const auto cols = static_cast<Eigen::Index>(part.energies.size());
      vectors.middleCols(column, cols) = basis.lift(bi, *part.vectors);
      column += cols;
    }
  }

  std::vector<std::size_t> order(out.energies.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return out.energies[a] < out.energies[b]; });
  std::vector<double> energies(order.size());
  std::vector<int> block(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) {
    energies[j] = out.energies[order[j]];
    block[j] = out.block[order[j]];
  }
  out.energies = std::move(energies);
  out.block = std::move(block);

  if (want_vectors) {
    // In-place column permutation by cycles: new column j = old column order[j].
    std::vector<bool> done(order.size(), false);
    Eigen::VectorXd tmp;
    for (std::size_t start = 0; start < order.size(); ++start) {
      if (done[start] || order[start] == start) {
        done[start] = true;
        continue;
      }
      tmp = vectors.col(static_cast<Eigen::Index>(start));
      std::size_t j = start;
      while (true) {
        done[j] = true;
        const std::size_t src = order[j];
        if (src == start) {
          vectors.col(static_cast<Eigen::Index>(j)) = tmp;
          break;
        }
        vectors.col(static_cast<Eigen::Index>(j)) = vectors.col(static_cast<Eigen::Index>(src));
        j = src;
      }
    }
    out.vectors = std::move(vectors);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

GapRatio mean_gap_ratio(std::span<const double> energies, double discard_fraction, double degenerate_tol) {
  if (discard_fraction < 0.0 || discard_fraction >= 0.5) throw DomainError("discard fraction must lie in [0, 0.5)");
  std::vector<double> e(energies.begin(), energies.end());
  std::sort(e.begin(), e.end());
  const auto cut = static_cast<std::size_t>(std::floor(discard_fraction * static_cast<double>(e.size())));
  const std::size_t lo = cut, hi = e.size() - cut;
  if (hi < lo + 100) {
    throw DomainError("gap ratio needs at least 100 bulk levels, got " + std::to_string(hi > lo ? hi - lo : 0));
  }
  GapRatio out;
  double sum = 0.0;
  for (std::size_t k = lo; k + 2 < hi; ++k) {
    const double s1 = e[k + 1] - e[k];
    const double s2 = e[k + 2] - e[k + 1];
    if (s1 < degenerate_tol || s2 < degenerate_tol) {
      ++out.excluded_degenerate;
      continue;
    }
    sum += std::min(s1, s2) / std::max(s1, s2);
    ++out.ratios;
  }
  out.mean = out.ratios ? sum / static_cast<double>(out.ratios) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

GapRatio mean_gap_ratio(const Eigensystem& eig, double discard_fraction, double degenerate_tol) {
  if (eig.block.empty()) return mean_gap_ratio(eig.energies, discard_fraction, degenerate_tol);
  GapRatio out;
  double sum = 0.0;
  bool any = false;
  for (std::size_t b = 0; b < eig.block_characters.size(); ++b) {
    std::vector<double> part;
    for (std::size_t n = 0; n < eig.size(); ++n) {
      if (eig.block[n] == static_cast<int>(b)) part.push_back(eig.energies[n]);
    }
    GapRatio r;
    try {
      r = mean_gap_ratio(part, discard_fraction, degenerate_tol);
    } catch (const DomainError&) {
      continue;  // block too small for statistics
    }
    any = true;
    sum += r.mean * static_cast<double>(r.ratios);
    out.ratios += r.ratios;
    out.excluded_degenerate += r.excluded_degenerate;
  }
  if (!any) throw DomainError("no symmetry block has 100 bulk levels");
  out.mean = out.ratios ? sum / static_cast<double>(out.ratios) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

std::vector<double> eigenstate_entropies(const Eigensystem& eig, const SubsystemMap& map) {
  if (!eig.vectors) throw StateError("eigenstate entropies need eigenvectors");
  const Eigen::MatrixXd& v = *eig.vectors;
  std::vector<double> out(static_cast<std::size_t>(v.cols()));
  for (Eigen::Index n = 0; n < v.cols(); ++n) {
    out[static_cast<std::size_t>(n)] =
        entanglement_entropy(map, std::span<const double>(v.col(n).data(), static_cast<std::size_t>(v.rows())));
  }
  return out;
}

std::vector<double> overlaps(const Eigensystem& eig, const BasisSector& sector, Word alpha) {
  if (!eig.vectors) throw StateError("overlaps need eigenvectors");
  const auto row = static_cast<Eigen::Index>(sector.rank(alpha));
  std::vector<double> out(eig.size());
  for (std::size_t n = 0; n < out.size(); ++n) {
    const double c = (*eig.vectors)(row, static_cast<Eigen::Index>(n));
    out[n] = c * c;
  }
  return out;
}

std::vector<std::size_t> near_degeneracies(std::span<const double> energies, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n + 1 < energies.size(); ++n) {
    if (std::abs(energies[n + 1] - energies[n]) < tol) out.push_back(n);
  }
  return out;
}

namespace {

using Groups = std::vector<std::vector<std::size_t>>;

// Single-linkage clusters of energy-sorted candidates.
Groups cluster_by_gap(const std::vector<std::size_t>& cand, std::span<const double> energies, double merge) {
  Groups groups;
  for (std::size_t q = 0; q < cand.size(); ++q) {
    if (q == 0 || energies[cand[q]] - energies[cand[q - 1]] > merge) groups.emplace_back();
    groups.back().push_back(cand[q]);
  }
  return groups;
}

std::pair<double, double> centre_and_weight(const std::vector<std::size_t>& g, std::span<const double> overlaps,
                                            std::span<const double> energies) {
  double w = 0.0, e = 0.0;
  for (std::size_t n : g) {
    w += overlaps[n];
    e += overlaps[n] * energies[n];
  }
  return {e / w, w};
}

std::vector<std::size_t> candidates_above(std::span<const double> overlaps, std::span<const double> energies,
                                          double threshold) {
  std::vector<std::size_t> cand;
  for (std::size_t n = 0; n < overlaps.size(); ++n) {
    if (overlaps[n] > threshold) cand.push_back(n);
  }
  std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) { return energies[a] < energies[b]; });
  return cand;
}

}  // namespace

TowerReport detect_towers(std::span<const double> overlaps, std::span<const double> energies, const TowerPolicy& policy) {
  if (overlaps.size() != energies.size()) throw DomainError("overlaps and energies differ in length");
  TowerReport r;
  if (overlaps.empty()) {
    r.message = "empty spectrum";
    return r;
  }
  const double mean = std::accumulate(overlaps.begin(), overlaps.end(), 0.0) / static_cast<double>(overlaps.size());
  r.threshold = policy.threshold_factor * mean;

  // Spacing estimate from the strong states alone.
  const auto seeds = candidates_above(overlaps, energies, std::max(policy.seed_factor, policy.threshold_factor) * mean);
  if (seeds.size() < 2) {
    r.message = "only " + std::to_string(seeds.size()) + " eigenstates above the seed threshold";
    return r;
  }
  double largest_gap = 0.0;
  for (std::size_t q = 0; q + 1 < seeds.size(); ++q) {
    largest_gap = std::max(largest_gap, energies[seeds[q + 1]] - energies[seeds[q]]);
  }
  double merge = policy.merge_fraction * largest_gap;
  Groups seed_groups;
  for (int it = 0; it < std::max(1, policy.max_iterations); ++it) {
    auto next = cluster_by_gap(seeds, energies, merge);
    const bool stable = (next == seed_groups);
    seed_groups = std::move(next);
    if (stable || seed_groups.size() < 2) break;
    const double first = centre_and_weight(seed_groups.front(), overlaps, energies).first;
    const double last = centre_and_weight(seed_groups.back(), overlaps, energies).first;
    merge = policy.merge_fraction * (last - first) / static_cast<double>(seed_groups.size() - 1);
  }
  if (seed_groups.size() < 2) {
    r.message = "strong eigenstates form a single cluster";
    return r;
  }
  r.merge_distance = merge;
  // Seed clusters far lighter than the heaviest are stray states between towers; they would halve the spacing.
  std::vector<std::pair<double, double>> strong;  // (centre, weight)
  for (const auto& g : seed_groups) strong.push_back(centre_and_weight(g, overlaps, energies));
  const double heaviest = std::max_element(strong.begin(), strong.end(), [](auto a, auto b) { return a.second < b.second; })->second;
  std::erase_if(strong, [&](auto c) { return c.second < policy.seed_weight_fraction * heaviest; });
  if (strong.size() < 2) {
    r.message = "a single significant cluster among the strong eigenstates";
    return r;
  }
  double spacing = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < strong.size(); ++k) spacing = std::min(spacing, strong[k + 1].first - strong[k].first);
  double anchor = std::max_element(strong.begin(), strong.end(), [](auto a, auto b) { return a.second < b.second; })->first;

  // Candidates binned onto the ladder anchor + k * spacing, walked outward from the heaviest cluster.
  const auto cand = candidates_above(overlaps, energies, r.threshold);
  struct Rung {
    int k = 0;
    std::vector<std::size_t> members;
    double centre = 0.0, weight = 0.0;
  };
  auto collect = [&](int k) {
    Rung rung{k, {}, 0.0, 0.0};
    const double predicted = anchor + k * spacing;
    for (std::size_t n : cand)
      if (std::abs(energies[n] - predicted) <= policy.lattice_tolerance * spacing) rung.members.push_back(n);
    if (!rung.members.empty()) std::tie(rung.centre, rung.weight) = centre_and_weight(rung.members, overlaps, energies);
    return rung;
  };
  std::vector<Rung> ladder{collect(0)};
  anchor = ladder[0].centre;
  auto refit = [&] {
    // Least-squares spacing through the anchor.
    double num = 0.0, den = 0.0;
    for (const Rung& rung : ladder) {
      num += rung.k * (rung.centre - anchor);
      den += static_cast<double>(rung.k) * rung.k;
    }
    if (den > 0) spacing = num / den;
  };
  for (int dir : {+1, -1}) {
    double previous = ladder[0].weight;
    for (int k = dir;; k += dir) {
      Rung rung = collect(k);
      if (rung.members.empty() || rung.weight < policy.rung_weight_fraction * previous) break;
      previous = rung.weight;
      ladder.push_back(std::move(rung));
      refit();
    }
  }
  std::sort(ladder.begin(), ladder.end(), [](const Rung& a, const Rung& b) { return a.k < b.k; });

  for (Rung& rung : ladder) {
    std::sort(rung.members.begin(), rung.members.end());
    r.members.push_back(std::move(rung.members));
    r.energies.push_back(rung.centre);
    r.weights.push_back(rung.weight);
  }
  if (r.count() < policy.min_towers) {
    r.message = "only " + std::to_string(r.count()) + " towers found";
    return r;
  }
  r.spacing = (r.energies.back() - r.energies.front()) / static_cast<double>(r.count() - 1);
  for (std::size_t k = 0; k + 1 < r.count(); ++k) {
    const double s = r.energies[k + 1] - r.energies[k];
    r.max_relative_deviation = std::max(r.max_relative_deviation, std::abs(s - r.spacing) / r.spacing);
  }
  r.detected = true;
  r.message = "ok";
  return r;
}

Histogram density_of_states(std::span<const double> energies, int bins) {
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  if (energies.empty()) throw DomainError("empty spectrum");
  const auto [mn, mx] = std::minmax_element(energies.begin(), energies.end());
  double lo = *mn, hi = *mx;
  if (hi <= lo) hi = lo + 1.0;
  Histogram h;
  const double width = (hi - lo) / bins;
  for (int b = 0; b <= bins; ++b) h.edges.push_back(lo + b * width);
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double e : energies) {
    auto b = static_cast<int>((e - lo) / width);
    b = std::clamp(b, 0, bins - 1);
    ++h.counts[static_cast<std::size_t>(b)];
  }
  for (std::size_t c : h.counts) h.density.push_back(static_cast<double>(c) / (energies.size() * width));
  return h;
}

void write_spectrum_csv(const std::string& path, const Eigensystem& eig, std::span<const double> entropies,
                        std::span<const double> overlap_pi) {
  io::CsvWriter out(path);
  std::vector<std::string> header = {"n", "E_over_2pi_MHz", "parity", "S_half", "overlap_Pi"};
  for (std::size_t s = 1; s < eig.symmetry_names.size(); ++s) header.push_back("parity_" + eig.symmetry_names[s]);
  out.header(header);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> row(header.size());
  for (std::size_t n = 0; n < eig.size(); ++n) {
    row[0] = static_cast<double>(n);
    row[1] = to_mhz(eig.energies[n]);
    row[2] = eig.parity(n, 0);
    row[3] = n < entropies.size() ? entropies[n] : nan;
    row[4] = n < overlap_pi.size() ? overlap_pi[n] : nan;
    for (std::size_t s = 1; s < eig.symmetry_names.size(); ++s) row[4 + s] = eig.parity(n, s);
    out.row(row);
  }
}

void write_towers_csv(const std::string& path, const TowerReport& report) {
  io::CsvWriter out(path);
  out.raw_line("tower,E_over_2pi_MHz,weight,size,members");
  for (std::size_t k = 0; k < report.count(); ++k) {
    std::string members;
    for (std::size_t n : report.members[k]) members += (members.empty() ? "" : ";") + std::to_string(n);
    out.raw_line(std::to_string(k) + "," + io::format_double(to_mhz(report.energies[k])) + "," +
                 io::format_double(report.weights[k]) + "," + std::to_string(report.members[k].size()) + "," + members);
  }
}

void write_dos_csv(const std::string& path, const Histogram& h) {
  io::CsvWriter out(path);
  const std::string header[] = {"E_lo_over_2pi_MHz", "E_hi_over_2pi_MHz", "count", "density_per_MHz"};
  out.header(header);
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    const double row[] = {to_mhz(h.edges[b]), to_mhz(h.edges[b + 1]), static_cast<double>(h.counts[b]),
                          h.density[b] * kRadPerNsPerMHz};
    out.row(row);
  }
}

}  // namespace hyperscar
