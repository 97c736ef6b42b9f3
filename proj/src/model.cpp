// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperscar/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "hyperscar/errors.hpp"
#include "hyperscar/io.hpp"

namespace hyperscar {

const char* to_string(EdgeKind kind) noexcept {
  switch (kind) {
    case EdgeKind::Intra: return "intra";
    case EdgeKind::Inter: return "inter";
    case EdgeKind::Cross: return "cross";
    case EdgeKind::NextNearest: return "next_nearest";
    case EdgeKind::Explicit: return "explicit";
  }
  return "unknown";
}

const char* to_string(CollectiveState s) noexcept {
  switch (s) {
    case CollectiveState::Pi: return "pi";
    case CollectiveState::PiPrime: return "pi_prime";
    case CollectiveState::Theta: return "theta";
    case CollectiveState::ThetaPrime: return "theta_prime";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// CouplingGraph
// ---------------------------------------------------------------------------

CouplingGraph::CouplingGraph(int sites, Geometry geometry, Boundary boundary)
    : sites_(sites), geometry_(geometry), boundary_(boundary), onsite_(static_cast<std::size_t>(sites), 0.0) {
  if (sites < 1 || sites > kMaxSites) {
    throw DomainError("coupling graph needs 1..." + std::to_string(kMaxSites) + " sites, got " + std::to_string(sites));
  }
}

bool CouplingGraph::has_edge(int i, int j) const noexcept { return find_edge(i, j).has_value(); }

std::optional<Edge> CouplingGraph::find_edge(int i, int j) const noexcept {
  for (const Edge& e : edges_) {
    if ((e.i == i && e.j == j) || (e.i == j && e.j == i)) return e;
  }
  return std::nullopt;
}

void CouplingGraph::add_edge(Edge edge) {
  if (edge.i < 0 || edge.j < 0 || edge.i >= sites_ || edge.j >= sites_) {
    throw DomainError("edge (" + std::to_string(edge.i) + "," + std::to_string(edge.j) + ") out of range");
  }
  if (edge.i == edge.j) throw DomainError("self-edge on site " + std::to_string(edge.i));
  if (has_edge(edge.i, edge.j)) {
    throw DomainError("duplicate edge (" + std::to_string(edge.i) + "," + std::to_string(edge.j) + ")");
  }
  edges_.push_back(edge);
}

void CouplingGraph::set_onsite(std::vector<double> values) {
  if (static_cast<int>(values.size()) != sites_) {
    throw DomainError("on-site list has " + std::to_string(values.size()) + " entries for " + std::to_string(sites_) +
                      " sites");
  }
  onsite_ = std::move(values);
}

void CouplingGraph::set_dimers(std::vector<Dimer> dimers) {
  std::vector<int> seen(static_cast<std::size_t>(sites_), 0);
  for (const auto& [a, b] : dimers) {
    if (a < 0 || b < 0 || a >= sites_ || b >= sites_ || a == b) throw DomainError("invalid dimer");
    ++seen[a];
    ++seen[b];
  }
  if (!std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; })) {
    throw DomainError("dimers must cover every site exactly once");
  }
  dimers_ = std::move(dimers);
}

void CouplingGraph::set_embedding(Embedding embedding) {
  if (static_cast<int>(embedding.size()) != sites_) throw DomainError("embedding size does not match site count");
  for (std::size_t a = 0; a < embedding.size(); ++a) {
    for (std::size_t b = a + 1; b < embedding.size(); ++b) {
      if (embedding[a] == embedding[b]) throw DomainError("two sites share a grid cell");
    }
  }
  embedding_ = std::move(embedding);
}

// ---------------------------------------------------------------------------
// Geometries
// ---------------------------------------------------------------------------

CouplingGraph build_chain(int sites, Boundary boundary, double f_intra, double f_inter) {
  if (sites < 2 || sites % 2 != 0) throw DomainError("dimerized chain needs an even L >= 2, got " + std::to_string(sites));
  if (boundary == Boundary::Periodic && sites < 4) throw DomainError("periodic chain needs L >= 4");
  CouplingGraph g(sites, Geometry::Chain, boundary);
  for (int i = 0; i + 1 < sites; ++i) {
    const bool intra = (i % 2 == 0);
    g.add_edge({i, i + 1, intra ? f_intra : f_inter, intra ? EdgeKind::Intra : EdgeKind::Inter});
  }
  if (boundary == Boundary::Periodic) g.add_edge({sites - 1, 0, f_inter, EdgeKind::Inter});
  std::vector<Dimer> dimers;
  for (int k = 0; k < sites / 2; ++k) dimers.emplace_back(2 * k, 2 * k + 1);
  g.set_dimers(std::move(dimers));
  return g;
}

CouplingGraph build_comb(int n_dimers, double f_intra, double f_inter) {
  if (n_dimers < 2) throw DomainError("comb needs at least 2 dimers, got " + std::to_string(n_dimers));
  CouplingGraph g(2 * n_dimers, Geometry::Comb);
  std::vector<Dimer> dimers;
  for (int k = 0; k < n_dimers; ++k) {
    g.add_edge({2 * k, 2 * k + 1, f_intra, EdgeKind::Intra});
    dimers.emplace_back(2 * k, 2 * k + 1);
  }
  for (int k = 0; k + 1 < n_dimers; ++k) g.add_edge({2 * k, 2 * k + 2, f_inter, EdgeKind::Inter});
  g.set_dimers(std::move(dimers));
  return g;
}

Embedding snake_grid_embedding(int sites, int rows, int cols) {
  if (rows < 1 || cols < 1) throw DomainError("grid needs positive dimensions");
  if (sites > rows * cols) {
    throw CapacityError(std::to_string(sites) + " sites do not fit on a " + std::to_string(rows) + "x" +
                        std::to_string(cols) + " grid");
  }
  Embedding out;
  out.reserve(static_cast<std::size_t>(sites));
  for (int k = 0; k < sites; ++k) {
    const int r = k / cols;
    const int c = k % cols;
    out.push_back({r, (r % 2 == 0) ? c : cols - 1 - c});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Seeded draws
// ---------------------------------------------------------------------------

SeededUniform::SeededUniform(std::uint64_t seed) : engine_(seed) {}

double SeededUniform::next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SeededUniform::next(double lo, double hi) { return lo + (hi - lo) * next(); }

std::uint64_t SeededUniform::below(std::uint64_t n) {
  if (n == 0) throw DomainError("empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

// ---------------------------------------------------------------------------
// Perturbations
// ---------------------------------------------------------------------------

CouplingGraph add_cross_couplings(const CouplingGraph& graph, double f_lo, double f_hi, std::uint64_t seed) {
  if (!graph.embedding()) throw StateError("cross couplings need a grid embedding");
  if (f_lo > f_hi) throw DomainError("cross-coupling range is empty");
  const Embedding& pos = *graph.embedding();
  CouplingGraph out = graph;
  SeededUniform rng(seed);
  for (int hi = 0; hi < graph.sites(); ++hi) {
    for (int lo = 0; lo < hi; ++lo) {
      if (std::abs(pos[hi].row - pos[lo].row) != 1 || std::abs(pos[hi].col - pos[lo].col) != 1) continue;
      const double f = rng.next(f_lo, f_hi);
      if (!out.has_edge(lo, hi)) out.add_edge({lo, hi, f, EdgeKind::Cross});
    }
  }
  return out;
}

CouplingGraph add_nnn_couplings(const CouplingGraph& graph, double f_nn) {
  if (graph.geometry() != Geometry::Chain) throw DomainError("next-next-nearest couplings need a chain graph");
  const int L = graph.sites();
  CouplingGraph out = graph;
  const bool periodic = graph.boundary() == Boundary::Periodic;
  const int last = periodic ? L : L - 3;
  for (int i = 0; i < last; ++i) {
    const int j = (i + 3) % L;
    if (const auto e = out.find_edge(i, j)) {
      if (e->kind == EdgeKind::NextNearest) continue;
      throw DomainError("next-next-nearest bond (" + std::to_string(i) + "," + std::to_string(j) +
                        ") collides with an existing edge");
    }
    out.add_edge({i, j, f_nn, EdgeKind::NextNearest});
  }
  return out;
}

CouplingGraph add_explicit_edges(const CouplingGraph& graph, std::span<const Edge> edges) {
  CouplingGraph out = graph;
  for (const Edge& e : edges) out.add_edge(e);
  return out;
}

CouplingGraph set_onsite(const CouplingGraph& graph, const OnsitePattern& pattern) {
  const int L = graph.sites();
  std::vector<double> values(static_cast<std::size_t>(L), 0.0);
  if (const auto* u = std::get_if<onsite::Uniform>(&pattern)) {
    std::fill(values.begin(), values.end(), u->f_mhz);
  } else if (const auto* imp = std::get_if<onsite::EndImpurity>(&pattern)) {
    values[L - 1] = imp->f_mhz;
    if (L >= 2) values[L - 2] = imp->f_mhz;
  } else if (const auto* stair = std::get_if<onsite::Staircase>(&pattern)) {
    const auto dimers = graph.dimers();
    if (!dimers.empty()) {
      for (std::size_t k = 0; k < dimers.size(); ++k) {
        values[dimers[k].first] = values[dimers[k].second] = static_cast<double>(k + 1) * stair->step_mhz;
      }
    } else {
      for (int s = 0; s < L; ++s) values[s] = static_cast<double>(s / 2 + 1) * stair->step_mhz;
    }
  } else {
    values = std::get<onsite::Explicit>(pattern).values_mhz;
  }
  CouplingGraph out = graph;
  out.set_onsite(std::move(values));
  return out;
}

// ---------------------------------------------------------------------------
// Circuit reduction
// ---------------------------------------------------------------------------

CouplingGraph effective_from_circuit(const CircuitParams& params) {
  const int L = static_cast<int>(params.qubit_ghz.size());
  CouplingGraph g(L);
  std::vector<double> omega(params.qubit_ghz.size());
  std::transform(params.qubit_ghz.begin(), params.qubit_ghz.end(), omega.begin(), [](double ghz) { return 1e3 * ghz; });

  std::map<std::pair<int, int>, double> couplings;
  for (const auto& c : params.couplers) {
    if (c.qubit_a < 0 || c.qubit_b < 0 || c.qubit_a >= L || c.qubit_b >= L || c.qubit_a == c.qubit_b) {
      throw DomainError("coupler '" + c.label + "' must bridge two distinct qubits");
    }
    const double coupler_mhz = 1e3 * c.omega_ghz;
    const double delta_a = 1e3 * params.qubit_ghz[c.qubit_a] - coupler_mhz;
    const double delta_b = 1e3 * params.qubit_ghz[c.qubit_b] - coupler_mhz;
    if (!(std::abs(delta_a) > std::abs(c.g_a_mhz)) || !(std::abs(delta_b) > std::abs(c.g_b_mhz))) {
      throw DispersiveRegimeError("coupler '" + c.label + "' is not dispersive: |omega_i - omega_c| <= |g_ic|");
    }
    const auto key = std::minmax(c.qubit_a, c.qubit_b);
    couplings[{key.first, key.second}] += c.g_ab_mhz + c.g_a_mhz * c.g_b_mhz * (1.0 / delta_a + 1.0 / delta_b);
    omega[c.qubit_a] += c.g_a_mhz * c.g_a_mhz / delta_a;
    omega[c.qubit_b] += c.g_b_mhz * c.g_b_mhz / delta_b;
  }
  for (const auto& [pair, f] : couplings) g.add_edge({pair.first, pair.second, f, EdgeKind::Explicit});
  g.set_onsite(std::move(omega));
  return g;
}

CircuitParams load_circuit_csv(const std::string& device_csv, const std::string& coupler_csv, double interaction_ghz) {
  const io::CsvTable dev = io::read_csv(device_csv);
  for (const char* col : {"qubit_label", "omega0_GHz", "omega_idle_GHz", "e_sq_pct", "T1_us", "T2star_us"}) {
    (void)dev.column(col);
  }
  CircuitParams p;
  const auto label_col = dev.column("qubit_label");
  const bool has_int = dev.has_column("omega_int_GHz");
  for (const auto& row : dev.rows) {
    p.qubit_labels.push_back(row[label_col]);
    const std::string& cell = has_int ? row[dev.column("omega_int_GHz")] : std::string{};
    p.qubit_ghz.push_back(cell.empty() ? interaction_ghz : io::parse_double(cell));
  }

  auto qubit_index = [&](const std::string& cell) {
    const auto it = std::find(p.qubit_labels.begin(), p.qubit_labels.end(), cell);
    if (it != p.qubit_labels.end()) return static_cast<int>(it - p.qubit_labels.begin());
    const long long idx = io::parse_int(cell);
    if (idx < 0 || idx >= static_cast<long long>(p.qubit_labels.size())) {
      throw DomainError("coupler references unknown qubit '" + cell + "'");
    }
    return static_cast<int>(idx);
  };

  const io::CsvTable cpl = io::read_csv(coupler_csv);
  const auto c_label = cpl.column("coupler_label");
  const auto c_a = cpl.column("qubit_a");
  const auto c_b = cpl.column("qubit_b");
  const auto c_w = cpl.column("omega_c_GHz");
  const auto c_ga = cpl.column("g_ac_MHz");
  const auto c_gb = cpl.column("g_bc_MHz");
  const auto c_gab = cpl.column("g_ab_MHz");
  for (const auto& row : cpl.rows) {
    p.couplers.push_back({row[c_label], qubit_index(row[c_a]), qubit_index(row[c_b]), io::parse_double(row[c_w]),
                          io::parse_double(row[c_ga]), io::parse_double(row[c_gb]), io::parse_double(row[c_gab])});
  }
  return p;
}

std::vector<Edge> load_edges_csv(const std::string& path, EdgeKind kind) {
  const io::CsvTable t = io::read_csv(path);
  const auto ci = t.column("i");
  const auto cj = t.column("j");
  const auto cf = t.column("f_MHz");
  std::vector<Edge> edges;
  for (const auto& row : t.rows) {
    edges.push_back({static_cast<int>(io::parse_int(row[ci])), static_cast<int>(io::parse_int(row[cj])),
                     io::parse_double(row[cf]), kind});
  }
  return edges;
}

bool is_reflection_symmetric(const CouplingGraph& graph, double tol) {
  const int L = graph.sites();
  for (const Edge& e : graph.edges()) {
    const auto mirror = graph.find_edge(L - 1 - e.i, L - 1 - e.j);
    if (!mirror || std::abs(mirror->f_mhz - e.f_mhz) > tol) return false;
  }
  const auto on = graph.onsite();
  for (int s = 0; s < L; ++s) {
    if (std::abs(on[s] - on[L - 1 - s]) > tol) return false;
  }
  return true;
}

Word collective_state(const CouplingGraph& graph, CollectiveState which) {
  const auto dimers = graph.dimers();
  if (dimers.empty()) throw StateError("collective states need a dimer partition");
  Word w = 0;
  for (std::size_t k = 0; k < dimers.size(); ++k) {
    bool first = true;
    switch (which) {
      case CollectiveState::Pi: first = (k % 2 == 0); break;
      case CollectiveState::PiPrime: first = (k % 2 == 1); break;
      case CollectiveState::Theta: first = true; break;
      case CollectiveState::ThetaPrime: first = false; break;
    }
    w |= Word{1} << (first ? dimers[k].first : dimers[k].second);
  }
  return w;
}

}  // namespace hyperscar
