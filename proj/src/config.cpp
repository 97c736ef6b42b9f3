// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperscar/config.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hyperscar/errors.hpp"

namespace hyperscar {

namespace {

using Json = nlohmann::json;

// Typed access to one JSON object; remembers its path for messages and rejects unknown keys.
class Section {
 public:
  Section(const Json& j, std::string path, std::initializer_list<const char*> allowed) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j_.items()) {
      if (!ok.count(key)) fail(key, "unknown key");
    }
  }

  [[nodiscard]] bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  [[nodiscard]] const Json& at(const char* key) const { return j_.at(key); }
  [[nodiscard]] std::string path(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const std::string where = key.empty() ? path_ : (path_.empty() ? key : path_ + "." + key);
    throw ConfigError((where.empty() ? std::string("config") : where) + ": " + what);
  }

  double number(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    if (!at(key).is_number()) fail(key, "expected a number");
    return at(key).get<double>();
  }
  double positive(const char* key, double fallback) const {
    const double v = number(key, fallback);
    if (!(v > 0)) fail(key, "must be positive");
    return v;
  }
  long long integer(const char* key, long long fallback) const {
    if (!has(key)) return fallback;
    if (!at(key).is_number_integer()) fail(key, "expected an integer");
    return at(key).get<long long>();
  }
  std::uint64_t seed(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    if (!at(key).is_number_unsigned() && !(at(key).is_number_integer() && at(key).get<long long>() >= 0))
      fail(key, "expected a non-negative integer");
    return at(key).get<std::uint64_t>();
  }
  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!at(key).is_boolean()) fail(key, "expected true or false");
    return at(key).get<bool>();
  }
  std::string string(const char* key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    if (!at(key).is_string()) fail(key, "expected a string");
    return at(key).get<std::string>();
  }
  std::string choice(const char* key, const std::string& fallback, std::initializer_list<const char*> options) const {
    const std::string v = string(key, fallback);
    for (const char* o : options)
      if (v == o) return v;
    std::string list;
    for (const char* o : options) list += std::string(list.empty() ? "" : ", ") + o;
    fail(key, "'" + v + "' is not one of " + list);
  }
  std::vector<double> numbers(const char* key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    if (!at(key).is_array()) fail(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : at(key)) {
      if (!v.is_number()) fail(key, "expected an array of numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  std::vector<int> integers(const char* key, std::vector<int> fallback) const {
    if (!has(key)) return fallback;
    if (!at(key).is_array()) fail(key, "expected an array of integers");
    std::vector<int> out;
    for (const auto& v : at(key)) {
      if (!v.is_number_integer()) fail(key, "expected an array of integers");
      out.push_back(v.get<int>());
    }
    return out;
  }

 private:
  const Json& j_;
  std::string path_;
};

Word parse_word(const std::string& text, const std::string& where) {
  try {
    if (text.rfind("0x", 0) == 0) {
      std::size_t used = 0;
      const Word w = std::stoull(text.substr(2), &used, 16);
      if (used + 2 != text.size()) throw std::invalid_argument(text);
      return w;
    }
    if (!text.empty() && text.size() <= kMaxSites && text.find_first_not_of("01") == std::string::npos) {
      // Occupation string, site 0 first.
      Word w = 0;
      for (std::size_t k = 0; k < text.size(); ++k)
        if (text[k] == '1') w |= Word{1} << k;
      return w;
    }
  } catch (const std::exception&) {
  }
  throw ConfigError(where + ": '" + text + "' is neither a collective state, a 0x word nor a 0/1 occupation string");
}

// Accepts the CamelCase config names and the snake_case labels used in outputs.
std::optional<CollectiveState> collective_by_name(const std::string& name) {
  static const std::array<std::pair<const char*, CollectiveState>, 4> kNames = {{
      {"Pi", CollectiveState::Pi},
      {"PiPrime", CollectiveState::PiPrime},
      {"Theta", CollectiveState::Theta},
      {"ThetaPrime", CollectiveState::ThetaPrime},
  }};
  for (const auto& [camel, c] : kNames)
    if (name == camel || name == to_string(c)) return c;
  return std::nullopt;
}

StateSpec parse_state(const Json& j, const std::string& where) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (auto c = collective_by_name(s)) return {*c};
    return {parse_word(s, where)};
  }
  Section r(j, where, {"random", "seed"});
  StateSpec::Random random;
  const long long count = r.integer("random", -1);
  if (count < 0) r.fail("random", "expected a non-negative count");
  random.count = static_cast<std::size_t>(count);
  if (r.has("seed")) random.seed = r.seed("seed", 0);
  return {random};
}

OnsitePattern parse_onsite(const Json& j, const std::string& where) {
  Section o(j, where, {"type", "f_MHz", "step_MHz", "values_MHz"});
  const std::string type = o.choice("type", "uniform", {"uniform", "end_impurity", "staircase", "explicit"});
  if (type == "uniform") return onsite::Uniform{o.number("f_MHz", 0.0)};
  if (type == "end_impurity") {
    if (!o.has("f_MHz")) o.fail("f_MHz", "required for end_impurity");
    return onsite::EndImpurity{o.number("f_MHz", 0.0)};
  }
  if (type == "staircase") {
    if (!o.has("step_MHz")) o.fail("step_MHz", "required for staircase");
    return onsite::Staircase{o.number("step_MHz", 0.0)};
  }
  if (!o.has("values_MHz")) o.fail("values_MHz", "required for explicit");
  return onsite::Explicit{o.numbers("values_MHz", {})};
}

std::string resolve_path(const std::string& p, const std::filesystem::path& base) {
  if (p.empty() || base.empty()) return p;
  const std::filesystem::path path(p);
  return path.is_absolute() ? p : (base / path).lexically_normal().string();
}

ModelConfig parse_model(const Json& j, const std::filesystem::path& base) {
  Section m(j, "model", {"geometry", "sites", "n_dimers", "boundary", "f_a_MHz", "f_e_MHz", "cross_couplings",
                         "edges_csv", "f_nn_MHz", "onsite", "circuit"});
  ModelConfig model;
  const std::string geometry = m.choice("geometry", "chain", {"chain", "comb", "circuit"});
  model.boundary = m.choice("boundary", "open", {"open", "periodic"}) == "open" ? Boundary::Open : Boundary::Periodic;
  model.f_a = m.number("f_a_MHz", -9.0);
  model.f_e = m.number("f_e_MHz", -6.0);
  model.f_nn = m.number("f_nn_MHz", 0.0);
  if (geometry == "chain") {
    model.geometry = Geometry::Chain;
    model.sites = static_cast<int>(m.integer("sites", 0));
    if (model.sites < 2 || model.sites % 2 != 0 || model.sites > kMaxSites)
      m.fail("sites", "chain needs an even number of sites in [2, " + std::to_string(kMaxSites) + "]");
    if (m.has("n_dimers")) m.fail("n_dimers", "only for comb geometry");
  } else if (geometry == "comb") {
    model.geometry = Geometry::Comb;
    model.n_dimers = static_cast<int>(m.integer("n_dimers", 0));
    if (model.n_dimers < 2 || 2 * model.n_dimers > kMaxSites)
      m.fail("n_dimers", "comb needs 2.." + std::to_string(kMaxSites / 2) + " dimers");
    if (m.has("sites")) m.fail("sites", "comb size is set by n_dimers");
    if (model.boundary == Boundary::Periodic) m.fail("boundary", "comb is open");
  } else {
    model.geometry = Geometry::Custom;
    model.from_circuit = true;
    if (!m.has("circuit")) m.fail("circuit", "required for circuit geometry");
    Section c(m.at("circuit"), "model.circuit", {"device_csv", "coupler_csv", "interaction_GHz"});
    CircuitConfig circuit;
    circuit.device_csv = resolve_path(c.string("device_csv", ""), base);
    circuit.coupler_csv = resolve_path(c.string("coupler_csv", ""), base);
    if (circuit.device_csv.empty()) c.fail("device_csv", "required");
    if (circuit.coupler_csv.empty()) c.fail("coupler_csv", "required");
    circuit.interaction_ghz = c.positive("interaction_GHz", 4.375);
    model.circuit = circuit;
    for (const char* key : {"sites", "n_dimers", "f_nn_MHz", "cross_couplings"})
      if (m.has(key)) m.fail(key, "not used with circuit geometry");
  }
  if (m.has("circuit") && !model.from_circuit) m.fail("circuit", "only for circuit geometry");
  if (m.has("cross_couplings")) {
    Section x(m.at("cross_couplings"), "model.cross_couplings", {"range_MHz", "seed", "grid_cols"});
    CrossCouplingConfig cross;
    const auto range = x.numbers("range_MHz", {0.3, 1.2});
    if (range.size() != 2 || range[0] > range[1]) x.fail("range_MHz", "expected [lo, hi] with lo <= hi");
    cross.f_lo = range[0];
    cross.f_hi = range[1];
    if (x.has("seed")) cross.seed = x.seed("seed", 0);
    cross.grid_cols = static_cast<int>(x.integer("grid_cols", 6));
    if (cross.grid_cols < 1) x.fail("grid_cols", "must be positive");
    model.cross = cross;
  }
  if (m.has("edges_csv")) model.edges_file = resolve_path(m.string("edges_csv", ""), base);
  if (m.has("onsite")) model.onsite = parse_onsite(m.at("onsite"), "model.onsite");
  if (model.f_nn != 0.0 && model.geometry != Geometry::Chain) m.fail("f_nn_MHz", "next-nearest couplings need a chain");
  return model;
}

TowerPolicy parse_towers(const Json& j) {
  Section t(j, "spectrum.towers",
            {"threshold_factor", "seed_factor", "merge_fraction", "seed_weight_fraction", "lattice_tolerance",
             "rung_weight_fraction", "max_iterations", "min_towers"});
  TowerPolicy p;
  p.threshold_factor = t.positive("threshold_factor", p.threshold_factor);
  p.seed_factor = t.positive("seed_factor", p.seed_factor);
  p.merge_fraction = t.positive("merge_fraction", p.merge_fraction);
  p.seed_weight_fraction = t.number("seed_weight_fraction", p.seed_weight_fraction);
  p.lattice_tolerance = t.positive("lattice_tolerance", p.lattice_tolerance);
  p.rung_weight_fraction = t.number("rung_weight_fraction", p.rung_weight_fraction);
  if (p.seed_weight_fraction < 0 || p.seed_weight_fraction > 1) t.fail("seed_weight_fraction", "must lie in [0, 1]");
  if (p.rung_weight_fraction < 0) t.fail("rung_weight_fraction", "must be non-negative");
  if (p.lattice_tolerance >= 0.5) t.fail("lattice_tolerance", "must be below 0.5 so rungs do not overlap");
  p.max_iterations = static_cast<int>(t.integer("max_iterations", p.max_iterations));
  const long long min_towers = t.integer("min_towers", static_cast<long long>(p.min_towers));
  if (min_towers < 2) t.fail("min_towers", "must be at least 2");
  p.min_towers = static_cast<std::size_t>(min_towers);
  return p;
}

RunConfig parse_json(const Json& root, const std::filesystem::path& base) {
  Section r(root, "", {"model", "photons", "seed", "initial_states", "time", "subsystem", "propagator", "krylov",
                       "outputs", "spectrum", "scan", "sweep", "hypercube", "description"});
  RunConfig c;
  if (!r.has("model")) r.fail("model", "required");
  c.model = parse_model(r.at("model"), base);
  (void)r.string("description", "");
  c.seed = r.seed("seed", 1);
  const int L = site_count(c.model);
  if (r.has("photons")) {
    const long long n = r.integer("photons", 0);
    if (L > 0 && (n < 0 || n > L)) r.fail("photons", "must lie in [0, L]");
    c.photons = static_cast<int>(n);
  }
  if (r.has("initial_states")) {
    if (!r.at("initial_states").is_array()) r.fail("initial_states", "expected an array");
    c.initial_states.clear();
    std::size_t k = 0;
    for (const auto& s : r.at("initial_states"))
      c.initial_states.push_back(parse_state(s, "initial_states[" + std::to_string(k++) + "]"));
  }
  if (r.has("time")) {
    Section t(r.at("time"), "time", {"t_max_ns", "dt_ns", "pad_to_ns"});
    c.t_max_ns = t.positive("t_max_ns", c.t_max_ns);
    c.dt_ns = t.positive("dt_ns", c.dt_ns);
    c.pad_to_ns = t.positive("pad_to_ns", c.pad_to_ns);
    if (c.pad_to_ns < c.t_max_ns) t.fail("pad_to_ns", "must not be shorter than t_max_ns");
  }
  c.subsystem = r.integers("subsystem", c.subsystem);
  {
    std::set<int> unique(c.subsystem.begin(), c.subsystem.end());
    if (unique.size() != c.subsystem.size()) r.fail("subsystem", "repeated site");
    if (c.subsystem.size() > 12) r.fail("subsystem", "at most 12 sites");
    for (int s : c.subsystem)
      if (s < 0 || (L > 0 && s >= L)) r.fail("subsystem", "site " + std::to_string(s) + " out of range");
  }
  const std::string prop = r.choice("propagator", "auto", {"auto", "krylov", "dense"});
  c.propagator = prop == "auto" ? Propagator::Auto : (prop == "krylov" ? Propagator::Krylov : Propagator::Dense);
  if (r.has("krylov")) {
    Section k(r.at("krylov"), "krylov", {"tol", "max_dim", "max_halvings"});
    c.krylov.tol = k.positive("tol", c.krylov.tol);
    c.krylov.max_dim = static_cast<int>(k.integer("max_dim", c.krylov.max_dim));
    c.krylov.max_halvings = static_cast<int>(k.integer("max_halvings", c.krylov.max_halvings));
    if (c.krylov.max_dim < 2) k.fail("max_dim", "must be at least 2");
    if (c.krylov.max_halvings < 0) k.fail("max_halvings", "must be non-negative");
  }
  if (r.has("outputs")) {
    Section o(r.at("outputs"), "outputs", {"populations", "state_dump"});
    c.record_populations = o.boolean("populations", true);
    c.state_dump = o.boolean("state_dump", false);
  }
  if (r.has("spectrum")) {
    Section s(r.at("spectrum"), "spectrum",
              {"eigenvectors", "symmetries", "discard_fraction", "dos_bins", "entropy_cut", "towers"});
    c.spectrum.eigenvectors = s.boolean("eigenvectors", true);
    c.spectrum.use_symmetries = s.choice("symmetries", "auto", {"auto", "none"}) == "auto";
    c.spectrum.discard_fraction = s.number("discard_fraction", 0.1);
    if (c.spectrum.discard_fraction < 0 || c.spectrum.discard_fraction >= 0.5)
      s.fail("discard_fraction", "must lie in [0, 0.5)");
    c.spectrum.dos_bins = static_cast<int>(s.integer("dos_bins", 50));
    if (c.spectrum.dos_bins < 1) s.fail("dos_bins", "must be positive");
    c.spectrum.entropy_cut = s.integers("entropy_cut", {});
    for (int site : c.spectrum.entropy_cut)
      if (site < 0 || (L > 0 && site >= L)) s.fail("entropy_cut", "site out of range");
    if (s.has("towers")) c.spectrum.towers = parse_towers(s.at("towers"));
  }
  if (r.has("scan")) {
    Section s(r.at("scan"), "scan", {"include", "random_count", "f1_MHz", "halfwidth_MHz", "separation_factor"});
    if (s.has("include")) {
      if (!s.at("include").is_array()) s.fail("include", "expected an array of collective state names");
      c.scan.include.clear();
      for (const auto& v : s.at("include")) {
        if (!v.is_string()) s.fail("include", "expected collective state names");
        c.scan.include.push_back(parse_collective(v.get<std::string>()));
      }
    }
    const long long count = s.integer("random_count", 120);
    if (count < 0) s.fail("random_count", "must be non-negative");
    c.scan.random_count = static_cast<std::size_t>(count);
    if (s.has("f1_MHz")) c.scan.f1_mhz = s.positive("f1_MHz", 1.0);
    c.scan.halfwidth_mhz = s.positive("halfwidth_MHz", 2.0);
    c.scan.separation_factor = s.positive("separation_factor", 10.0);
  }
  if (r.has("sweep")) {
    Section s(r.at("sweep"), "sweep", {"ratios", "state", "halfwidth_MHz"});
    c.sweep.ratios = s.numbers("ratios", c.sweep.ratios);
    if (c.sweep.ratios.empty()) s.fail("ratios", "must not be empty");
    if (s.has("state")) c.sweep.state = parse_collective(s.string("state", "Pi"));
    c.sweep.halfwidth_mhz = s.positive("halfwidth_MHz", 2.0);
  }
  if (r.has("hypercube")) {
    Section h(r.at("hypercube"), "hypercube", {"sizes", "ratios"});
    c.hypercube.sizes = h.integers("sizes", c.hypercube.sizes);
    c.hypercube.ratios = h.numbers("ratios", c.hypercube.ratios);
    for (int L2 : c.hypercube.sizes)
      if (L2 < 2 || L2 % 2 != 0 || L2 > kMaxSites)
        h.fail("sizes", "sizes must be even and in [2, " + std::to_string(kMaxSites) + "]");
  }
  return c;
}

}  // namespace

CollectiveState parse_collective(const std::string& name) {
  if (auto c = collective_by_name(name)) return *c;
  throw ConfigError("unknown collective state '" + name + "' (expected Pi, PiPrime, Theta or ThetaPrime)");
}

RunConfig parse_config(const std::string& json_text) {
  Json root;
  try {
    root = Json::parse(json_text, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_json(root, {});
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  Json root;
  try {
    root = Json::parse(buf.str(), nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + " is not valid JSON: " + e.what());
  }
  return parse_json(root, std::filesystem::path(path).parent_path());
}

int site_count(const ModelConfig& model) {
  switch (model.geometry) {
    case Geometry::Chain:
      return model.sites;
    case Geometry::Comb:
      return 2 * model.n_dimers;
    case Geometry::Custom:
      return 0;
  }
  return 0;
}

CouplingGraph build_graph(const ModelConfig& model, std::uint64_t run_seed) {
  try {
    CouplingGraph g;
    if (model.from_circuit) {
      g = effective_from_circuit(
          load_circuit_csv(model.circuit->device_csv, model.circuit->coupler_csv, model.circuit->interaction_ghz));
    } else if (model.geometry == Geometry::Comb) {
      g = build_comb(model.n_dimers, model.f_a, model.f_e);
    } else {
      g = build_chain(model.sites, model.boundary, model.f_a, model.f_e);
    }
    if (model.cross) {
      if (!g.embedding()) {
        const int cols = model.cross->grid_cols;
        g.set_embedding(snake_grid_embedding(g.sites(), (g.sites() + cols - 1) / cols, cols));
      }
      g = add_cross_couplings(g, model.cross->f_lo, model.cross->f_hi, model.cross->seed.value_or(run_seed));
    }
    if (model.f_nn != 0.0) g = add_nnn_couplings(g, model.f_nn);
    if (model.edges_file) {
      const auto edges = load_edges_csv(*model.edges_file, EdgeKind::Explicit);
      g = add_explicit_edges(g, edges);
    }
    if (!model.from_circuit || !std::holds_alternative<onsite::Uniform>(model.onsite) ||
        std::get<onsite::Uniform>(model.onsite).f_mhz != 0.0)
      g = set_onsite(g, model.onsite);
    return g;
  } catch (const CapacityError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

std::vector<ResolvedState> resolve_states(std::span<const StateSpec> specs, const CouplingGraph& graph,
                                          const BasisSector& sector, std::uint64_t run_seed) {
  std::vector<ResolvedState> out;
  std::vector<Word> fixed;
  for (const auto& s : specs) {
    if (const auto* c = std::get_if<CollectiveState>(&s.what)) {
      try {
        fixed.push_back(collective_state(graph, *c));
      } catch (const Error& e) {
        throw ConfigError(std::string("initial_states: ") + e.what());
      }
    } else if (const auto* w = std::get_if<Word>(&s.what)) {
      fixed.push_back(*w);
    }
  }
  std::size_t next_fixed = 0;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const auto& s = specs[k];
    if (const auto* c = std::get_if<CollectiveState>(&s.what)) {
      out.push_back({to_string(*c), fixed[next_fixed++]});
    } else if (std::holds_alternative<Word>(s.what)) {
      out.push_back({"word", fixed[next_fixed++]});
    } else {
      const auto& r = std::get<StateSpec::Random>(s.what);
      // Distinct streams per random block unless seeded explicitly.
      const std::uint64_t seed = r.seed.value_or(run_seed + 0x9E3779B97F4A7C15ULL * (k + 1));
      try {
        std::vector<Word> taken = fixed;
        for (const auto& o : out) taken.push_back(o.word);
        for (Word w : random_basis_states(sector, r.count, seed, taken)) out.push_back({"random", w});
      } catch (const DomainError& e) {
        throw ConfigError(std::string("initial_states: ") + e.what());
      }
    }
  }
  for (const auto& s : out) {
    if (!sector.contains(s.word))
      throw ConfigError("initial state " + s.label + " (word " + std::to_string(s.word) + ") is not in the " +
                        std::to_string(sector.photons()) + "-photon sector of L=" + std::to_string(sector.sites()));
  }
  return out;
}

}  // namespace hyperscar
