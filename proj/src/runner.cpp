// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperscar/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <new>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hyperscar/analysis.hpp"
#include "hyperscar/config.hpp"
#include "hyperscar/errors.hpp"
#include "hyperscar/io.hpp"

namespace hyperscar {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double to_mhz(double omega) { return omega / kRadPerNsPerMHz; }

// Runs f(0..n-1) on up to `workers` threads. The first exception is rethrown after all threads stop.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& f) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      try {
        f(k);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  const unsigned threads = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

class Context {
 public:
  Context(const RunOptions& opt, std::ostream& log) : opt_(opt), log_(log), dir_(opt.out_dir) {}

  RunConfig config;
  Json results = Json::object();

  [[nodiscard]] std::string file(const std::string& name) {
    outputs_.push_back(name);
    return (dir_ / name).string();
  }
  [[nodiscard]] std::uint64_t seed() const { return opt_.seed.value_or(config.seed); }
  [[nodiscard]] unsigned workers() const { return std::max(1U, opt_.workers); }
  std::ostream& log() { return log_; }

  template <class F>
  auto stage(const std::string& name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    log_ << "[" << opt_.command << "] " << name << "..." << std::endl;
    auto record = [&] {
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      stages_.push_back({{"stage", name}, {"seconds", s}});
    };
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      record();
    } else {
      auto r = f();
      record();
      return r;
    }
  }

  void write_manifest(int exit_code, const std::string& error_type, const std::string& error_message,
                      const Json& config_echo, double wall_seconds, const std::string& started) {
    Json m;
    m["tool"] = "hyperscar";
    m["version"] = kVersion;
    m["command"] = opt_.command;
    m["status"] = exit_code == kExitOk ? "ok" : "error";
    m["exit_code"] = exit_code;
    if (exit_code != kExitOk) m["error"] = {{"type", error_type}, {"message", error_message}};
    m["started_utc"] = started;
    m["wall_time_s"] = wall_seconds;
    m["config_path"] = opt_.config_path;
    m["config"] = config_echo;
    m["seed"] = seed();
    m["seed_overridden"] = opt_.seed.has_value();
    m["prng"] = kPrngName;
    m["workers"] = workers();
    m["tolerances"] = {{"krylov_tol", config.krylov.tol},
                       {"krylov_max_dim", config.krylov.max_dim},
                       {"krylov_max_halvings", config.krylov.max_halvings},
                       {"dense_dimension_limit", kDenseDimLimit},
                       {"dense_evolution_limit", kDenseEvolutionLimit}};
    m["conventions"] = {
        {"units", "frequencies f = J/2pi in MHz; H in rad/ns; time in ns"},
        {"fourier", "mean-subtracted, zero-padded single-sided amplitude 2|X_k|/N_raw, DC excluded"},
        {"fourier_padded_norm", "|X_k|/M with M the padded sample count (g_at_f1_padded_norm in sweep.csv)"},
        {"subsystem_fidelity", "projector form <phi_A|rho_A|phi_A>"},
        {"entropy", "von Neumann, natural log"},
        {"gap_ratio_discard_fraction", config.spectrum.discard_fraction},
        {"scan_candidate_rule", "g2 > separation_factor * median g2"}};
    m["stages"] = stages_;
    m["outputs"] = outputs_;
    m["results"] = results;
    std::ofstream out(dir_ / "manifest.json");
    out << m.dump(2) << '\n';
  }

 private:
  const RunOptions& opt_;
  std::ostream& log_;
  fs::path dir_;
  Json stages_ = Json::array();
  std::vector<std::string> outputs_;
};

int sector_photons(const RunConfig& c, const CouplingGraph& g) { return c.photons.value_or(g.sites() / 2); }

// ---------------------------------------------------------------- spectrum

void run_spectrum(Context& ctx) {
  const auto& c = ctx.config;
  const auto graph = build_graph(c.model, ctx.seed());
  const BasisSector sector(graph.sites(), sector_photons(c, graph));
  const SparseHamiltonian H(graph, sector);
  if (sector.dim() > kDenseDimLimit)
    throw CapacityError("spectrum: dimension " + std::to_string(sector.dim()) + " exceeds the dense limit " +
                        std::to_string(kDenseDimLimit));

  std::vector<Involution> symmetries;
  if (c.spectrum.use_symmetries) symmetries = available_symmetries(graph, sector);
  const Eigensystem eig = ctx.stage("diagonalize", [&] {
    if (symmetries.empty()) return diagonalize(H, c.spectrum.eigenvectors);
    const SymmetryBasis basis(graph, sector, symmetries);
    return diagonalize_resolved(H, basis, c.spectrum.eigenvectors);
  });
  Json summary;
  summary["sites"] = graph.sites();
  summary["photons"] = sector.photons();
  summary["dimension"] = sector.dim();
  summary["symmetries"] = Json::array();
  for (auto s : symmetries) summary["symmetries"].push_back(to_string(s));
  summary["blocks"] = eig.block_characters.empty() ? 1 : eig.block_characters.size();

  try {
    const GapRatio r = mean_gap_ratio(eig, c.spectrum.discard_fraction);
    summary["gap_ratio"] = {{"mean", r.mean}, {"ratios", r.ratios}, {"excluded_degenerate", r.excluded_degenerate}};
  } catch (const DomainError& e) {
    summary["gap_ratio"] = {{"mean", nullptr}, {"reason", e.what()}};
  }

  std::vector<double> entropies, overlap_pi;
  if (eig.vectors) {
    std::vector<int> cut = c.spectrum.entropy_cut;
    if (cut.empty())
      for (int i = 0; i < graph.sites() / 2; ++i) cut.push_back(i);
    entropies = ctx.stage("entropies", [&] { return eigenstate_entropies(eig, SubsystemMap(sector, cut)); });
    summary["entropy_cut"] = cut;
    if (!graph.dimers().empty()) {
      const Word pi = collective_state(graph, CollectiveState::Pi);
      if (sector.contains(pi)) {
        overlap_pi = overlaps(eig, sector, pi);
        const auto towers = detect_towers(overlap_pi, eig.energies, c.spectrum.towers);
        write_towers_csv(ctx.file("towers.csv"), towers);
        summary["towers"] = {{"detected", towers.detected},
                             {"message", towers.message},
                             {"count", towers.count()},
                             {"spacing_MHz", to_mhz(towers.spacing)},
                             {"max_relative_deviation", towers.max_relative_deviation}};
      }
    }
  }
  write_spectrum_csv(ctx.file("spectrum.csv"), eig, entropies, overlap_pi);
  write_dos_csv(ctx.file("dos.csv"), density_of_states(eig.energies, c.spectrum.dos_bins));
  std::ofstream(ctx.file("spectrum_summary.json")) << summary.dump(2) << '\n';
  ctx.results = summary;
}

// ---------------------------------------------------------------- evolve

struct EvolveOutcome {
  ObservableSeries series;
  std::vector<std::vector<Complex>> states;
  std::size_t matvecs = 0;
  double max_norm_deviation = 0.0;
  double max_energy_drift = 0.0;
  std::string method;
};

std::string safe_label(const ResolvedState& s, std::size_t k) {
  return std::to_string(k) + "_" + s.label + "_" + io::hex_word(s.word);
}

void write_trajectory_csv(const std::string& path, const ObservableSeries& s, int sites) {
  io::CsvWriter out(path);
  std::vector<std::string> header = {"t_ns", "I", "F", "F_A", "S_A"};
  const bool pops = !s.populations.empty();
  if (pops)
    for (int i = 0; i < sites; ++i) header.push_back("n_" + std::to_string(i));
  out.header(header);
  std::vector<double> row;
  for (std::size_t k = 0; k < s.t.size(); ++k) {
    row = {s.t[k], s.imbalance[k], s.fidelity[k], s.subsystem_fidelity.empty() ? kNaN : s.subsystem_fidelity[k],
           s.entropy.empty() ? kNaN : s.entropy[k]};
    if (pops) row.insert(row.end(), s.populations[k].begin(), s.populations[k].end());
    out.row(row);
  }
}

void write_fourier_csv(const std::string& path, const FourierSpectrum& s) {
  io::CsvWriter out(path);
  out.raw_line("f_MHz,g");
  for (std::size_t k = 0; k < s.amplitude.size(); ++k) {
    const double row[] = {s.frequencies_mhz[k], s.amplitude[k]};
    out.row(row);
  }
}

void run_evolve(Context& ctx) {
  const auto& c = ctx.config;
  const auto graph = build_graph(c.model, ctx.seed());
  const BasisSector sector(graph.sites(), sector_photons(c, graph));
  const auto states = resolve_states(c.initial_states, graph, sector, ctx.seed());
  if (states.empty()) throw ConfigError("initial_states: no states to evolve");
  const SparseHamiltonian H = ctx.stage("assemble", [&] { return SparseHamiltonian(graph, sector); });
  const auto times = uniform_times(c.t_max_ns, c.dt_ns);

  std::vector<int> subsystem = c.subsystem;
  for (int s : subsystem)
    if (s >= graph.sites()) throw ConfigError("subsystem: site " + std::to_string(s) + " out of range");

  std::optional<Eigensystem> eig;
  if (c.propagator == Propagator::Dense) {
    if (sector.dim() > kDenseEvolutionLimit) throw CapacityError("dense propagation above dimension limit");
    eig = ctx.stage("diagonalize", [&] { return diagonalize(H, true); });
  }

  std::vector<EvolveOutcome> outcomes(states.size());
  ctx.stage("evolve", [&] {
    parallel_for(states.size(), ctx.workers(), [&](std::size_t k) {
      ObservableRecorder rec(sector, states[k].word, subsystem, c.record_populations);
      const auto psi0 = basis_vector(sector, states[k].word);
      const Trajectory traj =
          eig ? evolve_dense(*eig, sector, psi0, times, c.state_dump, rec.observer())
              : evolve_krylov(H, psi0, times, c.krylov, c.state_dump, rec.observer());
      outcomes[k] = {rec.series(), traj.states, traj.matvecs, traj.max_norm_deviation, traj.max_energy_drift,
                     traj.method};
    });
  });

  Json per_state = Json::array();
  io::CsvWriter summary(ctx.file("evolve_summary.csv"));
  summary.raw_line("index,label,state_bits_hex,f_peak_MHz,g_peak,t1_ns,F_t1,fidelity_density,F_A_t1,S_A_final");
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto& s = outcomes[k].series;
    const std::string stem = states.size() == 1 ? "" : "_" + safe_label(states[k], k);
    write_trajectory_csv(ctx.file("trajectory" + stem + ".csv"), s, graph.sites());
    const auto spectrum = fourier_amplitude(s.t, s.imbalance, c.pad_to_ns, states[k].label);
    write_fourier_csv(ctx.file("fourier" + stem + ".csv"), spectrum);
    const auto peak = dominant_peak(spectrum, 1.0);
    double t1 = kNaN, f_t1 = kNaN, fa_t1 = kNaN;
    try {
      const auto r = first_revival(s.t, s.fidelity);
      t1 = r.t;
      f_t1 = r.value;
      if (!s.subsystem_fidelity.empty()) fa_t1 = first_revival(s.t, s.subsystem_fidelity).value;
    } catch (const DomainError&) {
    }
    const double density = std::isfinite(f_t1) ? fidelity_density(f_t1, graph.sites()) : kNaN;
    const double s_final = s.entropy.empty() ? kNaN : s.entropy.back();
    summary.raw_line(std::to_string(k) + "," + states[k].label + "," + io::hex_word(states[k].word) + "," +
                     io::format_double(peak.frequency_mhz) + "," + io::format_double(peak.amplitude) + "," +
                     io::format_double(t1) + "," + io::format_double(f_t1) + "," + io::format_double(density) + "," +
                     io::format_double(fa_t1) + "," + io::format_double(s_final));
    per_state.push_back({{"label", states[k].label},
                         {"state_bits_hex", io::hex_word(states[k].word)},
                         {"method", outcomes[k].method},
                         {"matvecs", outcomes[k].matvecs},
                         {"max_norm_deviation", outcomes[k].max_norm_deviation},
                         {"max_energy_drift", outcomes[k].max_energy_drift},
                         {"f_peak_MHz", peak.frequency_mhz},
                         {"t1_ns", number_or_null(t1)},
                         {"F_t1", number_or_null(f_t1)}});
    if (c.state_dump)
      io::write_state_dump(ctx.file("states" + stem + ".bin"), s.t, outcomes[k].states);
  }
  ctx.results = {{"sites", graph.sites()}, {"dimension", sector.dim()}, {"states", per_state}};
}

// ---------------------------------------------------------------- scan

void run_scan(Context& ctx) {
  const auto& c = ctx.config;
  const auto graph = build_graph(c.model, ctx.seed());
  const BasisSector sector(graph.sites(), sector_photons(c, graph));
  std::vector<ScanEntry> entries;
  std::vector<Word> fixed;
  for (auto cs : c.scan.include) {
    Word w = 0;
    try {
      w = collective_state(graph, cs);
    } catch (const Error& e) {
      throw ConfigError(std::string("scan.include: ") + e.what());
    }
    if (!sector.contains(w)) throw ConfigError(std::string("scan.include: ") + to_string(cs) + " not in the sector");
    entries.push_back({to_string(cs), w});
    fixed.push_back(w);
  }
  for (Word w : random_basis_states(sector, c.scan.random_count, ctx.seed(), fixed)) entries.push_back({"random", w});
  const SparseHamiltonian H = ctx.stage("assemble", [&] { return SparseHamiltonian(graph, sector); });

  ScanOptions opt;
  opt.times = uniform_times(c.t_max_ns, c.dt_ns);
  opt.pad_to_ns = c.pad_to_ns;
  opt.f1_mhz = c.scan.f1_mhz;
  opt.halfwidth_mhz = c.scan.halfwidth_mhz;
  opt.separation_factor = c.scan.separation_factor;
  opt.workers = ctx.workers();
  opt.krylov = c.krylov;
  const auto result = ctx.stage("scan", [&] { return scan_states(H, entries, opt); });
  write_scan_csv(ctx.file("scan.csv"), result);

  const auto ranks = scan_ranks(result);
  Json top = Json::array();
  std::size_t failed = 0;
  for (std::size_t k = 0; k < result.records.size(); ++k) {
    if (!result.records[k].error.empty()) ++failed;
    if (ranks[k] <= 5)
      top.push_back({{"rank", ranks[k]}, {"label", result.records[k].label},
                     {"state_bits_hex", io::hex_word(result.records[k].word)}, {"g2", result.records[k].g2}});
  }
  std::sort(top.begin(), top.end(), [](const Json& a, const Json& b) { return a["rank"] < b["rank"]; });
  ctx.results = {{"f1_MHz", result.f1_mhz}, {"candidate_threshold", result.threshold},
                 {"entries", entries.size()},  {"failed", failed},
                 {"top", top}};
  if (failed > 0) ctx.log() << "[scan] " << failed << " entries failed; see scan.csv (g2 = nan)" << std::endl;
}

// ---------------------------------------------------------------- sweep

void run_sweep(Context& ctx) {
  const auto& c = ctx.config;
  if (c.model.from_circuit) throw ConfigError("sweep needs a chain or comb model");
  const auto times = uniform_times(c.t_max_ns, c.dt_ns);
  struct Point {
    double f_a = 0, f1 = 0, g = 0, g_padded = 0;
  };
  std::vector<Point> points(c.sweep.ratios.size());
  ctx.stage("sweep", [&] {
    parallel_for(points.size(), ctx.workers(), [&](std::size_t k) {
      ModelConfig m = c.model;
      m.f_a = c.sweep.ratios[k] * c.model.f_e;
      const auto graph = build_graph(m, ctx.seed());
      const BasisSector sector(graph.sites(), sector_photons(c, graph));
      const Word w = collective_state(graph, c.sweep.state);
      const SparseHamiltonian H(graph, sector);
      ObservableRecorder rec(sector, w, {}, false);
      (void)evolve_krylov(H, basis_vector(sector, w), times, c.krylov, false, rec.observer());
      const auto spectrum = fourier_amplitude(times, rec.series().imbalance, c.pad_to_ns);
      const auto peak = dominant_peak(spectrum, 1.0);
      const double g = peak_at(spectrum, peak.frequency_mhz, c.sweep.halfwidth_mhz);
      points[k] = {m.f_a, peak.frequency_mhz, g, padded_length_amplitude(spectrum, g)};
    });
  });
  io::CsvWriter out(ctx.file("sweep.csv"));
  out.raw_line("ratio,f_a_MHz,f_e_MHz,f1_MHz,g_at_f1,g_at_f1_padded_norm");
  Json rows = Json::array();
  for (std::size_t k = 0; k < points.size(); ++k) {
    const double row[] = {c.sweep.ratios[k], points[k].f_a, c.model.f_e, points[k].f1, points[k].g,
                          points[k].g_padded};
    out.row(row);
    rows.push_back({{"ratio", c.sweep.ratios[k]},
                    {"f1_MHz", points[k].f1},
                    {"g_at_f1", points[k].g},
                    {"g_at_f1_padded_norm", points[k].g_padded}});
  }
  ctx.results = {{"state", to_string(c.sweep.state)}, {"points", rows}};
}

// ---------------------------------------------------------------- hypercube

void run_hypercube(Context& ctx) {
  const auto& c = ctx.config;
  if (c.model.from_circuit) throw ConfigError("hypercube needs a chain or comb model");
  Json reports = Json::array();
  io::CsvWriter out(ctx.file("hypercube.csv"));
  const std::vector<EdgeKind> kinds = {EdgeKind::Intra, EdgeKind::Inter, EdgeKind::Cross, EdgeKind::NextNearest,
                                       EdgeKind::Explicit};
  std::string header = "L,ratio,N,delta,delta_formula,gamma,delta_over_gamma";
  for (auto k : kinds) header += std::string(",gamma_") + to_string(k);
  out.raw_line(header);
  ctx.stage("hypercube", [&] {
    for (int L : c.hypercube.sizes) {
      for (double ratio : c.hypercube.ratios) {
        ModelConfig m = c.model;
        m.f_a = ratio * c.model.f_e;
        if (m.geometry == Geometry::Comb) {
          if (L < 4) continue;
          m.n_dimers = L / 2;
        } else {
          m.sites = L;
        }
        const auto graph = build_graph(m, ctx.seed());
        const auto r = hypercube_report(graph);
        const double formula = r.n_dimers * std::ldexp(1.0, r.n_dimers - 1) * std::abs(to_angular(m.f_a));
        std::vector<double> row = {static_cast<double>(L), ratio, static_cast<double>(r.n_dimers), r.delta, formula,
                                   r.gamma, r.ratio()};
        Json by_kind = Json::object();
        for (auto k : kinds) {
          const auto it = r.gamma_by_kind.find(k);
          row.push_back(it == r.gamma_by_kind.end() ? 0.0 : it->second);
          if (it != r.gamma_by_kind.end()) by_kind[to_string(k)] = it->second;
        }
        out.row(row);
        reports.push_back({{"L", L}, {"coupling_ratio", ratio}, {"N", r.n_dimers}, {"delta", r.delta},
                           {"gamma", r.gamma}, {"gamma_by_category", by_kind}, {"ratio", r.ratio()}});
      }
    }
  });
  std::ofstream(ctx.file("hypercube.json")) << reports.dump(2) << '\n';
  ctx.results = {{"reports", reports.size()}, {"units", "rad/ns"}};
}

// ---------------------------------------------------------------- sw

void run_sw(Context& ctx) {
  const auto& c = ctx.config;
  if (!c.model.from_circuit) throw ConfigError("sw needs model.geometry = circuit");
  const auto graph = ctx.stage("reduce", [&] { return build_graph(c.model, ctx.seed()); });
  io::CsvWriter edges(ctx.file("effective_edges.csv"));
  edges.raw_line("i,j,f_MHz");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const Edge& e : graph.edges()) {
    edges.raw_line(std::to_string(e.i) + "," + std::to_string(e.j) + "," + io::format_double(e.f_mhz));
    lo = std::min(lo, e.f_mhz);
    hi = std::max(hi, e.f_mhz);
  }
  io::CsvWriter onsite(ctx.file("effective_onsite.csv"));
  onsite.raw_line("site,f_MHz");
  for (int i = 0; i < graph.sites(); ++i)
    onsite.raw_line(std::to_string(i) + "," + io::format_double(graph.onsite()[static_cast<std::size_t>(i)]));
  ctx.results = {{"sites", graph.sites()},
                 {"edges", graph.edges().size()},
                 {"f_min_MHz", number_or_null(lo)},
                 {"f_max_MHz", number_or_null(hi)}};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"spectrum", "evolve", "scan", "sweep", "hypercube", "sw"};
  return names;
}

int run(const RunOptions& options, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string started = utc_now();
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) {
    log << "error: cannot create output directory " << options.out_dir << ": " << ec.message() << std::endl;
    return kExitConfig;
  }
  Context ctx(options, log);
  Json echo = nullptr;
  int code = kExitOk;
  std::string type, message;
  try {
    {
      std::ifstream in(options.config_path);
      if (in) {
        try {
          echo = Json::parse(in, nullptr, true, true);
        } catch (const Json::parse_error&) {
        }
      }
    }
    ctx.config = load_config(options.config_path);
    const auto& names = command_names();
    if (std::find(names.begin(), names.end(), options.command) == names.end())
      throw ConfigError("unknown command '" + options.command + "'");
    if (options.command == "spectrum") run_spectrum(ctx);
    if (options.command == "evolve") run_evolve(ctx);
    if (options.command == "scan") run_scan(ctx);
    if (options.command == "sweep") run_sweep(ctx);
    if (options.command == "hypercube") run_hypercube(ctx);
    if (options.command == "sw") run_sw(ctx);
  } catch (const ConfigError& e) {
    code = kExitConfig, type = "config", message = e.what();
  } catch (const CapacityError& e) {
    code = kExitCapacity, type = "capacity", message = e.what();
  } catch (const NumericalError& e) {
    code = kExitNumerical, type = "numerical", message = e.what();
  } catch (const DomainError& e) {
    code = kExitConfig, type = "domain", message = e.what();
  } catch (const StateError& e) {
    code = kExitConfig, type = "state", message = e.what();
  } catch (const std::bad_alloc&) {
    code = kExitCapacity, type = "capacity", message = "out of memory";
  } catch (const std::exception& e) {
    code = kExitNumerical, type = "internal", message = e.what();
  }
  if (code != kExitOk) log << "error (" << type << "): " << message << std::endl;
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    ctx.write_manifest(code, type, message, echo, wall, started);
  } catch (const std::exception& e) {
    log << "error: manifest not written: " << e.what() << std::endl;
  }
  return code;
}

}  // namespace hyperscar
