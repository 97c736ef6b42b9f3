// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

#include "hyperscar/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "hyperscar/errors.hpp"

namespace hyperscar {

namespace {

using CMap = Eigen::Map<const Eigen::VectorXcd>;

void check_inputs(Index dim, std::span<const Complex> psi0, std::span<const double> times) {
  if (psi0.size() != dim) {
    throw DomainError("initial state has length " + std::to_string(psi0.size()) + ", sector dimension is " +
                      std::to_string(dim));
  }
  const double norm = CMap(psi0.data(), static_cast<Eigen::Index>(psi0.size())).norm();
  if (std::abs(norm - 1.0) > 1e-10) throw DomainError("initial state is not normalized (norm " + std::to_string(norm) + ")");
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0) || (k > 0 && times[k] < times[k - 1])) {
      throw DomainError("output times must be non-negative and ascending");
    }
  }
}

void init_trajectory(Trajectory& traj, const BasisSector& sector, std::span<const Complex> psi0,
                     std::span<const double> times) {
  traj.times.assign(times.begin(), times.end());
  traj.psi0.assign(psi0.begin(), psi0.end());
  traj.psi0_word = as_basis_state(sector, psi0);
}

/// Lanczos data for one Krylov basis built from a unit vector.
struct LanczosBasis {
  int m = 0;
  bool exact = false;  ///< invariant subspace found
  double beta_last = 0.0;
  Eigen::VectorXd alpha, beta;
  Eigen::VectorXd lambda;
  Eigen::MatrixXd q;  ///< eigenvectors of T
};

}  // namespace

std::vector<Complex> basis_vector(const BasisSector& sector, Word w) {
  std::vector<Complex> v(sector.dim());
  v[sector.rank(w)] = 1.0;
  return v;
}

std::optional<Word> as_basis_state(const BasisSector& sector, std::span<const Complex> psi) {
  if (psi.size() != sector.dim() || psi.empty()) return std::nullopt;
  std::size_t best = 0;
  for (std::size_t u = 1; u < psi.size(); ++u) {
    if (std::norm(psi[u]) > std::norm(psi[best])) best = u;
  }
  if (std::abs(std::norm(psi[best]) - 1.0) > 1e-12) return std::nullopt;
  return sector.state(best);
}

Trajectory evolve_krylov(const SparseHamiltonian& H, std::span<const Complex> psi0, std::span<const double> times,
                         const KrylovOptions& options, bool retain_states, const StateObserver& observer) {
  const Index dim = H.dim();
  check_inputs(dim, psi0, times);
  if (options.max_dim < 2) throw DomainError("Krylov dimension must be at least 2");
  if (!(options.tol > 0.0)) throw DomainError("Krylov tolerance must be positive");

  Trajectory traj;
  init_trajectory(traj, H.sector(), psi0, times);
  traj.method = "krylov";
  traj.tol = options.tol;
  const int mmax = static_cast<int>(std::min<Index>(static_cast<Index>(options.max_dim), dim));
  traj.krylov_dim = mmax;

  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXcd V(n, mmax + 1);
  Eigen::VectorXcd w(n), psi(n);
  Eigen::VectorXcd v = CMap(psi0.data(), n);

  // Reference energy and scale for the drift monitor.
  {
    H.apply(std::span<const Complex>(v.data(), dim), std::span<Complex>(w.data(), dim));
    ++traj.matvecs;
    traj.energy0 = v.dot(w).real();
  }
  const double energy_scale = std::max({std::abs(traj.energy0), w.norm(), 1e-300});

  auto emit = [&](std::size_t k, const Eigen::VectorXcd& state, double energy) {
    if (options.monitor_invariants) {
      traj.max_norm_deviation = std::max(traj.max_norm_deviation, std::abs(state.norm() - 1.0));
      traj.max_energy_drift = std::max(traj.max_energy_drift, std::abs(energy - traj.energy0) / energy_scale);
      if (traj.max_norm_deviation > 1e-8 || traj.max_energy_drift > 1e-6) {
        throw NumericalError("Krylov invariants violated at t = " + std::to_string(times[k]) +
                             " ns: norm deviation " + std::to_string(traj.max_norm_deviation) + ", energy drift " +
                             std::to_string(traj.max_energy_drift));
      }
    }
    if (retain_states) traj.states.emplace_back(state.data(), state.data() + dim);
    if (observer) observer(k, times[k], std::span<const Complex>(state.data(), dim));
  };

  auto build = [&](const Eigen::VectorXcd& start) {
    LanczosBasis b;
    b.alpha = Eigen::VectorXd::Zero(mmax);
    b.beta = Eigen::VectorXd::Zero(mmax);
    V.col(0) = start / start.norm();
    int j = 0;
    for (; j < mmax; ++j) {
      H.apply(std::span<const Complex>(V.col(j).data(), dim), std::span<Complex>(w.data(), dim));
      ++traj.matvecs;
      b.alpha(j) = V.col(j).dot(w).real();
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXcd h = V.leftCols(j + 1).adjoint() * w;
        w.noalias() -= V.leftCols(j + 1) * h;
      }
      const double bnorm = w.norm();
      b.beta(j) = bnorm;
      if (bnorm <= 1e-12 * energy_scale) {
        b.exact = true;
        ++j;
        break;
      }
      V.col(j + 1) = w / bnorm;
    }
    b.m = j;
    b.beta_last = b.exact ? 0.0 : b.beta(j - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    Eigen::VectorXd diag = b.alpha.head(b.m);
    Eigen::VectorXd sub = b.beta.head(std::max(b.m - 1, 0));
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    b.lambda = es.eigenvalues();
    b.q = es.eigenvectors();
    ++traj.krylov_bases;
    return b;
  };

  // y(tau) = exp(-i T tau) e_1 in the Krylov basis.
  auto coefficients = [](const LanczosBasis& b, double tau) {
    Eigen::VectorXcd phase(b.m);
    for (int r = 0; r < b.m; ++r) phase(r) = std::polar(b.q(0, r), -b.lambda(r) * tau);
    return Eigen::VectorXcd(b.q.cast<Complex>() * phase);
  };
  auto error_estimate = [](const LanczosBasis& b, const Eigen::VectorXcd& y) {
    return b.exact ? 0.0 : b.beta_last * std::abs(y(b.m - 1));
  };
  auto energy_of = [](const LanczosBasis& b, const Eigen::VectorXcd& y) {
    double e = 0.0;
    for (int r = 0; r < b.m; ++r) e += b.alpha(r) * std::norm(y(r));
    for (int r = 0; r + 1 < b.m; ++r) e += 2.0 * b.beta(r) * (std::conj(y(r)) * y(r + 1)).real();
    return e;
  };

  double t_cur = 0.0;
  double norm_cur = v.norm();
  std::size_t k = 0;
  while (k < times.size() && times[k] <= t_cur) emit(k++, v, traj.energy0);

  while (k < times.size()) {
    const LanczosBasis b = build(v);
    bool advanced = false;
    Eigen::VectorXcd last;
    while (k < times.size()) {
      const Eigen::VectorXcd y = coefficients(b, times[k] - t_cur) * norm_cur;
      if (error_estimate(b, y) > options.tol) break;
      psi.noalias() = V.leftCols(b.m) * y;
      emit(k, psi, energy_of(b, y) / (norm_cur * norm_cur));
      ++k;
      advanced = true;
    }
    if (advanced) {
      v = psi;
      t_cur = times[k - 1];
      norm_cur = v.norm();
      continue;
    }
    double tau = times[k] - t_cur;
    Eigen::VectorXcd y = coefficients(b, tau) * norm_cur;
    int halvings = 0;
    while (error_estimate(b, y) > options.tol && halvings < options.max_halvings) {
      tau *= 0.5;
      ++halvings;
      y = coefficients(b, tau) * norm_cur;
    }
    if (error_estimate(b, y) > options.tol) {
      throw NumericalError("Krylov step did not converge at t = " + std::to_string(t_cur) + " ns after " +
                           std::to_string(halvings) + " halvings (error estimate " +
                           std::to_string(error_estimate(b, y)) + ", subspace " + std::to_string(b.m) + ")");
    }
    v.noalias() = V.leftCols(b.m) * y;
    t_cur += tau;
    norm_cur = v.norm();
  }
  return traj;
}

Trajectory evolve_dense(const SparseHamiltonian& H, std::span<const Complex> psi0, std::span<const double> times,
                        bool retain_states, const StateObserver& observer) {
  if (H.dim() > kDenseEvolutionLimit) {
    throw CapacityError("dense evolution is limited to dimension " + std::to_string(kDenseEvolutionLimit));
  }
  check_inputs(H.dim(), psi0, times);
  return evolve_dense(diagonalize(H, true), H.sector(), psi0, times, retain_states, observer);
}

Trajectory evolve_dense(const Eigensystem& eig, const BasisSector& sector, std::span<const Complex> psi0,
                        std::span<const double> times, bool retain_states, const StateObserver& observer) {
  if (!eig.vectors) throw StateError("dense evolution needs eigenvectors");
  check_inputs(sector.dim(), psi0, times);
  const Eigen::MatrixXd& V = *eig.vectors;
  if (V.rows() != static_cast<Eigen::Index>(sector.dim())) throw DomainError("eigensystem does not match the sector");

  Trajectory traj;
  init_trajectory(traj, sector, psi0, times);
  traj.method = "dense";
  const auto n = static_cast<Eigen::Index>(sector.dim());
  const Eigen::VectorXcd p0 = CMap(psi0.data(), n);
  const Eigen::VectorXd c_re = V.transpose() * p0.real();
  const Eigen::VectorXd c_im = V.transpose() * p0.imag();
  Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(eig.energies.data(), static_cast<Eigen::Index>(eig.size()));
  traj.energy0 = (c_re.array().square() + c_im.array().square()).matrix().dot(e);

  Eigen::VectorXd a_re(c_re.size()), a_im(c_re.size());
  Eigen::VectorXcd psi(n);
  for (std::size_t k = 0; k < times.size(); ++k) {
    for (Eigen::Index r = 0; r < c_re.size(); ++r) {
      const Complex c = Complex(c_re(r), c_im(r)) * std::polar(1.0, -e(r) * times[k]);
      a_re(r) = c.real();
      a_im(r) = c.imag();
    }
    psi.real() = V * a_re;
    psi.imag() = V * a_im;
    traj.max_norm_deviation = std::max(traj.max_norm_deviation, std::abs(psi.norm() - 1.0));
    if (retain_states) traj.states.emplace_back(psi.data(), psi.data() + n);
    if (observer) observer(k, times[k], std::span<const Complex>(psi.data(), sector.dim()));
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Observables
// ---------------------------------------------------------------------------

std::vector<double> populations(const BasisSector& sector, std::span<const Complex> psi) {
  if (psi.size() != sector.dim()) throw DomainError("state length does not match the sector");
  std::vector<double> n(static_cast<std::size_t>(sector.sites()), 0.0);
  sector.for_each([&](Index u, Word w) {
    const double p = std::norm(psi[u]);
    while (w) {
      n[static_cast<std::size_t>(std::countr_zero(w))] += p;
      w &= w - 1;
    }
  });
  return n;
}

double imbalance(const BasisSector& sector, Word initial, std::span<const Complex> psi) {
  if (!sector.contains(initial)) throw DomainError("initial word is outside the sector");
  const auto n = populations(sector, psi);
  double sum = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double s0 = ((initial >> i) & 1U) ? 1.0 : -1.0;
    sum += s0 * (2.0 * n[i] - 1.0);
  }
  return sum / static_cast<double>(n.size());
}

double fidelity(std::span<const Complex> phi, std::span<const Complex> psi) {
  if (phi.size() != psi.size()) throw DomainError("state lengths differ");
  const auto n = static_cast<Eigen::Index>(phi.size());
  return std::norm(CMap(phi.data(), n).dot(CMap(psi.data(), n)));
}

std::vector<std::vector<double>> site_populations(const Trajectory& traj, const BasisSector& sector) {
  if (traj.states.size() != traj.times.size()) throw StateError("trajectory did not retain its states");
  std::vector<std::vector<double>> out;
  for (const auto& s : traj.states) out.push_back(populations(sector, s));
  return out;
}

std::vector<double> imbalance(const Trajectory& traj, const BasisSector& sector) {
  if (!traj.psi0_word) throw DomainError("imbalance needs a computational basis initial state");
  if (traj.states.size() != traj.times.size()) throw StateError("trajectory did not retain its states");
  std::vector<double> out;
  for (const auto& s : traj.states) out.push_back(imbalance(sector, *traj.psi0_word, s));
  return out;
}

std::vector<double> global_fidelity(const Trajectory& traj) {
  if (traj.states.size() != traj.times.size()) throw StateError("trajectory did not retain its states");
  std::vector<double> out;
  for (const auto& s : traj.states) out.push_back(fidelity(traj.psi0, s));
  return out;
}

// ---------------------------------------------------------------------------
// Reduced density matrices
// ---------------------------------------------------------------------------

namespace {

/// Coefficient matrices M_k (A configurations with k photons x complement configurations).
template <class T>
struct SchmidtBlocks {
  using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  std::vector<Matrix> m;
  std::vector<std::vector<std::uint32_t>> configs;  ///< A-local words of each block's rows
};

template <class T>
SchmidtBlocks<T> schmidt_blocks(const SubsystemMap& map, std::span<const T> psi) {
  if (psi.size() != map.dim()) throw DomainError("state length does not match the subsystem map");
  const int na = map.subsystem_size();
  const int N = map.photons();
  SchmidtBlocks<T> out;
  out.m.resize(static_cast<std::size_t>(na + 1));
  out.configs.resize(static_cast<std::size_t>(na + 1));
  std::vector<std::uint32_t> row_of(std::size_t{1} << na);
  for (std::uint32_t a = 0; a < (1U << na); ++a) {
    auto& c = out.configs[static_cast<std::size_t>(std::popcount(a))];
    row_of[a] = static_cast<std::uint32_t>(c.size());
    c.push_back(a);
  }
  for (int k = 0; k <= na; ++k) {
    out.m[k] = SchmidtBlocks<T>::Matrix::Zero(static_cast<Eigen::Index>(out.configs[k].size()),
                                              static_cast<Eigen::Index>(map.complement_class_size(N - k)));
  }
  for (Index u = 0; u < map.dim(); ++u) {
    const std::uint32_t a = map.local(u);
    out.m[static_cast<std::size_t>(std::popcount(a))](row_of[a], map.complement(u)) = psi[u];
  }
  return out;
}

template <class T>
DensityMatrix rdm_impl(const SubsystemMap& map, std::span<const T> psi) {
  const auto blocks = schmidt_blocks(map, psi);
  DensityMatrix out;
  out.sites.assign(map.sites().begin(), map.sites().end());
  const auto d = static_cast<Eigen::Index>(std::size_t{1} << map.subsystem_size());
  out.rho = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t k = 0; k < blocks.m.size(); ++k) {
    if (blocks.m[k].size() == 0) continue;
    const Eigen::MatrixXcd m = blocks.m[k].template cast<Complex>();
    const Eigen::MatrixXcd r = m * m.adjoint();
    const auto& cfg = blocks.configs[k];
    for (std::size_t p = 0; p < cfg.size(); ++p) {
      for (std::size_t q = 0; q < cfg.size(); ++q) {
        out.rho(cfg[p], cfg[q]) = r(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      }
    }
  }
  return out;
}

double entropy_of(const Eigen::VectorXd& eigenvalues) {
  double s = 0.0;
  for (Eigen::Index r = 0; r < eigenvalues.size(); ++r) {
    const double p = eigenvalues(r);
    if (p > 1e-14) s -= p * std::log(p);
  }
  return s;
}

template <class T>
double entropy_impl(const SubsystemMap& map, std::span<const T> psi) {
  const auto blocks = schmidt_blocks(map, psi);
  double s = 0.0;
  using Matrix = typename SchmidtBlocks<T>::Matrix;
  for (const auto& m : blocks.m) {
    if (m.size() == 0) continue;
    const Matrix gram = m.rows() <= m.cols() ? Matrix(m * m.adjoint()) : Matrix(m.adjoint() * m);
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    s += entropy_of(es.eigenvalues());
  }
  return s;
}

}  // namespace

DensityMatrix reduced_density_matrix(const SubsystemMap& map, std::span<const Complex> psi) { return rdm_impl(map, psi); }
DensityMatrix reduced_density_matrix(const SubsystemMap& map, std::span<const double> psi) { return rdm_impl(map, psi); }

double entropy_vn(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.rho, Eigen::EigenvaluesOnly);
  return entropy_of(es.eigenvalues());
}

double entanglement_entropy(const SubsystemMap& map, std::span<const Complex> psi) { return entropy_impl(map, psi); }
double entanglement_entropy(const SubsystemMap& map, std::span<const double> psi) { return entropy_impl(map, psi); }

double subsystem_fidelity(const DensityMatrix& rho, Word local) {
  if (local >= static_cast<Word>(rho.rho.rows())) throw DomainError("local configuration outside the subsystem");
  const auto i = static_cast<Eigen::Index>(local);
  return rho.rho(i, i).real();
}

double subsystem_fidelity(const DensityMatrix& rho, const Eigen::VectorXcd& phi) {
  if (phi.size() != rho.rho.rows()) throw DomainError("subsystem vector has the wrong length");
  return phi.dot(rho.rho * phi).real();
}

// ---------------------------------------------------------------------------
// Streaming observables
// ---------------------------------------------------------------------------

ObservableRecorder::ObservableRecorder(const BasisSector& sector, Word psi0, std::vector<int> subsystem,
                                       bool record_populations)
    : sector_(&sector), psi0_(psi0), psi0_rank_(sector.rank(psi0)), record_populations_(record_populations) {
  if (!subsystem.empty()) {
    local0_ = gather_bits(psi0, subsystem);
    map_.emplace(sector, std::move(subsystem));
  }
}

void ObservableRecorder::operator()(std::size_t, double t, std::span<const Complex> psi) {
  const auto n = populations(*sector_, psi);
  double imb = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) imb += (((psi0_ >> i) & 1U) ? 1.0 : -1.0) * (2.0 * n[i] - 1.0);
  series_.t.push_back(t);
  series_.imbalance.push_back(imb / static_cast<double>(n.size()));
  series_.fidelity.push_back(std::norm(psi[psi0_rank_]));
  if (map_) {
    const DensityMatrix rho = reduced_density_matrix(*map_, psi);
    series_.subsystem_fidelity.push_back(subsystem_fidelity(rho, local0_));
    series_.entropy.push_back(entropy_vn(rho));
  }
  if (record_populations_) series_.populations.push_back(n);
}

StateObserver ObservableRecorder::observer() {
  return [this](std::size_t k, double t, std::span<const Complex> psi) { (*this)(k, t, psi); };
}

std::vector<double> uniform_times(double t_max, double dt) {
  if (!(dt > 0.0) || !(t_max >= 0.0)) throw DomainError("time grid needs dt > 0 and t_max >= 0");
  const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
  std::vector<double> t(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) t[k] = static_cast<double>(k) * dt;
  return t;
}

}  // namespace hyperscar
