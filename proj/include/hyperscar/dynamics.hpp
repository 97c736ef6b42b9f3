// Copyright 2026 The hyperscar Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file dynamics.hpp
 * @brief Quench evolution psi(t) = exp(-iHt) psi0 and time-dependent observables.
 *
 * Times are in ns and H in rad/ns. Two propagators are provided: an adaptive
 * Lanczos-Krylov integrator that needs only matrix-vector products, and a
 * dense spectral propagator used as the reference at small dimensions.
 */

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperscar/hamiltonian.hpp"
#include "hyperscar/hilbert.hpp"
#include "hyperscar/spectral.hpp"

namespace hyperscar {

struct KrylovOptions {
  double tol = 1e-9;        ///< local error bound per step, in state norm
  int max_dim = 30;         ///< Krylov subspace dimension
  int max_halvings = 30;    ///< step subdivisions before giving up
  bool monitor_invariants = true;
};

/// Called once per output time with the propagated state; the span is only valid during the call.
using StateObserver = std::function<void(std::size_t k, double t, std::span<const Complex> psi)>;

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<Complex>> states;  ///< empty unless retained
  std::vector<Complex> psi0;
  std::optional<Word> psi0_word;  ///< set when psi0 is a computational basis state

  std::string method;
  double tol = 0.0;
  int krylov_dim = 0;
  std::size_t matvecs = 0;
  std::size_t krylov_bases = 0;
  double energy0 = 0.0;             ///< <psi0|H|psi0>, rad/ns
  double max_norm_deviation = 0.0;  ///< max | ||psi(t)|| - 1 |
  double max_energy_drift = 0.0;    ///< max |E(t) - E0| / max(|E0|, ||H psi0||)
};

/// Unit vector of a basis word. Throws DomainError if the word is outside the sector.
[[nodiscard]] std::vector<Complex> basis_vector(const BasisSector& sector, Word w);

/// The basis word psi equals up to a phase (within 1e-12), if any.
[[nodiscard]] std::optional<Word> as_basis_state(const BasisSector& sector, std::span<const Complex> psi);

/**
 * Adaptive Krylov propagation. One Lanczos basis (full reorthogonalization) is
 * reused for as many output times as its a posteriori error estimate
 * beta_m |[exp(-i T tau) e_1]_m| allows; otherwise the step is halved and the
 * basis rebuilt. Throws DomainError for unnormalized psi0 or unsorted/negative
 * times, NumericalError when no admissible step is found or invariants drift.
 */
[[nodiscard]] Trajectory evolve_krylov(const SparseHamiltonian& H, std::span<const Complex> psi0,
                                       std::span<const double> times, const KrylovOptions& options = {},
                                       bool retain_states = true, const StateObserver& observer = {});

/// Largest dimension evolve_dense diagonalizes.
inline constexpr Index kDenseEvolutionLimit = 20'000;

/// Exact propagation through a full eigendecomposition. Throws CapacityError above kDenseEvolutionLimit.
[[nodiscard]] Trajectory evolve_dense(const SparseHamiltonian& H, std::span<const Complex> psi0,
                                      std::span<const double> times, bool retain_states = true,
                                      const StateObserver& observer = {});

/// Same, with a precomputed eigensystem (vectors required).
[[nodiscard]] Trajectory evolve_dense(const Eigensystem& eig, const BasisSector& sector, std::span<const Complex> psi0,
                                      std::span<const double> times, bool retain_states = true,
                                      const StateObserver& observer = {});

/// n_i = <psi|n_i|psi> for every site.
[[nodiscard]] std::vector<double> populations(const BasisSector& sector, std::span<const Complex> psi);

/// (1/L) sum_i s_i(0) (2 n_i - 1) for initial basis word `initial`.
[[nodiscard]] double imbalance(const BasisSector& sector, Word initial, std::span<const Complex> psi);

/// |<phi|psi>|^2.
[[nodiscard]] double fidelity(std::span<const Complex> phi, std::span<const Complex> psi);

/// Rows indexed by retained time. Throw StateError when states were not retained.
[[nodiscard]] std::vector<std::vector<double>> site_populations(const Trajectory& traj, const BasisSector& sector);
/// Throws DomainError when psi0 is not a computational basis state.
[[nodiscard]] std::vector<double> imbalance(const Trajectory& traj, const BasisSector& sector);
[[nodiscard]] std::vector<double> global_fidelity(const Trajectory& traj);

struct DensityMatrix {
  std::vector<int> sites;
  Eigen::MatrixXcd rho;  ///< 2^|A| square, indexed by A-local occupation (bit k = sites[k])
};

/// rho_A = Tr_B |psi><psi|, assembled block by block in the A photon number.
[[nodiscard]] DensityMatrix reduced_density_matrix(const SubsystemMap& map, std::span<const Complex> psi);
[[nodiscard]] DensityMatrix reduced_density_matrix(const SubsystemMap& map, std::span<const double> psi);

/// -Tr rho ln rho; eigenvalues below 1e-14 contribute nothing.
[[nodiscard]] double entropy_vn(const DensityMatrix& rho);

/// Entropy of the cut straight from the state, diagonalizing only the photon-number blocks.
[[nodiscard]] double entanglement_entropy(const SubsystemMap& map, std::span<const Complex> psi);
[[nodiscard]] double entanglement_entropy(const SubsystemMap& map, std::span<const double> psi);

/// <phi_A|rho_A|phi_A> for the product configuration `local` (bit k = occupation of sites[k]).
[[nodiscard]] double subsystem_fidelity(const DensityMatrix& rho, Word local);
/// <phi|rho|phi> for a general normalized vector on A.
[[nodiscard]] double subsystem_fidelity(const DensityMatrix& rho, const Eigen::VectorXcd& phi);

/// Observables collected per output time.
struct ObservableSeries {
  std::vector<double> t;
  std::vector<double> imbalance;
  std::vector<double> fidelity;
  std::vector<double> subsystem_fidelity;  ///< empty without a subsystem
  std::vector<double> entropy;             ///< S_A, empty without a subsystem
  std::vector<std::vector<double>> populations;
};

/**
 * Streaming observer: computes I, F, F_A, S_A and n_i from each state as it
 * is produced, so long runs need not retain states.
 */
class ObservableRecorder {
 public:
  /// `subsystem` may be empty; otherwise F_A uses the configuration of psi0 on A.
  ObservableRecorder(const BasisSector& sector, Word psi0, std::vector<int> subsystem = {},
                     bool record_populations = true);

  void operator()(std::size_t k, double t, std::span<const Complex> psi);
  [[nodiscard]] StateObserver observer();
  [[nodiscard]] const ObservableSeries& series() const noexcept { return series_; }

 private:
  const BasisSector* sector_;
  Word psi0_;
  Index psi0_rank_;
  std::optional<SubsystemMap> map_;
  Word local0_ = 0;
  bool record_populations_;
  ObservableSeries series_;
};

/// t = 0, dt, ..., t_max (inclusive when t_max is a multiple of dt to 1e-9).
[[nodiscard]] std::vector<double> uniform_times(double t_max, double dt);

}  // namespace hyperscar
