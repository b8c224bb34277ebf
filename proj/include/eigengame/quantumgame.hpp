// Copyright 2026 The eigengame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Parameterized players over a Pauli-sum Hamiltonian: QuantumGame (parent
// penalties from the interference circuit), VQD (overlap penalties from the
// SwapTest), and Hotelling-deflation VQE.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "eigengame/errors.hpp"
#include "eigengame/hamiltonian.hpp"
#include "eigengame/hashing.hpp"
#include "eigengame/pauli.hpp"
#include "eigengame/quantum_sim.hpp"

namespace eigengame {

inline constexpr double kQuantumDegenerateParent = 1e-10;

enum class Direction { maximize, minimize };

inline const char* to_string(Direction d) { return d == Direction::maximize ? "maximize" : "minimize"; }

/// The operator the ascent loop actually plays on: G = sign * M + shift * I.
/// Minimizing M is maximizing G = s I - M; the shift s keeps G positive
/// definite so parent eigenvalues are safe divisors.
struct GameOperator {
  PauliSum game;
  double sign = 1.0;
  double shift = 0.0;

  /// Maps an eigenvalue of G back to the energy scale of M.
  double to_energy(double game_value) const { return (game_value - shift) / sign; }
  double to_game(double energy) const { return sign * energy + shift; }
};

/// Safety factor on the Pauli l1 norm used as the default minimize shift.
inline constexpr double kShiftMargin = 1.25;

inline GameOperator make_game_operator(const PauliSum& m, Direction direction,
                                       std::optional<double> shift = std::nullopt) {
  GameOperator op;
  if (direction == Direction::minimize) {
    op.sign = -1.0;
    op.shift = shift.value_or(kShiftMargin * m.coefficient_l1_norm());
    op.game = m.scaled(-1.0).shifted(op.shift);
  } else {
    op.shift = shift.value_or(0.0);
    op.game = op.shift != 0.0 ? m.shifted(op.shift) : m;
  }
  return op;
}

/// A frozen, converged player: its parameters, its cached eigenvalue on the
/// game operator, and the prepared state.
struct QuantumParent {
  ParameterTensor theta;
  double eigenvalue = 0.0;
  StateVector state = StateVector::zero(1);
};

using QuantumParentList = std::vector<QuantumParent>;

inline QuantumParent make_quantum_parent(const PauliSum& game, const AnsatzSpec& spec, ParameterTensor theta,
                                         ShotSampler* sampler = nullptr) {
  StateVector psi = apply_ansatz(spec, theta);
  const double value = measured_expectation(game, psi, sampler);
  return {std::move(theta), value, std::move(psi)};
}

struct UtilityTerms {
  double energy = 0.0;       // <psi_r|G|psi_r>, as measured
  double penalty = 0.0;      // sum_j |<psi_r|G|psi_j>|^2 / lambda_j
  double imag_residue = 0.0; // max_j |Im <psi_r|G|psi_j>|
  double utility() const { return energy - penalty; }
};

/// Utility of player r: <psi_r|G|psi_r> - sum_j |<psi_r|G|psi_j>|^2 / lambda_j.
/// The cross terms come from the interference circuit; every expectation is
/// passed through `sampler` when one is given.
inline UtilityTerms quantum_utility_terms(const PauliSum& game, const StateVector& psi_r,
                                          const QuantumParentList& parents, ShotSampler* sampler = nullptr) {
  UtilityTerms terms;
  terms.energy = measured_expectation(game, psi_r, sampler);
  for (std::size_t j = 0; j < parents.size(); ++j) {
    const double lambda = parents[j].eigenvalue;
    if (!(std::abs(lambda) >= kQuantumDegenerateParent)) {
      throw DegenerateParentError("parent " + std::to_string(j + 1) + " has eigenvalue " + std::to_string(lambda));
    }
    const Complex z = mixed_expectation(game, psi_r, parents[j].state, sampler);
    terms.penalty += std::norm(z) / lambda;
    terms.imag_residue = std::max(terms.imag_residue, std::abs(z.imag()));
  }
  return terms;
}

inline double quantum_utility(const PauliSum& game, const AnsatzSpec& spec, const ParameterTensor& theta_r,
                              const QuantumParentList& parents, ShotSampler* sampler = nullptr) {
  return quantum_utility_terms(game, apply_ansatz(spec, theta_r), parents, sampler).utility();
}

struct SolverConfig {
  double eta = 0.0;                 // 0 selects 1 / (2 L), L the Pauli l1 norm of the played operator
  std::size_t max_iterations = 1000;
  double grad_tolerance = 1e-2;
  ShotModel shots = ShotModel::exact();
  Direction direction = Direction::maximize;
  std::optional<double> beta;       // VQD penalty weight
  bool adaptive_regularization = false;
  std::optional<double> spectral_shift;

  void validate() const {
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidArgumentError("eta must be > 0 (or 0 for auto)");
    if (max_iterations < 1) throw InvalidArgumentError("max_iterations must be >= 1");
    if (!(grad_tolerance > 0.0)) throw InvalidArgumentError("grad_tolerance must be > 0");
    if (beta && !(*beta >= 0.0)) throw InvalidArgumentError("beta must be >= 0");
  }

  double step_for(double lipschitz) const { return eta > 0.0 ? eta : 1.0 / (2.0 * lipschitz); }
};

struct QuantumIterationRecord {
  std::size_t player = 1;
  std::size_t iteration = 0;
  double energy = 0.0;       // on the scale of M
  double utility = 0.0;
  double grad_norm = 0.0;
};

using QuantumObserver = std::function<void(const QuantumIterationRecord&)>;

struct QuantumPlayerState {
  std::size_t index = 1;
  ParameterTensor theta;
  QuantumParentList parents;
  std::size_t iterations_used = 0;
  bool converged = false;
  double energy = 0.0;              // exact <psi|M|psi> of the final state
  double measured_energy = 0.0;     // as measured under the shot model
  double energy_variance = 0.0;     // Var(M) in the final state
  double game_eigenvalue = 0.0;     // cached <psi|G|psi> broadcast to children
  std::vector<double> energy_history;
  std::vector<double> utility_history;
  std::vector<double> grad_norm_history;
};

struct QuantumPlayerOptions {
  std::size_t index = 1;
  std::uint64_t stream = 0;   // shot-sampler stream
  QuantumObserver observer;
};

namespace detail {

using CostFunction = std::function<double(const ParameterTensor&, ShotSampler*)>;

/// Gradient ascent on `cost` with parameter-shift gradients; shared by the
/// QuantumGame and VQD players. `energy_of` maps a measured cost evaluation
/// at theta to an energy for telemetry.
inline QuantumPlayerState ascend(const PauliSum& m, const AnsatzSpec& spec, ParameterTensor theta,
                                 const CostFunction& cost, const std::function<double(const ParameterTensor&, ShotSampler*)>& energy_of,
                                 double step, const SolverConfig& cfg, const QuantumPlayerOptions& options) {
  theta.bind_check(spec);
  std::optional<ShotSampler> sampler;
  if (!cfg.shots.is_exact()) sampler.emplace(cfg.shots, options.stream);
  ShotSampler* s = sampler ? &*sampler : nullptr;

  QuantumPlayerState state;
  state.index = options.index;
  const ParameterObjective objective = [&](const ParameterTensor& t) { return cost(t, s); };
  for (std::size_t t = 0;; ++t) {
    const double u = cost(theta, s);
    if (!std::isfinite(u)) throw NumericalOverflowError("utility became non-finite");
    const double e = energy_of(theta, s);
    const Eigen::VectorXd grad = parameter_shift_gradient(objective, theta);
    const double gnorm = grad.norm();
    if (!std::isfinite(gnorm)) throw NumericalOverflowError("gradient became non-finite");
    state.utility_history.push_back(u);
    state.energy_history.push_back(e);
    state.grad_norm_history.push_back(gnorm);
    if (options.observer) options.observer({state.index, t, e, u, gnorm});
    if (gnorm <= cfg.grad_tolerance) {
      state.converged = true;
      break;
    }
    if (t >= cfg.max_iterations) break;
    theta.values() += step * grad;
    state.iterations_used = t + 1;
  }
  const StateVector psi = apply_ansatz(spec, theta);
  state.energy = expectation(m, psi);
  state.energy_variance = variance(m, psi);
  state.measured_energy = measured_expectation(m, psi, s);
  state.theta = std::move(theta);
  return state;
}

}  // namespace detail

/// One QuantumGame player: ascent on the parent-penalized utility of the
/// game operator until the parameter-shift gradient norm is below tolerance.
inline QuantumPlayerState quantumgame_player(const PauliSum& m, const GameOperator& op, const AnsatzSpec& spec,
                                             ParameterTensor theta_init, QuantumParentList parents,
                                             const SolverConfig& cfg, const QuantumPlayerOptions& options = {}) {
  cfg.validate();
  if (m.num_qubits() != spec.num_qubits()) throw DimensionMismatchError("ansatz and Hamiltonian qubit counts differ");
  const double step = cfg.step_for(op.game.coefficient_l1_norm());
  const auto cost = [&](const ParameterTensor& t, ShotSampler* s) {
    return quantum_utility(op.game, spec, t, parents, s);
  };
  const auto energy_of = [&](const ParameterTensor& t, ShotSampler* s) {
    return op.to_energy(measured_expectation(op.game, apply_ansatz(spec, t), s));
  };
  auto state = detail::ascend(m, spec, std::move(theta_init), cost, energy_of, step, cfg, options);
  state.game_eigenvalue = op.to_game(state.measured_energy);
  state.parents = std::move(parents);
  return state;
}

/// Convenience overload that derives the game operator from cfg.
inline QuantumPlayerState quantumgame_player(const PauliSum& m, const AnsatzSpec& spec, ParameterTensor theta_init,
                                             QuantumParentList parents, const SolverConfig& cfg,
                                             const QuantumPlayerOptions& options = {}) {
  return quantumgame_player(m, make_game_operator(m, cfg.direction, cfg.spectral_shift), spec,
                            std::move(theta_init), std::move(parents), cfg, options);
}

/// VQD penalty weights: cfg.beta for every parent, or, in adaptive mode,
/// beta_j = 2 (lambda_max_est - lambda_j) with lambda_max_est the largest of
/// the found energies and the Pauli l1 bound on ||M||.
inline std::vector<double> vqd_betas(const PauliSum& m, const std::vector<double>& parent_energies,
                                     const SolverConfig& cfg) {
  std::vector<double> betas;
  if (cfg.adaptive_regularization) {
    double top = m.coefficient_l1_norm();
    for (double e : parent_energies) top = std::max(top, e);
    for (double e : parent_energies) betas.push_back(2.0 * (top - e));
  } else {
    if (!cfg.beta && !parent_energies.empty()) {
      throw InvalidArgumentError("VQD needs beta or adaptive_regularization");
    }
    betas.assign(parent_energies.size(), cfg.beta.value_or(0.0));
  }
  return betas;
}

/// One VQD player: minimizes <M> + sum_j beta_j |<psi|psi_j>|^2 with the
/// overlaps from the SwapTest. `parents` carry energies of M, not of G.
inline QuantumPlayerState vqd_player(const PauliSum& m, const AnsatzSpec& spec, ParameterTensor theta_init,
                                     QuantumParentList parents, const SolverConfig& cfg,
                                     const QuantumPlayerOptions& options = {}) {
  cfg.validate();
  if (m.num_qubits() != spec.num_qubits()) throw DimensionMismatchError("ansatz and Hamiltonian qubit counts differ");
  std::vector<double> energies;
  for (const auto& p : parents) energies.push_back(p.eigenvalue);
  const std::vector<double> betas = vqd_betas(m, energies, cfg);
  double lipschitz = m.coefficient_l1_norm();
  for (double b : betas) lipschitz += b;
  const double step = cfg.step_for(lipschitz);

  // Ascent on the negated cost.
  const auto cost = [&](const ParameterTensor& t, ShotSampler* s) {
    const StateVector psi = apply_ansatz(spec, t);
    double c = measured_expectation(m, psi, s);
    for (std::size_t j = 0; j < parents.size(); ++j) c += betas[j] * swap_test_overlap(psi, parents[j].state, s);
    return -c;
  };
  const auto energy_of = [&](const ParameterTensor& t, ShotSampler* s) {
    return measured_expectation(m, apply_ansatz(spec, t), s);
  };
  auto state = detail::ascend(m, spec, std::move(theta_init), cost, energy_of, step, cfg, options);
  state.game_eigenvalue = state.measured_energy;
  state.parents = std::move(parents);
  return state;
}

// ---------------------------------------------------------------------------
// Sequential drivers

enum class QuantumAlgorithm { quantumgame, vqd };

inline const char* to_string(QuantumAlgorithm a) { return a == QuantumAlgorithm::quantumgame ? "quantumgame" : "vqd"; }

struct QuantumLevel {
  double energy = 0.0;
  QuantumPlayerState state;
  std::size_t cumulative_iterations = 0;   // through the end of this player
};

struct QuantumRunResult {
  std::vector<QuantumLevel> levels;
  std::optional<QuantumPlayerState> failed;
  bool converged = false;
  std::size_t total_iterations = 0;
  std::uint64_t hamiltonian_hash_before = 0;
  std::uint64_t hamiltonian_hash_after = 0;
  GameOperator game;
};

/// Seeded starting parameters for player r.
inline ParameterTensor initial_parameters(const AnsatzSpec& spec, std::uint64_t seed, std::size_t player) {
  return ParameterTensor::random(spec, seed * 0x9e3779b97f4a7c15ULL + player);
}

struct QuantumRunOptions {
  QuantumObserver observer;
  bool stop_on_failure = false;   // otherwise unconverged players still broadcast
};

/// Players 1..k in order; each finished player's (theta, eigenvalue) joins
/// the parent set of every later player. M is only read.
inline QuantumRunResult run_sequential_quantum(const PauliSum& m, const AnsatzSpec& spec, const SolverConfig& cfg,
                                               std::size_t k, std::uint64_t seed, QuantumAlgorithm algorithm,
                                               const QuantumRunOptions& options = {}) {
  cfg.validate();
  if (k < 1 || k > m.dim()) throw InvalidArgumentError("k must be in [1, 2^q]");
  QuantumRunResult result;
  result.hamiltonian_hash_before = hash_of(m);
  result.game = make_game_operator(m, algorithm == QuantumAlgorithm::vqd ? Direction::maximize : cfg.direction,
                                   algorithm == QuantumAlgorithm::vqd ? std::nullopt : cfg.spectral_shift);
  QuantumParentList parents;
  bool all_converged = true;
  for (std::size_t r = 1; r <= k; ++r) {
    QuantumPlayerOptions popts;
    popts.index = r;
    popts.stream = r;
    popts.observer = options.observer;
    auto state = algorithm == QuantumAlgorithm::quantumgame
                     ? quantumgame_player(m, result.game, spec, initial_parameters(spec, seed, r), parents, cfg, popts)
                     : vqd_player(m, spec, initial_parameters(spec, seed, r), parents, cfg, popts);
    result.total_iterations += state.iterations_used;
    all_converged = all_converged && state.converged;
    if (!state.converged && options.stop_on_failure) {
      result.failed = std::move(state);
      break;
    }
    QuantumParent parent;
    parent.theta = state.theta;
    parent.state = apply_ansatz(spec, state.theta);
    parent.eigenvalue = state.game_eigenvalue;
    parents.push_back(std::move(parent));
    const double energy = state.measured_energy;
    result.levels.push_back({energy, std::move(state), result.total_iterations});
  }
  result.converged = all_converged && !result.failed;
  result.hamiltonian_hash_after = hash_of(m);
  return result;
}

inline QuantumRunResult run_quantumgame(const PauliSum& m, const AnsatzSpec& spec, const SolverConfig& cfg,
                                        std::size_t k, std::uint64_t seed, const QuantumRunOptions& options = {}) {
  return run_sequential_quantum(m, spec, cfg, k, seed, QuantumAlgorithm::quantumgame, options);
}

inline QuantumRunResult run_vqd(const PauliSum& m, const AnsatzSpec& spec, const SolverConfig& cfg, std::size_t k,
                                std::uint64_t seed, const QuantumRunOptions& options = {}) {
  return run_sequential_quantum(m, spec, cfg, k, seed, QuantumAlgorithm::vqd, options);
}

inline void write_quantum_header(std::ostream& out) {
  out << "player,iteration,cumulative_iteration,energy,utility,grad_norm,shots\n";
}

inline void write_quantum_row(std::ostream& out, const QuantumIterationRecord& rec, std::size_t cumulative,
                              const ShotModel& shots) {
  out << rec.player << ',' << rec.iteration << ',' << cumulative << ',' << format_coefficient(rec.energy) << ','
      << format_coefficient(rec.utility) << ',' << format_coefficient(rec.grad_norm) << ',' << shots.label() << '\n';
}

// ---------------------------------------------------------------------------
// Deflation VQE

struct VqeOutcome {
  Eigen::VectorXcd vector;
  bool converged = true;
  std::size_t iterations = 0;
};

/// Any single-component maximizer of <psi|A|psi>, given an iteration budget.
using VqeSolver = std::function<VqeOutcome(const ComplexHermitianMatrix&, std::size_t)>;

/// Top eigenvector from the dense oracle.
inline VqeSolver exact_vqe_solver() {
  return [](const ComplexHermitianMatrix& a, std::size_t) {
    return VqeOutcome{exact_eigendecomposition(a).vector(0), true, 0};
  };
}

/// Parameter-shift ascent of <psi(theta)|A|psi(theta)> on a dense A.
inline VqeSolver ansatz_vqe_solver(AnsatzSpec spec, SolverConfig cfg, std::uint64_t seed) {
  return [spec = std::move(spec), cfg, seed](const ComplexHermitianMatrix& a, std::size_t t) {
    if (a.dim() != (Eigen::Index{1} << spec.num_qubits())) {
      throw DimensionMismatchError("ansatz does not match matrix dimension");
    }
    const auto objective = [&](const ParameterTensor& th) {
      const auto psi = apply_ansatz(spec, th).amplitudes();
      return psi.dot(a.entries() * psi).real();
    };
    const double step = cfg.step_for(a.entries().cwiseAbs().rowwise().sum().maxCoeff());
    ParameterTensor theta = ParameterTensor::random(spec, seed);
    VqeOutcome out;
    out.converged = false;
    for (std::size_t it = 0;; ++it) {
      const Eigen::VectorXd g = parameter_shift_gradient(objective, theta);
      if (g.norm() <= cfg.grad_tolerance) {
        out.converged = true;
        break;
      }
      if (it >= t) break;
      theta.values() += step * g;
      out.iterations = it + 1;
    }
    out.vector = apply_ansatz(spec, theta).amplitudes();
    return out;
  };
}

struct DeflationLevel {
  double eigenvalue = 0.0;
  Eigen::VectorXcd vector;
  std::size_t iterations = 0;
};

struct DeflationResult {
  std::vector<DeflationLevel> levels;
  std::vector<ComplexHermitianMatrix> deflated;   // M_1, M_2, ... as used at each level
  bool converged = true;
  std::optional<std::size_t> failed_level;        // 1-based
};

/// M_{j+1} = M_j - lambda_j |psi_j><psi_j| with lambda_j = <psi_j|M_j|psi_j>
/// and psi_j the solver's maximizer of M_j. Works on private copies of m.
inline DeflationResult deflation_vqe(const ComplexHermitianMatrix& m, std::size_t k, const VqeSolver& solver,
                                     std::size_t t) {
  if (k < 1 || k > static_cast<std::size_t>(m.dim())) throw InvalidArgumentError("k must be in [1, dim]");
  DeflationResult result;
  Eigen::MatrixXcd current = m.entries();
  for (std::size_t j = 1; j <= k; ++j) {
    const ComplexHermitianMatrix level(current, 1e-9);
    result.deflated.push_back(level);
    VqeOutcome out = solver(level, t);
    const Eigen::VectorXcd psi = out.vector.normalized();
    const double lambda = psi.dot(current * psi).real();
    result.levels.push_back({lambda, psi, out.iterations});
    if (!out.converged) {
      result.converged = false;
      result.failed_level = j;
      break;
    }
    current -= lambda * psi * psi.adjoint();
    current = (0.5 * (current + current.adjoint())).eval();
  }
  return result;
}

}  // namespace eigengame
