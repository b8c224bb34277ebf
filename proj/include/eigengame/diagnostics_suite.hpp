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


// Property suites that check sampled quantities against the diagnostic
// bounds, and the CSV report they produce.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eigengame/classical.hpp"
#include "eigengame/diagnostics.hpp"
#include "eigengame/hamiltonian.hpp"
#include "eigengame/quantumgame.hpp"

namespace eigengame {

struct DiagnosticRow {
  std::string bound;
  std::string parameters;   // key=value pairs separated by ';'
  double bound_value = 0.0;
  double measured_value = 0.0;
  bool pass = false;
};

struct DiagnosticsConfig {
  std::uint64_t seed = 1;
  std::size_t lipschitz_samples = 1000;
  std::vector<Eigen::Index> lipschitz_dims{4, 8, 16};
  double sigma = 1e-3;
  double c = kMaxAccuracyConstant;
  double exponent = kDefaultPowerLawExponent;
  double min_gap = 1e-6;
  std::vector<double> epsilons{1e-4, 1e-3, 1e-2};
  std::size_t error_trials = 5;
  Eigen::Index error_dim = 8;
  std::size_t error_parents = 3;
  double slope_low = 0.8;
  double slope_high = 1.2;
  std::vector<Eigen::Index> convergence_dims{8, 16};
  std::size_t convergence_seeds = 3;
  std::size_t convergence_players = 4;
  double phi_tol = 1e-2;
  std::size_t quantum_samples = 50;
  std::size_t quantum_layers = 3;
  std::size_t quantum_rotations = 3;
  std::uint64_t ansatz_seed = 6;
  std::optional<PauliSum> hamiltonian;   // quantum suites are skipped without one

  /// Single-sample configuration for quick checks.
  static DiagnosticsConfig smoke() {
    DiagnosticsConfig cfg;
    cfg.lipschitz_samples = 1;
    cfg.lipschitz_dims = {8};
    cfg.error_trials = 1;
    cfg.convergence_dims = {8};
    cfg.convergence_seeds = 1;
    cfg.quantum_samples = 1;
    return cfg;
  }

  void validate() const {
    if (!(min_gap >= PowerLawOptions{}.min_gap)) {
      throw ConfigError("min_gap " + format_coefficient(min_gap) + " is below the 1e-06 floor");
    }
    if (!(c > 0.0 && c <= kMaxAccuracyConstant)) throw ConfigError("c must lie in (0, 1/16]");
    if (!(sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
    if (!(phi_tol > 0.0)) throw ConfigError("phi_tol must be > 0");
    if (epsilons.size() < 2) throw ConfigError("at least two epsilons are needed for a slope");
    for (double e : epsilons) {
      if (!(e > 0.0 && e < 1.0)) throw ConfigError("epsilons must lie in (0, 1)");
    }
    for (auto d : lipschitz_dims) {
      if (d < 2) throw ConfigError("lipschitz dims must be >= 2");
    }
    for (auto d : convergence_dims) {
      if (d < static_cast<Eigen::Index>(convergence_players) + 1) {
        throw ConfigError("convergence dims must exceed the player count");
      }
    }
    if (error_dim < static_cast<Eigen::Index>(error_parents) + 1) throw ConfigError("error_dim too small");
    if (!(slope_low < slope_high)) throw ConfigError("slope band is empty");
  }
};

namespace detail {

inline std::mt19937_64 suite_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x85ebca6bu};
  return std::mt19937_64(seq);
}

inline Eigen::VectorXd gaussian_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

/// cos(phi) v + sin(phi) d with d a random unit direction orthogonal to v.
inline Eigen::VectorXd rotate_away(const Eigen::VectorXd& v, double phi, std::mt19937_64& rng) {
  Eigen::VectorXd d = gaussian_vector(v.size(), rng);
  d -= v.dot(d) * v;
  d.normalize();
  return std::cos(phi) * v + std::sin(phi) * d;
}

inline std::string fmt(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

/// Least-squares slope of log(y) against log(x).
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace detail

/// Sampled gradient and utility norms with accurate parents against L_i(sigma).
inline std::vector<DiagnosticRow> lipschitz_suite(const DiagnosticsConfig& cfg) {
  std::vector<DiagnosticRow> rows;
  PowerLawOptions gen;
  gen.min_gap = cfg.min_gap;
  for (std::size_t s = 0; s < cfg.lipschitz_samples; ++s) {
    const Eigen::Index dim = cfg.lipschitz_dims[s % cfg.lipschitz_dims.size()];
    const std::uint64_t seed = cfg.seed * 1000003ULL + s;
    const auto h = build_powerlaw_hamiltonian<double>(dim, seed, cfg.exponent, gen);
    const auto& eig = h.spectrum.eigenvalues;
    auto rng = detail::suite_rng(seed, 1);
    const auto player = std::uniform_int_distribution<std::size_t>(1, static_cast<std::size_t>(dim - 1))(rng);
    const double diag_norm = h.matrix.entries().diagonal().norm();
    const BoundParams p = bound_params_from_spectrum(eig, player, cfg.c, cfg.sigma, diag_norm);
    double eps = 0.0;
    if (player > 1) eps = std::min(cfg.c * p.gap() / ((player - 1) * p.lambda_top), std::sqrt(0.5));

    ParentList parents;
    for (std::size_t j = 0; j + 1 < player; ++j) {
      const double phi = eps * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      parents.emplace_back(h.matrix, detail::rotate_away(h.spectrum.vector(static_cast<Eigen::Index>(j)), phi, rng));
    }
    const Eigen::VectorXd v = detail::gaussian_vector(dim, rng).normalized();
    const double bound = lipschitz_bound_classical(p);
    const double grad = finite_diff_gradient(v, parents, h.matrix, cfg.sigma).norm();
    const double util = std::abs(utility(v, parents, h.matrix));
    const std::string params = "dim=" + std::to_string(dim) + ";seed=" + std::to_string(seed) +
                               ";i=" + std::to_string(player) + ";eps=" + detail::fmt(eps) +
                               ";sigma=" + detail::fmt(cfg.sigma);
    rows.push_back({"lipschitz_classical", params, bound, grad, grad <= bound});
    rows.push_back({"utility_bound", params, bound, util, util <= bound});
  }
  // Ratio check on the last sampled parameters.
  if (!rows.empty()) {
    BoundParams p;
    p.gaps = {0.5, 0.25};
    p.player_index = 2;
    p.num_layers = 3;
    p.num_qubits = 2;
    BoundParams exact = p;
    exact.sigma = 0.0;
    const double ratio = lipschitz_bound_quantum(p) / lipschitz_bound_classical(exact);
    rows.push_back({"lipschitz_ratio", "l=3;q=2", std::sqrt(6.0), ratio, std::abs(ratio - std::sqrt(6.0)) <= 1e-12});
  }
  return rows;
}

/// Child-gradient error against perturbed parents, per epsilon, plus the
/// log-log slope of both the measurement and the bound.
inline std::vector<DiagnosticRow> error_accumulation_suite(const DiagnosticsConfig& cfg) {
  std::vector<DiagnosticRow> rows;
  PowerLawOptions gen;
  gen.min_gap = cfg.min_gap;
  for (std::size_t t = 0; t < cfg.error_trials; ++t) {
    const std::uint64_t seed = cfg.seed * 7919ULL + t;
    const auto h = build_powerlaw_hamiltonian<double>(cfg.error_dim, seed, cfg.exponent, gen);
    auto rng = detail::suite_rng(seed, 2);
    std::vector<Eigen::VectorXd> truth;
    std::vector<Eigen::VectorXd> directions;
    for (std::size_t j = 0; j < cfg.error_parents; ++j) {
      truth.push_back(h.spectrum.vector(static_cast<Eigen::Index>(j)));
      Eigen::VectorXd d = detail::gaussian_vector(cfg.error_dim, rng);
      d -= truth.back().dot(d) * truth.back();
      directions.push_back(d.normalized());
    }
    const Eigen::VectorXd child = detail::gaussian_vector(cfg.error_dim, rng).normalized();
    ParentList exact_parents;
    for (const auto& v : truth) exact_parents.emplace_back(h.matrix, v);
    const Eigen::VectorXd reference = finite_diff_gradient(child, exact_parents, h.matrix, cfg.sigma);

    std::vector<double> measured;
    std::vector<double> bounds;
    for (double eps : cfg.epsilons) {
      std::vector<Eigen::VectorXd> hat;
      ParentList hat_parents;
      for (std::size_t j = 0; j < truth.size(); ++j) {
        hat.push_back(std::cos(eps) * truth[j] + std::sin(eps) * directions[j]);
        hat_parents.emplace_back(h.matrix, hat.back());
      }
      const double err = (finite_diff_gradient(child, hat_parents, h.matrix, cfg.sigma) - reference).norm();
      const double bound = error_accumulation_bound_classical(h.matrix, truth, hat, cfg.sigma);
      measured.push_back(err);
      bounds.push_back(bound);
      rows.push_back({"error_accumulation_classical",
                      "dim=" + std::to_string(cfg.error_dim) + ";seed=" + std::to_string(seed) +
                          ";parents=" + std::to_string(cfg.error_parents) + ";eps=" + detail::fmt(eps),
                      bound, err, err <= bound});
    }
    const std::string band = ";band=" + detail::fmt(cfg.slope_low) + ".." + detail::fmt(cfg.slope_high);
    const std::string params = "dim=" + std::to_string(cfg.error_dim) + ";seed=" + std::to_string(seed) + band;
    const double ms = detail::log_log_slope(cfg.epsilons, measured);
    const double bs = detail::log_log_slope(cfg.epsilons, bounds);
    rows.push_back({"error_slope_measured", params, cfg.slope_high, ms, ms >= cfg.slope_low && ms <= cfg.slope_high});
    rows.push_back({"error_slope_bound", params, cfg.slope_high, bs, bs >= cfg.slope_low && bs <= cfg.slope_high});
  }
  return rows;
}

/// Observed total iterations of both classical modes against T_k.
inline std::vector<DiagnosticRow> convergence_suite(const DiagnosticsConfig& cfg) {
  std::vector<DiagnosticRow> rows;
  PowerLawOptions gen;
  gen.min_gap = cfg.min_gap;
  const double c_k = accuracy_constant_for(cfg.phi_tol);
  for (Eigen::Index dim : cfg.convergence_dims) {
    for (std::size_t s = 0; s < cfg.convergence_seeds; ++s) {
      const std::uint64_t seed = cfg.seed + s;
      const auto h = build_powerlaw_hamiltonian<double>(dim, seed, cfg.exponent, gen);
      GameConfig game;
      game.step_size = default_step_size(h.matrix);
      game.num_players = cfg.convergence_players;
      const double diag_norm = h.matrix.entries().diagonal().norm();
      for (GradientMode mode : {GradientMode::exact, GradientMode::zeroth_order}) {
        const double sigma = mode == GradientMode::exact ? 0.0 : game.sigma;
        std::vector<BoundParams> players;
        for (std::size_t i = 1; i <= cfg.convergence_players; ++i) {
          players.push_back(bound_params_from_spectrum(h.spectrum.eigenvalues, i, c_k, sigma, diag_norm));
        }
        const double bound = iteration_bound_classical(players, cfg.convergence_players, c_k);
        const auto result = run_sequential(h.matrix, game, seed, mode);
        const auto measured = static_cast<double>(result.total_iterations);
        rows.push_back({"iteration_bound_classical",
                        "dim=" + std::to_string(dim) + ";seed=" + std::to_string(seed) + ";mode=" + to_string(mode) +
                            ";k=" + std::to_string(cfg.convergence_players) + ";c_k=" + detail::fmt(c_k),
                        bound, measured, result.converged && measured <= bound});
      }
    }
  }
  return rows;
}

/// Parameter-shift gradients of the QuantumGame utility against L_theta_i
/// (exact parents), and against the error-accumulation bound (perturbed
/// parents). Runs on the shifted game operator of cfg.hamiltonian.
inline std::vector<DiagnosticRow> quantum_suite(const DiagnosticsConfig& cfg) {
  std::vector<DiagnosticRow> rows;
  if (!cfg.hamiltonian) return rows;
  const PauliSum& h = *cfg.hamiltonian;
  const int q = h.num_qubits();
  const auto op = make_game_operator(h, Direction::minimize);
  const auto g_matrix = pauli_sum_to_matrix(op.game);
  const auto spectrum = exact_eigendecomposition(g_matrix);
  const auto& eig = spectrum.eigenvalues;
  const auto spec = AnsatzSpec::random_layers(q, cfg.quantum_layers, cfg.quantum_rotations, cfg.ansatz_seed);
  const Eigen::VectorXd diag = g_matrix.entries().diagonal().real();
  const auto max_player = static_cast<std::size_t>(eig.size() - 1);

  // Exact parents as dense eigenvectors.
  QuantumParentList exact;
  for (Eigen::Index j = 0; j < eig.size(); ++j) {
    QuantumParent p;
    p.state = StateVector::normalized(spectrum.vector(j));
    p.eigenvalue = eig[j];
    exact.push_back(std::move(p));
  }
  for (std::size_t s = 0; s < cfg.quantum_samples; ++s) {
    const std::uint64_t seed = cfg.seed * 104729ULL + s;
    auto rng = detail::suite_rng(seed, 3);
    const auto player = std::uniform_int_distribution<std::size_t>(1, max_player)(rng);
    const QuantumParentList parents(exact.begin(), exact.begin() + static_cast<std::ptrdiff_t>(player - 1));
    const ParameterTensor theta = ParameterTensor::random(spec, seed);
    const ParameterObjective objective = [&](const ParameterTensor& t) {
      return quantum_utility(op.game, spec, t, parents);
    };
    const double grad = parameter_shift_gradient(objective, theta).norm();
    BoundParams p = bound_params_from_spectrum(eig, player, cfg.c, 0.0, diag.norm());
    p.num_layers = cfg.quantum_layers;
    p.num_qubits = static_cast<std::size_t>(q);
    const double bound = lipschitz_bound_quantum(p);
    rows.push_back({"lipschitz_quantum",
                    "q=" + std::to_string(q) + ";l=" + std::to_string(cfg.quantum_layers) + ";seed=" +
                        std::to_string(seed) + ";i=" + std::to_string(player),
                    bound, grad, grad <= bound});
  }

  // Error accumulation in parameter space: parents are converged players,
  // perturbed by eps along a random parameter direction.
  if (cfg.quantum_samples > 0) {
    SolverConfig solver;
    solver.direction = Direction::minimize;
    solver.grad_tolerance = 1e-6;
    solver.max_iterations = 20000;
    const std::size_t num_parents = std::min<std::size_t>(2, max_player);
    const auto run = run_quantumgame(h, spec, solver, num_parents, cfg.seed);
    std::vector<ParameterTensor> truth;
    for (const auto& level : run.levels) truth.push_back(level.state.theta);
    auto rng = detail::suite_rng(cfg.seed, 4);
    std::vector<Eigen::VectorXd> directions;
    for (std::size_t j = 0; j < truth.size(); ++j) {
      directions.push_back(detail::gaussian_vector(static_cast<Eigen::Index>(spec.num_parameters()), rng).normalized());
    }
    const ParameterTensor child = ParameterTensor::random(spec, cfg.seed * 31 + 7);
    const auto parent_list = [&](const std::vector<ParameterTensor>& thetas) {
      QuantumParentList out;
      for (const auto& t : thetas) out.push_back(make_quantum_parent(op.game, spec, t));
      return out;
    };
    const auto child_grad = [&](const QuantumParentList& parents) {
      const ParameterObjective objective = [&](const ParameterTensor& t) {
        return quantum_utility(op.game, spec, t, parents);
      };
      return parameter_shift_gradient(objective, child);
    };
    const Eigen::VectorXd reference = child_grad(parent_list(truth));
    for (double eps : cfg.epsilons) {
      std::vector<ParameterTensor> hat;
      for (std::size_t j = 0; j < truth.size(); ++j) {
        hat.emplace_back(Eigen::VectorXd(truth[j].values() + eps * directions[j]));
      }
      const double err = (child_grad(parent_list(hat)) - reference).norm();
      const double bound = error_accumulation_bound_quantum(op.game, spec, truth, hat);
      rows.push_back({"error_accumulation_quantum",
                      "q=" + std::to_string(q) + ";l=" + std::to_string(cfg.quantum_layers) +
                          ";parents=" + std::to_string(truth.size()) + ";eps=" + detail::fmt(eps),
                      bound, err, run.converged && err <= bound});
    }
  }
  return rows;
}

inline std::vector<DiagnosticRow> run_diagnostics(const DiagnosticsConfig& cfg) {
  cfg.validate();
  std::vector<DiagnosticRow> rows = lipschitz_suite(cfg);
  for (auto&& part : {error_accumulation_suite(cfg), convergence_suite(cfg), quantum_suite(cfg)}) {
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

inline std::size_t count_violations(const std::vector<DiagnosticRow>& rows) {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.pass ? 0 : 1;
  return n;
}

inline void write_diagnostics_header(std::ostream& out) {
  out << "bound,parameters,bound_value,measured_value,pass\n";
}

inline void write_diagnostic_row(std::ostream& out, const DiagnosticRow& r) {
  out << r.bound << ',' << r.parameters << ',' << format_coefficient(r.bound_value) << ','
      << format_coefficient(r.measured_value) << ',' << (r.pass ? "pass" : "fail") << '\n';
}

}  // namespace eigengame
