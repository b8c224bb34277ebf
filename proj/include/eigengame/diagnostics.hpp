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


// Numeric evaluators for the convergence and error-accumulation bounds.
// These are proof-level constants, not tight estimates.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "eigengame/classical.hpp"
#include "eigengame/errors.hpp"
#include "eigengame/hamiltonian.hpp"
#include "eigengame/pauli.hpp"
#include "eigengame/quantum_sim.hpp"

namespace eigengame {

inline constexpr double kMaxAccuracyConstant = 1.0 / 16.0;

struct BoundParams {
  double lambda_top = 1.0;          // Lambda_11
  std::vector<double> gaps;         // g_1, g_2, ...; g_i = Lambda_ii - Lambda_{i+1,i+1}
  std::size_t player_index = 1;     // i, 1-based
  double kappa = 1.0;               // kappa_{i-1} = Lambda_11 / Lambda_{i-1,i-1}
  double c = kMaxAccuracyConstant;
  double sigma = 0.0;
  std::size_t num_layers = 1;
  std::size_t num_qubits = 1;
  double phi_tol = 1e-2;
  double diag_norm = 0.0;           // ||diag(M)||_2

  double gap() const { return gaps.at(player_index - 1); }

  void validate() const {
    if (!(c >= 0.0 && c <= kMaxAccuracyConstant)) throw InvalidArgumentError("c must lie in [0, 1/16]");
    if (gaps.empty()) throw InvalidArgumentError("at least one gap is required");
    for (double g : gaps) {
      if (!(g > 0.0)) throw InvalidArgumentError("gaps must be strictly positive");
    }
    if (!(lambda_top >= *std::max_element(gaps.begin(), gaps.end()))) {
      throw InvalidArgumentError("lambda_top must be >= every gap");
    }
    if (player_index < 1 || player_index > gaps.size()) throw InvalidArgumentError("player_index out of range");
    if (!(kappa >= 0.0) || !(sigma >= 0.0) || !(diag_norm >= 0.0)) {
      throw InvalidArgumentError("kappa, sigma and diag_norm must be >= 0");
    }
    if (num_layers < 1 || num_qubits < 1) throw InvalidArgumentError("num_layers and num_qubits must be >= 1");
  }
};

/// kappa_j = Lambda_11 / Lambda_jj (1-based j); kappa_0 is taken as 1.
inline double kappa_from_spectrum(const Eigen::VectorXd& eigenvalues, std::size_t j) {
  if (j == 0) return 1.0;
  const double ljj = eigenvalues[static_cast<Eigen::Index>(j - 1)];
  if (!(std::abs(ljj) >= kDegenerateParentThreshold)) {
    throw DegenerateParentError("Lambda_" + std::to_string(j) + std::to_string(j) + " is zero");
  }
  return eigenvalues[0] / ljj;
}

/// Per-player parameters from a descending spectrum.
inline BoundParams bound_params_from_spectrum(const Eigen::VectorXd& eigenvalues, std::size_t player, double c,
                                              double sigma, double diag_norm) {
  BoundParams p;
  p.lambda_top = eigenvalues[0];
  for (Eigen::Index j = 0; j + 1 < eigenvalues.size(); ++j) p.gaps.push_back(eigenvalues[j] - eigenvalues[j + 1]);
  p.player_index = player;
  p.kappa = kappa_from_spectrum(eigenvalues, player - 1);
  p.c = c;
  p.sigma = sigma;
  p.diag_norm = diag_norm;
  return p;
}

/// Largest c compatible with a target angular error: half of phi_tol is
/// budgeted to the parents, whose contribution is 8 c.
inline double accuracy_constant_for(double phi_tol) {
  if (!(phi_tol > 0.0)) throw InvalidArgumentError("phi_tol must be > 0");
  return std::min(kMaxAccuracyConstant, phi_tol / 16.0);
}

/// L_i(sigma) = 4 (Lambda_11 i + (1 + kappa) c g_i) + sigma (||diag M|| + 2 (i-1) Lambda_11 kappa)
inline double lipschitz_bound_classical(const BoundParams& p) {
  p.validate();
  const double i = static_cast<double>(p.player_index);
  return 4.0 * (p.lambda_top * i + (1.0 + p.kappa) * p.c * p.gap()) +
         p.sigma * (p.diag_norm + 2.0 * (i - 1.0) * p.lambda_top * p.kappa);
}

/// L_theta_i = sqrt(l q) L_i(0)
inline double lipschitz_bound_quantum(const BoundParams& p) {
  BoundParams exact = p;
  exact.sigma = 0.0;
  return std::sqrt(static_cast<double>(p.num_layers * p.num_qubits)) * lipschitz_bound_classical(exact);
}

namespace detail {

// log of [(16 Lambda_11)^{k-1} (k-1)! / prod_{j<=k} g_j / (16 c_k)]^2
inline double log_squared_bracket(const std::vector<BoundParams>& players, std::size_t k, double c_k) {
  if (players.size() != k || k == 0) throw InvalidArgumentError("need parameters for each of the k players");
  if (!(c_k > 0.0 && c_k <= kMaxAccuracyConstant)) throw InvalidArgumentError("c_k must lie in (0, 1/16]");
  const auto& first = players.front();
  first.validate();
  if (first.gaps.size() < k) throw InvalidArgumentError("need k gaps");
  double log_b = static_cast<double>(k - 1) * std::log(16.0 * first.lambda_top) + std::lgamma(static_cast<double>(k)) -
                 std::log(16.0 * c_k);
  for (std::size_t j = 0; j < k; ++j) {
    if (!(first.gaps[j] > 0.0)) throw InvalidArgumentError("zero gap in iteration bound");
    log_b -= std::log(first.gaps[j]);
  }
  return 2.0 * log_b;
}

// Ceiling, kept in double: the bound routinely exceeds 2^64.
inline double ceil_bound(double value) {
  return std::isfinite(value) ? std::ceil(value) : std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// T_k = ceil(sum_i 5 pi^2 (L_i(0) / L_i(sigma)) [(16 Lambda_11)^{k-1} (k-1)! / prod g_j / (16 c_k)]^2)
inline double iteration_bound_classical(const std::vector<BoundParams>& players, std::size_t k, double c_k) {
  const double sq = std::exp(detail::log_squared_bracket(players, k, c_k));
  double total = 0.0;
  for (const auto& p : players) {
    BoundParams exact = p;
    exact.sigma = 0.0;
    total += 5.0 * std::numbers::pi * std::numbers::pi * lipschitz_bound_classical(exact) /
             lipschitz_bound_classical(p) * sq;
  }
  return detail::ceil_bound(total);
}

/// T_k = ceil(sum_i 4 L_theta_i^2 / sqrt(l q) [...]^2), same bracket as the classical bound.
inline double iteration_bound_quantum(const std::vector<BoundParams>& players, std::size_t k, double c_k) {
  const double sq = std::exp(detail::log_squared_bracket(players, k, c_k));
  double total = 0.0;
  for (const auto& p : players) {
    const double l = lipschitz_bound_quantum(p);
    total += 4.0 * l * l / std::sqrt(static_cast<double>(p.num_layers * p.num_qubits)) * sq;
  }
  return detail::ceil_bound(total);
}

/// 2 ||M|| sum_j (||v_j w_j^T|| + ||w_j v_j^T|| + ||w_j w_j^T||) Lambda_11 / Lambda_jj
///   + sigma sum_j (2 ||M v_j|| ||M w_j|| + ||M w_j||^2) / Lambda_jj,
/// with w_j = hat_j - true_j and Lambda_jj = true_j^T M true_j.
inline double error_accumulation_bound_classical(const RealSymmetricMatrix& m,
                                                 const std::vector<Eigen::VectorXd>& parents_true,
                                                 const std::vector<Eigen::VectorXd>& parents_hat, double sigma) {
  if (parents_true.size() != parents_hat.size()) throw InvalidArgumentError("parent lists differ in length");
  const auto spectrum = exact_eigendecomposition(m);
  const double norm_m = spectrum.spectral_norm();
  const double top = spectrum.eigenvalues[0];
  double first = 0.0;
  double second = 0.0;
  for (std::size_t j = 0; j < parents_true.size(); ++j) {
    const auto& v = parents_true[j];
    if (v.size() != m.dim() || parents_hat[j].size() != m.dim()) throw DimensionMismatchError("parent dimension");
    const Eigen::VectorXd w = parents_hat[j] - v;
    const Eigen::VectorXd mv = m.entries() * v;
    const double ljj = v.dot(mv);
    if (!(std::abs(ljj) >= kDegenerateParentThreshold)) {
      throw DegenerateParentError("parent " + std::to_string(j + 1) + " has zero eigenvalue");
    }
    // Rank-one spectral norms.
    const double vw = v.norm() * w.norm();
    first += (2.0 * vw + w.squaredNorm()) * top / ljj;
    const double mw = (m.entries() * w).norm();
    second += (2.0 * mv.norm() * mw + mw * mw) / ljj;
  }
  return 2.0 * norm_m * first + sigma * second;
}

/// 2 sqrt(l q) ||G|| sum_j (||v_j w_j^T|| + ||w_j v_j^T|| + ||w_j w_j^T||) Lambda_11 / Lambda_jj
/// with v_j = v(theta_j), w_j = v(hat theta_j) - v(theta_j), all on the game operator G.
inline double error_accumulation_bound_quantum(const PauliSum& game, const AnsatzSpec& spec,
                                               const std::vector<ParameterTensor>& parents_true_theta,
                                               const std::vector<ParameterTensor>& parents_hat_theta) {
  if (parents_true_theta.size() != parents_hat_theta.size()) {
    throw InvalidArgumentError("parent lists differ in length");
  }
  const auto spectrum = exact_eigendecomposition(pauli_sum_to_matrix(game));
  const double norm_g = spectrum.spectral_norm();
  const double top = spectrum.eigenvalues[0];
  double sum = 0.0;
  for (std::size_t j = 0; j < parents_true_theta.size(); ++j) {
    const StateVector v = apply_ansatz(spec, parents_true_theta[j]);
    const StateVector hat = apply_ansatz(spec, parents_hat_theta[j]);
    const double ljj = expectation(game, v);
    if (!(std::abs(ljj) >= kDegenerateParentThreshold)) {
      throw DegenerateParentError("parent " + std::to_string(j + 1) + " has zero eigenvalue");
    }
    const double w = (hat.amplitudes() - v.amplitudes()).norm();
    sum += (2.0 * w + w * w) * top / ljj;
  }
  const double lq = static_cast<double>(spec.num_layers()) * spec.num_qubits();
  return 2.0 * std::sqrt(lq) * norm_g * sum;
}

}  // namespace eigengame
