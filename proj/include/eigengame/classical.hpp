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

// Classical EigenGame over real symmetric matrices: the exact-gradient player
// and the zeroth-order (forward finite differences) player, scheduled
// sequentially with parent broadcast.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eigengame/errors.hpp"
#include "eigengame/hamiltonian.hpp"

namespace eigengame {

using Eigen::VectorXd;

/// Rayleigh quotients below this magnitude cannot be used as parents.
inline constexpr double kDegenerateParentThreshold = 1e-12;

/// A converged, frozen player broadcast to its children. Caches M v and
/// v^T M v so the child never touches the parent's vector mutably.
class Parent {
 public:
  Parent(const RealSymmetricMatrix& m, VectorXd vector)
      : vector_(std::move(vector)), image_(m.entries() * vector_), rayleigh_(vector_.dot(image_)) {}

  const VectorXd& vector() const noexcept { return vector_; }
  /// M v
  const VectorXd& image() const noexcept { return image_; }
  /// v^T M v
  double rayleigh() const noexcept { return rayleigh_; }

 private:
  VectorXd vector_;
  VectorXd image_;
  double rayleigh_;
};

using ParentList = std::vector<Parent>;

namespace detail {

inline void check_parents(std::span<const Parent> parents, Eigen::Index dim) {
  for (std::size_t j = 0; j < parents.size(); ++j) {
    if (parents[j].vector().size() != dim) {
      throw DimensionMismatchError("parent " + std::to_string(j + 1) + " has wrong dimension");
    }
    if (std::abs(parents[j].rayleigh()) < kDegenerateParentThreshold) {
      throw DegenerateParentError("parent " + std::to_string(j + 1) +
                                  " has Rayleigh quotient " +
                                  std::to_string(parents[j].rayleigh()));
    }
  }
}

inline void check_vector(const VectorXd& v, const RealSymmetricMatrix& m) {
  if (v.size() != m.dim()) {
    throw DimensionMismatchError("vector has length " + std::to_string(v.size()) +
                                 ", matrix has dim " + std::to_string(m.dim()));
  }
}

/// 2 M (v - sum_j (v^T M v_j / v_j^T M v_j) v_j), given Mv.
inline VectorXd exact_gradient_from_image(const VectorXd& v, const VectorXd& mv,
                                          std::span<const Parent> parents) {
  VectorXd g = mv;
  for (const auto& p : parents) g -= (v.dot(p.image()) / p.rayleigh()) * p.image();
  return 2.0 * g;
}

/// diag(M) - sum_j (M v_j)^{o2} / (v_j^T M v_j)
inline VectorXd finite_difference_error_direction(const RealSymmetricMatrix& m,
                                                  std::span<const Parent> parents) {
  VectorXd e = m.entries().diagonal();
  for (const auto& p : parents) e -= p.image().cwiseAbs2() / p.rayleigh();
  return e;
}

inline double utility_from_image(const VectorXd& v, const VectorXd& mv,
                                 std::span<const Parent> parents) {
  double u = v.dot(mv);
  for (const auto& p : parents) {
    const double cross = v.dot(p.image());
    u -= cross * cross / p.rayleigh();
  }
  return u;
}

}  // namespace detail

/// u(v | parents) = v^T M v - sum_j (v^T M v_j)^2 / (v_j^T M v_j).
inline double utility(const VectorXd& v, std::span<const Parent> parents,
                      const RealSymmetricMatrix& m) {
  detail::check_vector(v, m);
  detail::check_parents(parents, m.dim());
  return detail::utility_from_image(v, m.entries() * v, parents);
}

inline VectorXd exact_gradient(const VectorXd& v, std::span<const Parent> parents,
                               const RealSymmetricMatrix& m) {
  detail::check_vector(v, m);
  detail::check_parents(parents, m.dim());
  return detail::exact_gradient_from_image(v, m.entries() * v, parents);
}

/// Closed form of the forward-difference gradient: the exact gradient plus
/// sigma (diag(M) - sum_j (M v_j)^{o2} / (v_j^T M v_j)).
inline VectorXd finite_diff_gradient(const VectorXd& v, std::span<const Parent> parents,
                                     const RealSymmetricMatrix& m, double sigma) {
  VectorXd g = exact_gradient(v, parents, m);
  if (sigma != 0.0) g += sigma * detail::finite_difference_error_direction(m, parents);
  return g;
}

/// Literal forward differences: component k is
/// [u(v + sigma e_k) - u(v)] / sigma, with the perturbed point left
/// unnormalized.
inline VectorXd numeric_forward_difference(const VectorXd& v, std::span<const Parent> parents,
                                           const RealSymmetricMatrix& m, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidPerturbationError("forward difference needs sigma > 0, got " +
                                   std::to_string(sigma));
  }
  const double base = utility(v, parents, m);
  VectorXd g(v.size());
  VectorXd shifted = v;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    shifted[k] = v[k] + sigma;
    g[k] = (utility(shifted, parents, m) - base) / sigma;
    shifted[k] = v[k];
  }
  return g;
}

/// arccos(min(1, |<v, v_star>|)); invariant under sign (or phase) flips.
template <typename DerivedA, typename DerivedB>
double angular_error(const Eigen::MatrixBase<DerivedA>& v, const Eigen::MatrixBase<DerivedB>& v_star,
                     double norm_tolerance = 1e-8) {
  if (v.size() != v_star.size()) throw DimensionMismatchError("angular_error: size mismatch");
  if (std::abs(v.norm() - 1.0) > norm_tolerance || std::abs(v_star.norm() - 1.0) > norm_tolerance) {
    throw NormalizationError("angular_error expects unit vectors");
  }
  const double overlap = std::abs(v.dot(v_star));
  return std::acos(std::min(1.0, overlap));
}

/// (I - v v^T) g
inline VectorXd riemannian_projection(const VectorXd& v, const VectorXd& g) {
  return g - v.dot(g) * v;
}

/// normalize(v + alpha g)
inline VectorXd normalized_step(const VectorXd& v, const VectorXd& g, double alpha) {
  VectorXd next = v + alpha * g;
  const double n = next.norm();
  if (!std::isfinite(n)) throw NumericalOverflowError("update produced a non-finite vector");
  if (!(n > 0.0)) throw DivergenceError("update produced the zero vector");
  return next / n;
}

enum class GradientMode { exact, zeroth_order };

inline const char* to_string(GradientMode mode) {
  return mode == GradientMode::exact ? "exact" : "zeroth_order";
}

struct GameConfig {
  double step_size = 0.0;                  // alpha; see default_step_size()
  double sigma = 1e-6;                     // finite-difference perturbation
  double grad_tolerance = 1e-3;            // rho
  std::size_t max_iterations_per_player = 100000;
  std::size_t num_players = 1;             // k

  void validate() const {
    if (!(step_size > 0.0) || !std::isfinite(step_size)) {
      throw InvalidArgumentError("step_size must be > 0");
    }
    if (!(grad_tolerance > 0.0)) throw InvalidArgumentError("grad_tolerance must be > 0");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgumentError("sigma must be >= 0");
    if (num_players < 1) throw InvalidArgumentError("num_players must be >= 1");
    if (max_iterations_per_player < 1) {
      throw InvalidArgumentError("max_iterations_per_player must be >= 1");
    }
  }
};

/// alpha = 1 / (2 ||M||_2), with the norm taken from the exact spectrum.
inline double default_step_size(const RealSymmetricMatrix& m) {
  return 1.0 / (2.0 * exact_eigendecomposition(m).spectral_norm());
}

/// One telemetry row per iteration.
struct IterationRecord {
  std::size_t player_index = 0;
  std::size_t iteration = 0;
  double utility = 0.0;
  double grad_norm = 0.0;             // ambient norm of the mode's gradient
  double riemannian_grad_norm = 0.0;  // ||(I - v v^T) g||, the stopping quantity
  double exact_riemannian_grad_norm = 0.0;
  std::optional<double> angular_error;
};

using IterationObserver = std::function<void(const IterationRecord&)>;

struct PlayerState {
  std::size_t index = 1;   // 1-based
  VectorXd vector;
  ParentList parents;
  std::size_t iterations_used = 0;
  bool converged = false;
  std::vector<double> grad_norm_history;   // Riemannian norm of the mode's gradient
  double final_grad_norm = 0.0;            // same quantity at the returned vector
  double final_exact_grad_norm = 0.0;      // Riemannian norm of the exact gradient
};

struct PlayerOptions {
  std::size_t index = 1;
  const VectorXd* reference = nullptr;   // oracle eigenvector for angular-error telemetry
  IterationObserver observer;
};

/// Runs one player: v <- normalize(v + alpha g) until the Riemannian norm of
/// the mode's gradient is <= grad_tolerance or the iteration budget is spent.
inline PlayerState eigengame_player(const RealSymmetricMatrix& m, const VectorXd& init,
                                    ParentList parents, const GameConfig& cfg, GradientMode mode,
                                    const PlayerOptions& options = {}) {
  cfg.validate();
  detail::check_vector(init, m);
  detail::check_parents(parents, m.dim());
  const double init_norm = init.norm();
  if (std::abs(init_norm - 1.0) > 1e-10) {
    throw NormalizationError("initial vector must be unit-norm (norm " + std::to_string(init_norm) + ")");
  }

  const auto& mat = m.entries();
  const VectorXd error_term = mode == GradientMode::zeroth_order && cfg.sigma != 0.0
                                  ? VectorXd(cfg.sigma * detail::finite_difference_error_direction(m, parents))
                                  : VectorXd::Zero(m.dim());

  PlayerState state;
  state.index = options.index;
  state.vector = init / init_norm;
  state.parents = std::move(parents);
  state.grad_norm_history.reserve(std::min<std::size_t>(cfg.max_iterations_per_player + 1, 1 << 16));

  VectorXd v = state.vector;
  for (std::size_t t = 0;; ++t) {
    const VectorXd mv = mat * v;
    const double u = detail::utility_from_image(v, mv, state.parents);
    if (!std::isfinite(u)) throw NumericalOverflowError("utility became non-finite");
    const VectorXd exact = detail::exact_gradient_from_image(v, mv, state.parents);
    const VectorXd g = exact + error_term;
    const double riem = riemannian_projection(v, g).norm();
    if (!std::isfinite(riem)) throw NumericalOverflowError("gradient became non-finite");
    const double exact_riem = mode == GradientMode::exact ? riem : riemannian_projection(v, exact).norm();
    state.grad_norm_history.push_back(riem);

    if (options.observer) {
      IterationRecord rec;
      rec.player_index = state.index;
      rec.iteration = t;
      rec.utility = u;
      rec.grad_norm = g.norm();
      rec.riemannian_grad_norm = riem;
      rec.exact_riemannian_grad_norm = exact_riem;
      if (options.reference) rec.angular_error = angular_error(v, *options.reference, 1e-6);
      options.observer(rec);
    }

    state.final_grad_norm = riem;
    state.final_exact_grad_norm = exact_riem;
    if (riem <= cfg.grad_tolerance) {
      state.converged = true;
      break;
    }
    if (t >= cfg.max_iterations_per_player) break;

    v = normalized_step(v, g, cfg.step_size);
    state.iterations_used = t + 1;
  }
  state.vector = v;
  return state;
}

/// Seeded uniform-on-sphere starting vector.
inline VectorXd random_unit_vector(Eigen::Index dim, std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x7e3779b9u};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = normal(rng);
  return v / v.norm();
}

/// Starting vector used by run_sequential for `player` (1-based) on its
/// `attempt`-th try.
inline VectorXd initial_vector(Eigen::Index dim, std::uint64_t seed, std::size_t player,
                               std::size_t attempt = 0) {
  return random_unit_vector(dim, seed, (std::uint64_t{player} << 8) | attempt);
}

struct SolvedPlayer {
  double eigenvalue = 0.0;   // v^T M v
  PlayerState state;
};

struct SequentialResult {
  std::vector<SolvedPlayer> players;     // completed (converged) players, in order
  std::optional<PlayerState> failed;     // the player that exhausted its budget, if any
  std::size_t total_iterations = 0;      // across all players and restarts
  std::size_t restarts = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

struct SequentialOptions {
  const Spectrum<double>* oracle = nullptr;   // enables angular-error telemetry
  IterationObserver observer;
  std::size_t restarts_per_player = 1;
};

/// Solves players 1..k in order. Player i gets every earlier converged
/// vector as a parent. A player that runs out of iterations is re-seeded
/// once; if it fails again the run stops with a partial result.
inline SequentialResult run_sequential(const RealSymmetricMatrix& m, const GameConfig& cfg,
                                       std::uint64_t seed, GradientMode mode,
                                       const SequentialOptions& options = {}) {
  cfg.validate();
  if (cfg.num_players > static_cast<std::size_t>(m.dim())) {
    throw InvalidArgumentError("num_players exceeds matrix dimension");
  }
  SequentialResult result;
  {
    const auto spectrum = options.oracle ? *options.oracle : exact_eigendecomposition(m);
    if (spectrum.min_gap() < 1e-6) {
      result.warnings.push_back("eigengap " + std::to_string(spectrum.min_gap()) +
                                " is below 1e-6; near-degenerate eigenvectors may be unidentifiable");
    }
  }

  ParentList parents;
  for (std::size_t i = 1; i <= cfg.num_players; ++i) {
    PlayerOptions popts;
    popts.index = i;
    popts.observer = options.observer;
    VectorXd reference;
    if (options.oracle) {
      reference = options.oracle->vector(static_cast<Eigen::Index>(i - 1));
      popts.reference = &reference;
    }
    std::optional<PlayerState> solved;
    for (std::size_t attempt = 0; attempt <= options.restarts_per_player; ++attempt) {
      const VectorXd init = initial_vector(m.dim(), seed, i, attempt);
      auto state = eigengame_player(m, init, parents, cfg, mode, popts);
      result.total_iterations += state.iterations_used;
      if (state.converged) {
        solved = std::move(state);
        break;
      }
      if (attempt == options.restarts_per_player) {
        result.failed = std::move(state);
      } else {
        ++result.restarts;
      }
    }
    if (!solved) return result;
    const double eigenvalue = solved->vector.dot(m.entries() * solved->vector);
    parents.emplace_back(m, solved->vector);
    result.players.push_back({eigenvalue, std::move(*solved)});
  }
  result.converged = true;
  return result;
}

inline void write_telemetry_header(std::ostream& out) {
  out << "player_index,iteration,utility,grad_norm,riemannian_grad_norm,angular_error_vs_oracle\n";
}

inline void write_telemetry_row(std::ostream& out, const IterationRecord& r) {
  out << r.player_index << ',' << r.iteration << ',' << r.utility << ',' << r.grad_norm << ','
      << r.riemannian_grad_norm << ',';
  if (r.angular_error) out << *r.angular_error;
  out << '\n';
}

}  // namespace eigengame
