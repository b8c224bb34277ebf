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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "eigengame/classical.hpp"

using namespace eigengame;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

RealSymmetricMatrix diag(std::initializer_list<double> values) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double v : values) d[i++] = v;
  return RealSymmetricMatrix(d.asDiagonal().toDenseMatrix());
}

VectorXd basis(Eigen::Index dim, Eigen::Index k) { return VectorXd::Unit(dim, k); }

VectorXd vec2(double a, double b) { return (VectorXd(2) << a, b).finished(); }

RealSymmetricMatrix random_symmetric(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd a(dim, dim);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = normal(rng);
  return RealSymmetricMatrix((0.5 * (a + a.transpose())).eval());
}

VectorXd random_unit(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = normal(rng);
  return v.normalized();
}

double rel_diff(const VectorXd& a, const VectorXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

GameConfig config_for(const RealSymmetricMatrix& m, std::size_t k, double tol = 1e-3) {
  GameConfig cfg;
  cfg.step_size = default_step_size(m);
  cfg.grad_tolerance = tol;
  cfg.num_players = k;
  return cfg;
}

}  // namespace

TEST_CASE("utility examples", "[classical]") {
  const auto m = diag({3, 1});
  CHECK(utility(basis(2, 0), {}, m) == 3.0);
  const ParentList e1{Parent(m, basis(2, 0))};
  CHECK(utility(basis(2, 1), e1, m) == 1.0);
  const ParentList diag_parent{Parent(m, vec2(M_SQRT1_2, M_SQRT1_2))};
  CHECK_THAT(utility(basis(2, 0), diag_parent, m), WithinAbs(0.75, 1e-14));
}

TEST_CASE("degenerate parent is rejected", "[classical]") {
  const auto m = diag({1, -1});
  const ParentList bad{Parent(m, vec2(M_SQRT1_2, M_SQRT1_2))};
  CHECK_THROWS_AS(utility(basis(2, 0), bad, m), DegenerateParentError);
  CHECK_THROWS_AS(exact_gradient(basis(2, 0), bad, m), DegenerateParentError);
  CHECK_THROWS_AS(finite_diff_gradient(basis(2, 0), bad, m, 0.1), DegenerateParentError);
}

TEST_CASE("exact_gradient examples", "[classical]") {
  const auto m = diag({3, 1});
  CHECK(exact_gradient(basis(2, 0), {}, m) == vec2(6, 0));
  const ParentList e1{Parent(m, basis(2, 0))};
  CHECK(exact_gradient(basis(2, 1), e1, m) == vec2(0, 2));
  const VectorXd g = exact_gradient(vec2(M_SQRT1_2, M_SQRT1_2), e1, m);
  CHECK_THAT(g[0], WithinAbs(0.0, 1e-14));
  CHECK_THAT(g[1], WithinAbs(std::sqrt(2.0), 1e-14));
}

TEST_CASE("finite_diff_gradient examples", "[classical]") {
  const auto m = diag({3, 1});
  CHECK((finite_diff_gradient(basis(2, 0), {}, m, 0.1) - vec2(6.3, 0.1)).norm() < 1e-14);
  const ParentList e1{Parent(m, basis(2, 0))};
  CHECK((finite_diff_gradient(basis(2, 1), e1, m, 0.5) - vec2(0, 2.5)).norm() < 1e-14);
  const VectorXd v = vec2(0.6, 0.8);
  CHECK(finite_diff_gradient(v, e1, m, 0.0) == exact_gradient(v, e1, m));
}

TEST_CASE("numeric_forward_difference examples", "[classical]") {
  const auto m = diag({3, 1});
  CHECK((numeric_forward_difference(basis(2, 0), {}, m, 0.1) - vec2(6.3, 0.1)).norm() < 1e-12);
  // M = I: 2Mv + sigma diag(I) = (2.01, 0.01). The second entry is the
  // literal quotient [(1 + sigma^2) - 1] / sigma.
  const auto id = diag({1, 1});
  CHECK((numeric_forward_difference(basis(2, 0), {}, id, 0.01) - vec2(2.01, 0.01)).norm() < 1e-12);
  CHECK((finite_diff_gradient(basis(2, 0), {}, id, 0.01) - vec2(2.01, 0.01)).norm() < 1e-15);
  CHECK_THROWS_AS(numeric_forward_difference(basis(2, 0), {}, m, 0.0), InvalidPerturbationError);
  CHECK_THROWS_AS(numeric_forward_difference(basis(2, 0), {}, m, -1e-3), InvalidPerturbationError);
}

TEST_CASE("forward differences equal the closed form", "[classical][property]") {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index dim = 2 + trial % 15;
    const auto m = random_symmetric(rng, dim);
    const VectorXd v = random_unit(rng, dim);
    ParentList parents;
    const int np = trial % static_cast<int>(dim);
    for (int j = 0; j < np; ++j) {
      Parent p(m, random_unit(rng, dim));
      if (std::abs(p.rayleigh()) > 1e-2) parents.push_back(std::move(p));
    }
    for (double sigma : {1e-1, 1e-2, 1e-3}) {
      const VectorXd closed = finite_diff_gradient(v, parents, m, sigma);
      const VectorXd numeric = numeric_forward_difference(v, parents, m, sigma);
      CHECK(rel_diff(numeric, closed) <= 1e-8);
      ++checked;
    }
  }
  CHECK(checked == 900);
}

TEST_CASE("sigma-limit bound is linear in sigma", "[classical][property]") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index dim = 2 + trial % 10;
    const auto m = random_symmetric(rng, dim);
    const VectorXd v = random_unit(rng, dim);
    ParentList parents;
    for (int j = 0; j < trial % 3; ++j) {
      Parent p(m, random_unit(rng, dim));
      if (std::abs(p.rayleigh()) > 1e-2) parents.push_back(std::move(p));
    }
    double coefficient = m.entries().diagonal().norm();
    for (const auto& p : parents) coefficient += p.image().squaredNorm() / std::abs(p.rayleigh());
    for (double sigma : {1e-3, 1e-2, 1e-1, 1.0}) {
      const double gap = (finite_diff_gradient(v, parents, m, sigma) - exact_gradient(v, parents, m)).norm();
      CHECK(gap <= sigma * coefficient * (1 + 1e-12));
    }
  }
}

TEST_CASE("exact eigenvectors are stationary", "[classical][property]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto h = build_powerlaw_hamiltonian<double>(10, seed, 2.0);
    ParentList parents;
    for (Eigen::Index i = 0; i < 10; ++i) {
      const VectorXd v = h.spectrum.vector(i);
      const VectorXd g = exact_gradient(v, parents, h.matrix);
      CHECK(riemannian_projection(v, g).norm() <= 1e-9);
      parents.emplace_back(h.matrix, v);
    }
  }
}

TEST_CASE("angular_error examples", "[classical]") {
  const VectorXd a = vec2(0.6, 0.8);
  CHECK(angular_error(a, a) == 0.0);
  CHECK(angular_error(a, (-a).eval()) == 0.0);
  CHECK_THAT(angular_error(a, vec2(-0.8, 0.6)), WithinAbs(M_PI / 2, 1e-15));
  CHECK_THROWS_AS(angular_error(vec2(1, 1), a), NormalizationError);
  const Eigen::Vector2cd phased(Complex(0, 0.6), Complex(0, 0.8));
  CHECK_THAT(angular_error(phased, a.cast<Complex>().eval()), WithinAbs(0.0, 1e-7));
}

TEST_CASE("player started at the top eigenvector stays there", "[classical]") {
  const auto m = diag({3, 1});
  for (auto mode : {GradientMode::exact, GradientMode::zeroth_order}) {
    auto cfg = config_for(m, 1);
    cfg.sigma = 1e-6;
    const auto state = eigengame_player(m, basis(2, 0), {}, cfg, mode);
    CHECK(state.converged);
    CHECK(state.iterations_used <= 1);
    CHECK_THAT(std::abs(state.vector[0]), WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("player 1 and 2 on diag(3,1,0.5)", "[classical]") {
  const auto m = diag({3, 1, 0.5});
  const auto cfg = config_for(m, 2);
  const VectorXd init = VectorXd::Ones(3) / std::sqrt(3.0);
  const auto p1 = eigengame_player(m, init, {}, cfg, GradientMode::exact);
  REQUIRE(p1.converged);
  CHECK(angular_error(p1.vector, basis(3, 0)) < 1e-2);

  PlayerOptions opts;
  opts.index = 2;
  const auto p2 = eigengame_player(m, init, {Parent(m, p1.vector)}, cfg, GradientMode::exact, opts);
  REQUIRE(p2.converged);
  CHECK(angular_error(p2.vector, basis(3, 1)) < 1e-2);
  CHECK(p2.index == 2);
  REQUIRE(p2.parents.size() == 1);
  CHECK(p2.parents[0].vector() == p1.vector);
}

TEST_CASE("accepted iterates stay unit-norm", "[classical][property]") {
  const auto h = build_powerlaw_hamiltonian<double>(12, 4, 2.0);
  auto cfg = config_for(h.matrix, 1);
  cfg.max_iterations_per_player = 200;
  cfg.grad_tolerance = 1e-14;
  std::vector<double> utilities;
  PlayerOptions opts;
  opts.observer = [&](const IterationRecord& r) { utilities.push_back(r.utility); };
  const auto state = eigengame_player(h.matrix, initial_vector(12, 1, 1), {}, cfg, GradientMode::exact, opts);
  CHECK_THAT(state.vector.norm(), WithinAbs(1.0, 1e-12));
  // Rayleigh quotient ascent with alpha = 1/(2||M||) is monotone.
  for (std::size_t t = 1; t < utilities.size(); ++t) CHECK(utilities[t] >= utilities[t - 1] - 1e-12);
  CHECK(state.grad_norm_history.size() == 201);
}

TEST_CASE("player error paths", "[classical]") {
  const auto m = diag({3, 1});
  auto cfg = config_for(m, 1);
  CHECK_THROWS_AS(eigengame_player(m, vec2(1, 1), {}, cfg, GradientMode::exact), NormalizationError);
  CHECK_THROWS_AS(eigengame_player(m, VectorXd::Unit(3, 0), {}, cfg, GradientMode::exact),
                  DimensionMismatchError);
  GameConfig bad = cfg;
  bad.step_size = -0.5;
  CHECK_THROWS_AS(bad.validate(), InvalidArgumentError);
  // v + 0.5 * (-2v) is the zero vector.
  CHECK_THROWS_AS(normalized_step(vec2(0.6, 0.8), vec2(-1.2, -1.6), 0.5), DivergenceError);
  CHECK_THROWS_AS(normalized_step(vec2(0.6, 0.8), vec2(1e308, 1e308), 1.0), NumericalOverflowError);
  cfg.step_size = 0.5;
  const auto huge = diag({1e308, 1e308});
  CHECK_THROWS_AS(eigengame_player(huge, vec2(0.6, 0.8), {}, cfg, GradientMode::exact),
                  NumericalOverflowError);
}

TEST_CASE("config validation", "[classical]") {
  GameConfig cfg;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgumentError);  // step size unset
  cfg.step_size = 0.1;
  cfg.validate();
  cfg.grad_tolerance = 0.0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgumentError);
  cfg.grad_tolerance = 1e-3;
  cfg.num_players = 0;
  CHECK_THROWS_AS(cfg.validate(), InvalidArgumentError);
  cfg.num_players = 3;
  CHECK_THROWS_AS(run_sequential(diag({1, 2}), cfg, 0, GradientMode::exact), InvalidArgumentError);
}

TEST_CASE("run_sequential on diag(3,2,1,0.5)", "[classical]") {
  const auto m = diag({3, 2, 1, 0.5});
  const auto cfg = config_for(m, 4);
  for (auto mode : {GradientMode::exact, GradientMode::zeroth_order}) {
    const auto result = run_sequential(m, cfg, 42, mode);
    REQUIRE(result.converged);
    REQUIRE(result.players.size() == 4);
    const double expected[] = {3, 2, 1, 0.5};
    for (int i = 0; i < 4; ++i) {
      CHECK_THAT(result.players[i].eigenvalue, WithinAbs(expected[i], 1e-3));
      CHECK(angular_error(result.players[i].state.vector, basis(4, i)) < 1e-2);
      CHECK(result.players[i].state.parents.size() == static_cast<std::size_t>(i));
    }
    std::size_t sum = 0;
    for (const auto& p : result.players) sum += p.state.iterations_used;
    CHECK(result.total_iterations == sum);
  }
}

TEST_CASE("run_sequential with k=1 matches a single player", "[classical]") {
  const auto h = build_powerlaw_hamiltonian<double>(8, 2, 2.0);
  const auto cfg = config_for(h.matrix, 1);
  const auto result = run_sequential(h.matrix, cfg, 9, GradientMode::exact);
  const auto single = eigengame_player(h.matrix, initial_vector(8, 9, 1), {}, cfg, GradientMode::exact);
  REQUIRE(result.players.size() == 1);
  CHECK(result.players[0].state.vector == single.vector);
  CHECK(result.players[0].state.iterations_used == single.iterations_used);
}

TEST_CASE("power-law dim 8, k=8, both modes", "[classical]") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto h = build_powerlaw_hamiltonian<double>(8, seed, kDefaultPowerLawExponent);
    const auto cfg = config_for(h.matrix, 8);
    for (auto mode : {GradientMode::exact, GradientMode::zeroth_order}) {
      SequentialOptions opts;
      opts.oracle = &h.spectrum;
      const auto result = run_sequential(h.matrix, cfg, seed, mode, opts);
      REQUIRE(result.converged);
      for (int i = 0; i < 8; ++i) {
        CHECK_THAT(result.players[i].eigenvalue, WithinAbs(h.spectrum.eigenvalues[i], 1e-3));
      }
    }
  }
}

TEST_CASE("budget exhaustion yields a partial result", "[classical]") {
  const auto m = diag({3, 2.999, 1});
  auto cfg = config_for(m, 3, 1e-12);
  cfg.max_iterations_per_player = 5;
  const auto result = run_sequential(m, cfg, 1, GradientMode::exact);
  CHECK_FALSE(result.converged);
  CHECK(result.failed.has_value());
  CHECK(result.players.size() < 3);
  CHECK(result.restarts == 1);
}

TEST_CASE("near-degenerate input warns", "[classical]") {
  const auto m = diag({1.0, 1.0 - 1e-8});
  const auto result = run_sequential(m, config_for(m, 1), 0, GradientMode::exact);
  REQUIRE(result.warnings.size() == 1);
}

TEST_CASE("telemetry CSV", "[classical]") {
  std::ostringstream out;
  write_telemetry_header(out);
  IterationRecord r;
  r.player_index = 2;
  r.iteration = 7;
  r.utility = 1.5;
  r.grad_norm = 0.25;
  r.riemannian_grad_norm = 0.125;
  write_telemetry_row(out, r);
  r.angular_error = 0.5;
  write_telemetry_row(out, r);
  CHECK(out.str() ==
        "player_index,iteration,utility,grad_norm,riemannian_grad_norm,angular_error_vs_oracle\n"
        "2,7,1.5,0.25,0.125,\n"
        "2,7,1.5,0.25,0.125,0.5\n");
}
