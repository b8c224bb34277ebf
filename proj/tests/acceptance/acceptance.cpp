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


// Acceptance suite: one PASS/FAIL line per criterion, 1 through 10.
// Tolerances and runtime limits are fixed below; exit status is 0 only if
// every criterion passes.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eigengame/bench.hpp"
#include "eigengame/classical.hpp"
#include "eigengame/diagnostics_suite.hpp"
#include "eigengame/hamiltonian.hpp"
#include "eigengame/quantumgame.hpp"

using namespace eigengame;

namespace {

const std::string kH2Path = std::string(EIGENGAME_SOURCE_DIR) + "/data/h2_parity_2q.txt";
const std::string kConfigDir = std::string(EIGENGAME_SOURCE_DIR) + "/configs";

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// Real symmetric M with eigenvalues uniform in [0.1, 2].
RealSymmetricMatrix random_spd(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> eig(0.1, 2.0);
  Eigen::VectorXd d(n);
  for (auto& x : d) x = eig(rng);
  const Eigen::MatrixXd p = random_orthonormal<double>(n, rng());
  return RealSymmetricMatrix(Eigen::MatrixXd(p.transpose() * d.asDiagonal() * p), 1e-9);
}

Eigen::VectorXd random_unit(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (auto& x : v) x = normal(rng);
  return v.normalized();
}

StateVector random_state(std::mt19937_64& rng, int q) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXcd v(Eigen::Index{1} << q);
  for (auto& x : v) x = Complex(normal(rng), normal(rng));
  return StateVector::normalized(v);
}

PauliSum random_pauli_sum(std::mt19937_64& rng, int q, int terms) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> letter(0, 3);
  std::vector<PauliTerm> out;
  for (int t = 0; t < terms; ++t) {
    std::string s;
    for (int k = 0; k < q; ++k) s.push_back("IXYZ"[letter(rng)]);
    out.push_back({coef(rng), s});
  }
  return PauliSum(q, out);
}

BenchContext context_for(const std::string& dir, std::size_t workers = 0) {
  BenchContext ctx;
  ctx.base_dir = dir;
  ctx.workers = workers;
  return ctx;
}

// ---------------------------------------------------------------------------

Outcome gradient_algebra() {
  std::mt19937_64 rng(20261016);
  std::uniform_int_distribution<Eigen::Index> dim(2, 16);
  const double sigmas[] = {1e-1, 1e-2, 1e-3};
  double worst_fd = 0.0;
  double worst_zero = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const Eigen::Index n = dim(rng);
    const auto m = random_spd(rng, n);
    const auto k = std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng);
    ParentList parents;
    for (Eigen::Index j = 0; j < k; ++j) parents.emplace_back(m, random_unit(rng, n));
    const Eigen::VectorXd v = random_unit(rng, n);
    const double sigma = sigmas[draw % 3];
    const Eigen::VectorXd closed = finite_diff_gradient(v, parents, m, sigma);
    const Eigen::VectorXd literal = numeric_forward_difference(v, parents, m, sigma);
    worst_fd = std::max(worst_fd, (closed - literal).norm() / literal.norm());
    const Eigen::VectorXd exact = exact_gradient(v, parents, m);
    worst_zero = std::max(worst_zero, (finite_diff_gradient(v, parents, m, 0.0) - exact).norm() /
                                          std::max(1.0, exact.norm()));
  }
  return {worst_fd <= 1e-8 && worst_zero <= 1e-12,
          "1000 draws dims 2-16: max rel |closed - literal| " + sci(worst_fd) + " (tol 1e-8), sigma=0 vs exact " +
              sci(worst_zero) + " (tol 1e-12)"};
}

Outcome classical_recovery() {
  double worst_angle = 0.0;
  double worst_grad = 0.0;
  int runs = 0;
  bool all_converged = true;
  for (Eigen::Index n : {8, 16, 32, 64}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto h = build_powerlaw_hamiltonian<double>(n, seed, kDefaultPowerLawExponent);
      GameConfig cfg;
      cfg.step_size = default_step_size(h.matrix);
      cfg.num_players = 8;
      cfg.grad_tolerance = 1e-7;
      cfg.max_iterations_per_player = 1000000;
      for (auto mode : {GradientMode::exact, GradientMode::zeroth_order}) {
        ++runs;
        const auto run = run_sequential(h.matrix, cfg, seed, mode);
        all_converged = all_converged && run.converged && run.players.size() == 8;
        for (std::size_t i = 0; i < run.players.size(); ++i) {
          const auto& st = run.players[i].state;
          worst_grad = std::max(worst_grad, st.final_grad_norm);
          worst_angle = std::max(worst_angle, angular_error(st.vector, h.spectrum.vector(static_cast<Eigen::Index>(i))));
        }
      }
    }
  }
  return {all_converged && worst_grad <= 1e-3 && worst_angle <= 1e-2,
          std::to_string(runs) + " runs (dims 8-64, k=8, seeds 1-5, both modes): max grad norm " + sci(worst_grad) +
              " (tol 1e-3), max angle " + sci(worst_angle) + " rad (tol 1e-2)"};
}

Outcome scaling_trend() {
  const auto cfg = KeyValueConfig::load(kConfigDir + "/scaling.conf");
  const auto out = run_bench(Experiment::scaling, cfg, context_for(kConfigDir));
  // results.csv: seed,config_hash,n,mode,total_iterations,...
  std::map<long, std::map<std::string, std::vector<double>>> totals;
  std::istringstream in(out.csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
    totals[std::stol(f[2])][f[3]].push_back(std::stod(f[4]));
  }
  bool ratio_ok = true;
  bool monotone = true;
  double lo = 1e300, hi = 0.0;
  std::map<std::string, double> previous;
  std::string medians;
  for (auto& [n, modes] : totals) {
    std::map<std::string, double> med;
    for (auto& [mode, v] : modes) {
      std::sort(v.begin(), v.end());
      med[mode] = v[v.size() / 2];
      if (previous.count(mode) && med[mode] < previous[mode]) monotone = false;
      previous[mode] = med[mode];
    }
    const double ratio = med["exact"] / med["zeroth_order"];
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    ratio_ok = ratio_ok && ratio >= 1.0 / 3.0 && ratio <= 3.0;
    medians += " " + std::to_string(n) + ":" + sci(med["exact"]) + "/" + sci(med["zeroth_order"]);
  }
  return {out.exit_code() == 0 && totals.size() == 5 && ratio_ok && monotone,
          "median exact/0th-order totals" + medians + "; ratio range [" + sci(lo) + ", " + sci(hi) +
              "] (band [1/3, 3]); monotone " + (monotone ? "yes" : "no")};
}

struct QuantumEvidence {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> hashes;   // before, after
};
QuantumEvidence g_quantum;

Outcome quantum_levels() {
  const auto h2 = load_pauli_sum(kH2Path);
  const auto oracle = exact_eigendecomposition(pauli_sum_to_matrix(h2));
  const auto spec = AnsatzSpec::random_layers(2, 3, 3, 6);
  double worst_clean = 0.0;
  double worst_noisy_ratio = 0.0;
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    for (std::size_t shots : {std::size_t{0}, std::size_t{10000}}) {
      SolverConfig cfg;
      cfg.direction = Direction::minimize;
      cfg.grad_tolerance = 1e-2;
      cfg.max_iterations = shots == 0 ? 1000 : 2000;
      if (shots) cfg.shots = ShotModel::finite(shots, seed);
      const auto run = run_quantumgame(h2, spec, cfg, 4, seed);
      g_quantum.hashes.emplace_back(run.hamiltonian_hash_before, run.hamiltonian_hash_after);
      ok = ok && run.levels.size() == 4;
      for (std::size_t j = 0; j < run.levels.size(); ++j) {
        const double err = std::abs(run.levels[j].energy - oracle.eigenvalues[3 - static_cast<Eigen::Index>(j)]);
        if (shots == 0) {
          worst_clean = std::max(worst_clean, err);
          ok = ok && err <= 2e-2 && run.levels[j].state.converged;
        } else {
          const double band = 10.0 * std::sqrt(run.levels[j].state.energy_variance / static_cast<double>(shots));
          worst_noisy_ratio = std::max(worst_noisy_ratio, err / band);
          ok = ok && err <= band;
        }
      }
    }
  }
  return {ok, "H2, 4 levels, seeds 1-5: noiseless max error " + sci(worst_clean) +
                  " (tol 2e-2); 10000 shots max error / (10 sqrt(Var/N)) = " + sci(worst_noisy_ratio) + " (tol 1)"};
}

Outcome baseline_parity() {
  const auto h2 = load_pauli_sum(kH2Path);
  const auto oracle = exact_eigendecomposition(pauli_sum_to_matrix(h2));
  const auto spec = AnsatzSpec::random_layers(2, 3, 3, 6);
  SolverConfig cfg;
  cfg.direction = Direction::minimize;
  cfg.grad_tolerance = 1e-2;
  cfg.beta = 5.0;
  const auto vqd = run_vqd(h2, spec, cfg, 4, 1);
  double vqd_err = 0.0;
  for (std::size_t j = 0; j < vqd.levels.size(); ++j) {
    vqd_err = std::max(vqd_err, std::abs(vqd.levels[j].energy - oracle.eigenvalues[3 - static_cast<Eigen::Index>(j)]));
  }

  // Deflation maximizes, so it runs on s I - M and maps back.
  const auto op = make_game_operator(h2, Direction::minimize);
  const auto defl = deflation_vqe(pauli_sum_to_matrix(op.game), 4, exact_vqe_solver(), 0);
  double defl_err = 0.0;
  for (std::size_t j = 0; j < defl.levels.size(); ++j) {
    defl_err = std::max(defl_err, std::abs(op.to_energy(defl.levels[j].eigenvalue) -
                                           oracle.eigenvalues[3 - static_cast<Eigen::Index>(j)]));
  }

  const auto sweep = run_bench(Experiment::beta_sweep, KeyValueConfig::load(kConfigDir + "/beta_sweep.conf"),
                               context_for(kConfigDir));
  std::size_t rows = 0;
  std::istringstream in(sweep.csv);
  for (std::string l; std::getline(in, l);) ++rows;
  const bool sweep_ok = rows == 1 + 7 * 2;
  return {vqd.levels.size() == 4 && vqd_err <= 5e-2 && defl.levels.size() == 4 && defl_err <= 1e-6 && sweep_ok,
          "VQD beta=5 max error " + sci(vqd_err) + " (tol 5e-2); exact-solver deflation max error " + sci(defl_err) +
              " (tol 1e-6); beta sweep rows " + std::to_string(rows - 1) + " (expected 14)"};
}

Outcome circuit_equivalence() {
  std::mt19937_64 rng(606);
  double worst_mixed = 0.0;
  double worst_swap = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const int q = 1 + t % 3;
    const auto h = random_pauli_sum(rng, q, 4);
    const auto a = random_state(rng, q);
    const auto b = random_state(rng, q);
    const Complex dense = a.amplitudes().dot(pauli_sum_to_matrix(h).entries() * b.amplitudes());
    worst_mixed = std::max(worst_mixed, std::abs(mixed_expectation(h, a, b) - dense));
    worst_swap = std::max(worst_swap, std::abs(swap_test_overlap(a, b) - std::norm(a.amplitudes().dot(b.amplitudes()))));
  }
  return {worst_mixed <= 1e-10 && worst_swap <= 1e-10,
          "1000 pairs (1-3 qubits): mixed_expectation max error " + sci(worst_mixed) + ", swap test " +
              sci(worst_swap) + " (tol 1e-10)"};
}

Outcome parameter_shift() {
  std::mt19937_64 rng(77);
  double worst = 0.0;
  int checked = 0;
  for (int t = 0; t < 40; ++t) {
    const int q = 2 + t % 2;
    const auto spec = AnsatzSpec::random_layers(q, 1 + t % 3, 3, rng());
    const auto h = random_pauli_sum(rng, q, 5);
    const auto theta = ParameterTensor::random(spec, rng());
    const ParameterObjective f = [&](const ParameterTensor& th) { return expectation(h, apply_ansatz(spec, th)); };
    const Eigen::VectorXd shift = parameter_shift_gradient(f, theta);
    const double step = 1e-5;
    ParameterTensor probe = theta;
    for (Eigen::Index m = 0; m < shift.size(); ++m) {
      probe.values()[m] = theta.values()[m] + step;
      const double up = f(probe);
      probe.values()[m] = theta.values()[m] - step;
      const double down = f(probe);
      probe.values()[m] = theta.values()[m];
      worst = std::max(worst, std::abs(shift[m] - (up - down) / (2.0 * step)));
      ++checked;
    }
  }
  return {worst <= 1e-6, std::to_string(checked) + " components on 2-3 qubit ansatzes: max |shift - central(1e-5)| " +
                             sci(worst) + " (tol 1e-6)"};
}

Outcome theory_bounds() {
  DiagnosticsConfig cfg;
  cfg.hamiltonian = load_pauli_sum(kH2Path);
  cfg.validate();
  std::size_t lipschitz = 0, lipschitz_bad = 0, error = 0, error_bad = 0, slopes = 0, slopes_bad = 0;
  double slope_lo = 1e300, slope_hi = -1e300;
  for (const auto& part : {lipschitz_suite(cfg), error_accumulation_suite(cfg), quantum_suite(cfg)}) {
    for (const auto& r : part) {
      if (r.bound.starts_with("lipschitz")) {
        ++lipschitz;
        lipschitz_bad += !r.pass;
      } else if (r.bound.starts_with("error_accumulation")) {
        ++error;
        error_bad += !r.pass;
      } else if (r.bound.starts_with("error_slope")) {
        ++slopes;
        slopes_bad += !r.pass;
        slope_lo = std::min(slope_lo, r.measured_value);
        slope_hi = std::max(slope_hi, r.measured_value);
      }
    }
  }
  return {lipschitz >= 1000 && error > 0 && slopes > 0 && lipschitz_bad + error_bad + slopes_bad == 0,
          "Lipschitz checks " + std::to_string(lipschitz) + " (violations " + std::to_string(lipschitz_bad) +
              "), error-accumulation checks " + std::to_string(error) + " (violations " + std::to_string(error_bad) +
              "), log-log slopes in [" + sci(slope_lo) + ", " + sci(slope_hi) + "] (band [0.8, 1.2])"};
}

Outcome no_deflation() {
  // Additional runs beyond criterion 4: VQD, a diagonal operator, and the bench h2 experiment.
  const auto h2 = load_pauli_sum(kH2Path);
  const PauliSum copy = h2;
  const auto spec = AnsatzSpec::random_layers(2, 3, 3, 6);
  SolverConfig cfg;
  cfg.direction = Direction::minimize;
  for (std::uint64_t seed : {11, 12}) {
    const auto run = run_quantumgame(h2, spec, cfg, 4, seed);
    g_quantum.hashes.emplace_back(run.hamiltonian_hash_before, run.hamiltonian_hash_after);
  }
  const PauliSum diag(2, {{1.5, "II"}, {1.0, "ZI"}, {0.5, "IZ"}});
  const auto run = run_quantumgame(diag, spec, cfg, 4, 3);
  g_quantum.hashes.emplace_back(run.hamiltonian_hash_before, run.hamiltonian_hash_after);
  const auto bench = run_bench(Experiment::h2, KeyValueConfig::load(kConfigDir + "/h2.conf"), context_for(kConfigDir));
  bool ok = h2 == copy && bench.exit_code() == 0;
  for (const auto& [before, after] : g_quantum.hashes) ok = ok && before == after;
  return {ok && g_quantum.hashes.size() >= 10,
          std::to_string(g_quantum.hashes.size()) + " run_quantumgame calls, Hamiltonian hash unchanged in all: " +
              (ok ? "yes" : "no")};
}

Outcome determinism() {
  std::vector<std::string> names;
  bool ok = true;
  for (auto e : {Experiment::scaling, Experiment::h2, Experiment::beta_sweep, Experiment::diagnostics}) {
    std::string file = to_string(e);
    std::replace(file.begin(), file.end(), '-', '_');
    const auto cfg = KeyValueConfig::load(kConfigDir + "/" + file + ".conf");
    const auto a = run_bench(e, cfg, context_for(kConfigDir, 1));
    const auto b = run_bench(e, cfg, context_for(kConfigDir, 4));
    const bool same = a.csv == b.csv && !a.csv.empty();
    ok = ok && same;
    names.push_back(std::string(to_string(e)) + (same ? " identical" : " DIFFERS"));
  }
  std::string detail = "results.csv across repeated runs (1 vs 4 workers):";
  for (const auto& n : names) detail += " " + n + ";";
  return {ok, detail};
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "gradient algebra", 10, gradient_algebra},
      {2, "classical multicomponent recovery", 120, classical_recovery},
      {3, "scaling trend", 600, scaling_trend},
      {4, "quantum excited states", 300, quantum_levels},
      {5, "baseline parity", 600, baseline_parity},
      {6, "circuit equivalence", 10, circuit_equivalence},
      {7, "parameter-shift correctness", 30, parameter_shift},
      {8, "theory bounds", 120, theory_bounds},
      {9, "no-deflation invariant", 300, no_deflation},
      {10, "determinism", 600, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && seconds <= c.limit_seconds;
    failures += pass ? 0 : 1;
    std::cout << "Criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << " [" << c.name << "] " << o.detail
              << "; runtime " << sci(seconds) << " s (limit " << c.limit_seconds << " s)" << std::endl;
  }
  std::cout << (failures == 0 ? "ALL CRITERIA PASS" : std::to_string(failures) + " CRITERIA FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
