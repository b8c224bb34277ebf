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


// Experiment drivers behind the bench command: classical scaling, H2
// excited states, the VQD beta sweep and the diagnostic suites. Each
// resolves its settings from a KeyValueConfig, runs independent cells on a
// bounded worker pool and renders results in cell-key order.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "eigengame/classical.hpp"
#include "eigengame/config.hpp"
#include "eigengame/diagnostics_suite.hpp"
#include "eigengame/hamiltonian.hpp"
#include "eigengame/pauli.hpp"
#include "eigengame/quantumgame.hpp"

namespace eigengame {

enum class Experiment { scaling, h2, beta_sweep, diagnostics };

inline const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::scaling: return "scaling";
    case Experiment::h2: return "h2";
    case Experiment::beta_sweep: return "beta-sweep";
    case Experiment::diagnostics: return "diagnostics";
  }
  return "?";
}

inline Experiment parse_experiment(const std::string& name) {
  for (auto e : {Experiment::scaling, Experiment::h2, Experiment::beta_sweep, Experiment::diagnostics}) {
    if (name == to_string(e)) return e;
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

inline std::string default_h2_path() { return std::string(EIGENGAME_SOURCE_DIR) + "/data/h2_parity_2q.txt"; }

/// Where relative paths in a config resolve, plus command-line overrides.
struct BenchContext {
  std::filesystem::path base_dir = ".";
  std::optional<std::uint64_t> seed;
  bool smoke = false;
  std::size_t workers = 0;   // 0: hardware concurrency
};

struct BenchOutput {
  std::string csv;
  std::vector<std::string> notes;      // summary lines for stdout and the manifest
  std::vector<std::string> failures;   // reasons for exit code 1
  std::string resolved;                // canonical config echo
  std::string config_hash;
  std::string ansatz;
  std::vector<std::uint64_t> seeds;
  int exit_code() const { return failures.empty() ? 0 : 1; }
};

/// Runs fn(0..n-1) on up to `workers` threads; results come back in index
/// order. The first exception (by index) is rethrown after all threads join.
template <typename Result>
std::vector<Result> run_cells(std::size_t n, std::size_t workers, const std::function<Result(std::size_t)>& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  std::vector<std::optional<Result>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Result> out;
  out.reserve(n);
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

namespace detail {

inline std::string num(double x) { return format_coefficient(x); }

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline std::vector<std::uint64_t> seed_list(std::uint64_t base, std::size_t count) {
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < count; ++i) seeds.push_back(base + i);
  return seeds;
}

template <typename T>
T positive(const KeyValueConfig& c, const std::string& key, T fallback) {
  if constexpr (std::is_integral_v<T>) {
    const auto v = c.get_int(key);
    if (v && *v < 1) throw ConfigError(key + " must be >= 1");
    return v ? static_cast<T>(*v) : fallback;
  } else {
    const auto v = c.get_double(key);
    if (v && !(*v > 0.0)) throw ConfigError(key + " must be > 0");
    return v.value_or(fallback);
  }
}

inline std::uint64_t base_seed(const KeyValueConfig& c, const BenchContext& ctx) {
  const auto s = c.get_int("seed");
  if (s && *s < 0) throw ConfigError("seed must be >= 0");
  return ctx.seed.value_or(s ? static_cast<std::uint64_t>(*s) : 1);
}

inline PauliSum load_hamiltonian(const KeyValueConfig& c, const BenchContext& ctx, ResolvedConfig& resolved) {
  std::filesystem::path path = default_h2_path();
  if (const auto p = c.get_string("pauli_file")) {
    path = *p;
    if (path.is_relative()) path = ctx.base_dir / path;
  }
  if (!std::filesystem::exists(path)) throw ConfigError("pauli_file does not exist: " + path.string());
  PauliSum h;
  try {
    h = load_pauli_sum(path.string());
  } catch (const Error& e) {
    throw ConfigError(std::string("pauli_file: ") + e.what());
  }
  // Hash the content, not the path, so relocating the file keeps the hash.
  resolved.text("hamiltonian_hash", Fnv1a().number(hash_of(h)).hex());
  return h;
}

struct AnsatzSettings {
  std::size_t layers = 3;
  std::size_t rotations = 3;
  std::uint64_t seed = 6;

  static AnsatzSettings read(const KeyValueConfig& c, ResolvedConfig& resolved) {
    AnsatzSettings a;
    a.layers = positive<std::size_t>(c, "layers", a.layers);
    a.rotations = positive<std::size_t>(c, "rotations", a.rotations);
    if (const auto s = c.get_int("ansatz_seed")) {
      if (*s < 0) throw ConfigError("ansatz_seed must be >= 0");
      a.seed = static_cast<std::uint64_t>(*s);
    }
    resolved.integer("layers", static_cast<long long>(a.layers));
    resolved.integer("rotations", static_cast<long long>(a.rotations));
    resolved.integer("ansatz_seed", static_cast<long long>(a.seed));
    return a;
  }

  AnsatzSpec build(int qubits) const { return AnsatzSpec::random_layers(qubits, layers, rotations, seed); }
};

/// shots list: 0 means exact expectations.
inline std::vector<std::size_t> read_shots(const KeyValueConfig& c, ResolvedConfig& resolved) {
  std::vector<std::size_t> shots{0, 10000};
  if (const auto v = c.get_ints("shots")) {
    shots.clear();
    for (long long s : *v) {
      if (s < 0) throw ConfigError("shots must be >= 0");
      shots.push_back(static_cast<std::size_t>(s));
    }
  }
  if (shots.empty()) throw ConfigError("shots list is empty");
  resolved.list("shots", shots);
  return shots;
}

inline ShotModel shot_model(std::size_t shots, std::uint64_t seed) {
  return shots == 0 ? ShotModel::exact() : ShotModel::finite(shots, seed);
}

inline void finish(BenchOutput& out, const KeyValueConfig& c, const ResolvedConfig& resolved) {
  c.check_all_used();
  out.resolved = resolved.echo();
  out.config_hash = resolved.hash();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// scaling

struct ScalingCell {
  Eigen::Index n = 0;
  GradientMode mode = GradientMode::exact;
  std::uint64_t seed = 0;
};

struct ScalingCellResult {
  std::size_t total_iterations = 0;
  double max_angular_error = 0.0;
  double max_eigenvalue_error = 0.0;
  bool converged = false;
};

inline BenchOutput bench_scaling(const KeyValueConfig& c, const BenchContext& ctx) {
  BenchOutput out;
  ResolvedConfig resolved;
  resolved.text("experiment", "scaling");
  if (c.has("pauli_file")) throw ConfigError("scaling uses a generated matrix; pauli_file is not allowed");
  const bool smoke = ctx.smoke || c.get_bool("smoke").value_or(false);
  std::vector<long long> sizes = smoke ? std::vector<long long>{8} : std::vector<long long>{8, 16, 32, 64, 128};
  if (const auto s = c.get_ints("sizes"); s && !smoke) sizes = *s;
  if (sizes.empty()) throw ConfigError("sizes list is empty");
  const auto players = detail::positive<std::size_t>(c, "players", 8);
  for (long long n : sizes) {
    if (n < 2 || static_cast<std::size_t>(n) < players) throw ConfigError("every size must be >= max(2, players)");
  }
  std::sort(sizes.begin(), sizes.end());
  GameConfig game;
  game.num_players = players;
  game.grad_tolerance = detail::positive(c, "grad_tolerance", 1e-3);
  game.sigma = detail::positive(c, "sigma", game.sigma);
  game.max_iterations_per_player = detail::positive<std::size_t>(c, "max_iterations_per_player", 100000);
  const double exponent = detail::positive(c, "exponent", kDefaultPowerLawExponent);
  PowerLawOptions gen;
  gen.min_gap = c.get_double("min_gap").value_or(gen.min_gap);
  if (!(gen.min_gap >= PowerLawOptions{}.min_gap)) throw ConfigError("min_gap is below the 1e-06 floor");
  const auto num_seeds = smoke ? 1 : detail::positive<std::size_t>(c, "num_seeds", 5);
  std::vector<GradientMode> modes{GradientMode::exact, GradientMode::zeroth_order};
  if (const auto m = c.get_list("modes")) {
    modes.clear();
    for (const auto& name : *m) {
      if (name == "exact") modes.push_back(GradientMode::exact);
      else if (name == "zeroth_order") modes.push_back(GradientMode::zeroth_order);
      else throw ConfigError("unknown mode '" + name + "'");
    }
    if (modes.empty()) throw ConfigError("modes list is empty");
  }
  out.seeds = detail::seed_list(detail::base_seed(c, ctx), num_seeds);

  resolved.list("sizes", sizes);
  resolved.integer("players", static_cast<long long>(players));
  resolved.number("grad_tolerance", game.grad_tolerance);
  resolved.number("sigma", game.sigma);
  resolved.integer("max_iterations_per_player", static_cast<long long>(game.max_iterations_per_player));
  resolved.number("exponent", exponent);
  resolved.number("min_gap", gen.min_gap);
  resolved.list("seeds", out.seeds);
  std::string mode_text;
  for (auto m : modes) mode_text += std::string(mode_text.empty() ? "" : ",") + to_string(m);
  resolved.text("modes", mode_text);
  resolved.flag("smoke", smoke);
  detail::finish(out, c, resolved);

  std::vector<ScalingCell> cells;
  for (long long n : sizes) {
    for (auto m : modes) {
      for (auto s : out.seeds) cells.push_back({static_cast<Eigen::Index>(n), m, s});
    }
  }
  const auto results = run_cells<ScalingCellResult>(cells.size(), ctx.workers, [&](std::size_t i) {
    const auto& cell = cells[i];
    const auto h = build_powerlaw_hamiltonian<double>(cell.n, cell.seed, exponent, gen);
    GameConfig g = game;
    g.step_size = default_step_size(h.matrix);
    SequentialOptions opts;
    opts.oracle = &h.spectrum;
    const auto run = run_sequential(h.matrix, g, cell.seed, cell.mode, opts);
    ScalingCellResult r;
    r.total_iterations = run.total_iterations;
    r.converged = run.converged;
    for (std::size_t p = 0; p < run.players.size(); ++p) {
      const auto idx = static_cast<Eigen::Index>(p);
      r.max_angular_error = std::max(r.max_angular_error,
                                     angular_error(run.players[p].state.vector, h.spectrum.vector(idx)));
      r.max_eigenvalue_error = std::max(r.max_eigenvalue_error,
                                        std::abs(run.players[p].eigenvalue - h.spectrum.eigenvalues[idx]));
    }
    return r;
  });

  std::ostringstream csv;
  csv << "seed,config_hash,n,mode,total_iterations,max_angular_error,max_eigenvalue_error,converged\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& r = results[i];
    csv << cells[i].seed << ',' << out.config_hash << ',' << cells[i].n << ',' << to_string(cells[i].mode) << ','
        << r.total_iterations << ',' << detail::num(r.max_angular_error) << ',' << detail::num(r.max_eigenvalue_error)
        << ',' << (r.converged ? "true" : "false") << '\n';
    if (!r.converged) {
      out.failures.push_back("n=" + std::to_string(cells[i].n) + " mode=" + to_string(cells[i].mode) +
                             " seed=" + std::to_string(cells[i].seed) + " did not converge");
    }
  }
  out.csv = csv.str();

  // Median-of-seeds summary per (n, mode).
  for (long long n : sizes) {
    std::string line = "n=" + std::to_string(n);
    std::vector<double> medians;
    for (auto m : modes) {
      std::vector<double> totals;
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].n == n && cells[i].mode == m) totals.push_back(static_cast<double>(results[i].total_iterations));
      }
      medians.push_back(detail::median(totals));
      line += std::string(" median_") + to_string(m) + "=" + detail::num(medians.back());
    }
    if (medians.size() == 2) line += " ratio=" + detail::num(medians[0] / medians[1]);
    out.notes.push_back(line);
  }
  return out;
}

// ---------------------------------------------------------------------------
// h2

struct H2Cell {
  QuantumAlgorithm algorithm = QuantumAlgorithm::quantumgame;
  std::size_t shots = 0;
  std::uint64_t seed = 0;
};

struct H2CellResult {
  std::string iteration_rows;
  QuantumRunResult run;
};

struct QuantumRunSettings {
  std::size_t levels = 4;
  double grad_tolerance = 1e-2;
  std::size_t max_iterations = 1000;
  std::size_t noisy_max_iterations = 2000;

  static QuantumRunSettings read(const KeyValueConfig& c, ResolvedConfig& resolved, std::size_t dim) {
    QuantumRunSettings s;
    s.levels = detail::positive<std::size_t>(c, "levels", s.levels);
    if (s.levels > dim) throw ConfigError("levels exceeds the Hamiltonian dimension");
    s.grad_tolerance = detail::positive(c, "grad_tolerance", s.grad_tolerance);
    s.max_iterations = detail::positive<std::size_t>(c, "max_iterations", s.max_iterations);
    s.noisy_max_iterations = detail::positive<std::size_t>(c, "noisy_max_iterations", s.noisy_max_iterations);
    resolved.integer("levels", static_cast<long long>(s.levels));
    resolved.number("grad_tolerance", s.grad_tolerance);
    resolved.integer("max_iterations", static_cast<long long>(s.max_iterations));
    resolved.integer("noisy_max_iterations", static_cast<long long>(s.noisy_max_iterations));
    return s;
  }

  SolverConfig solver(std::size_t shots, std::uint64_t seed) const {
    SolverConfig cfg;
    cfg.direction = Direction::minimize;
    cfg.grad_tolerance = grad_tolerance;
    cfg.max_iterations = shots == 0 ? max_iterations : noisy_max_iterations;
    cfg.shots = detail::shot_model(shots, seed);
    return cfg;
  }
};

inline BenchOutput bench_h2(const KeyValueConfig& c, const BenchContext& ctx) {
  BenchOutput out;
  ResolvedConfig resolved;
  resolved.text("experiment", "h2");
  const PauliSum h = detail::load_hamiltonian(c, ctx, resolved);
  const auto ansatz = detail::AnsatzSettings::read(c, resolved);
  const auto run_settings = QuantumRunSettings::read(c, resolved, static_cast<std::size_t>(h.dim()));
  const auto shots = detail::read_shots(c, resolved);
  const double beta = c.get_double("vqd_beta").value_or(5.0);
  if (!(beta >= 0.0)) throw ConfigError("vqd_beta must be >= 0");
  resolved.number("vqd_beta", beta);
  std::vector<QuantumAlgorithm> algorithms{QuantumAlgorithm::quantumgame, QuantumAlgorithm::vqd};
  if (const auto a = c.get_list("algorithms")) {
    algorithms.clear();
    for (const auto& name : *a) {
      if (name == "quantumgame") algorithms.push_back(QuantumAlgorithm::quantumgame);
      else if (name == "vqd") algorithms.push_back(QuantumAlgorithm::vqd);
      else throw ConfigError("unknown algorithm '" + name + "'");
    }
  }
  const bool smoke = ctx.smoke || c.get_bool("smoke").value_or(false);
  const auto num_seeds = smoke ? 1 : detail::positive<std::size_t>(c, "num_seeds", 1);
  out.seeds = detail::seed_list(detail::base_seed(c, ctx), num_seeds);
  resolved.list("seeds", out.seeds);
  std::string algo_text;
  for (auto a : algorithms) algo_text += std::string(algo_text.empty() ? "" : ",") + to_string(a);
  resolved.text("algorithms", algo_text);
  resolved.flag("smoke", smoke);
  const auto levels = smoke ? std::min<std::size_t>(2, run_settings.levels) : run_settings.levels;
  resolved.integer("levels", static_cast<long long>(levels));
  detail::finish(out, c, resolved);

  const AnsatzSpec spec = ansatz.build(h.num_qubits());
  out.ansatz = spec.describe();
  const auto oracle = exact_eigendecomposition(pauli_sum_to_matrix(h));

  std::vector<H2Cell> cells;
  for (auto a : algorithms) {
    for (auto n : shots) {
      for (auto s : out.seeds) cells.push_back({a, n, s});
    }
  }
  const auto results = run_cells<H2CellResult>(cells.size(), ctx.workers, [&](std::size_t i) {
    const auto& cell = cells[i];
    SolverConfig cfg = run_settings.solver(cell.shots, cell.seed);
    if (cell.algorithm == QuantumAlgorithm::vqd) cfg.beta = beta;
    std::ostringstream rows;
    std::size_t cumulative = 0;
    QuantumRunOptions opts;
    opts.observer = [&](const QuantumIterationRecord& rec) {
      if (rec.iteration > 0) ++cumulative;
      rows << cell.seed << ',' << out.config_hash << ",iteration," << to_string(cell.algorithm) << ','
           << cfg.shots.label() << ',' << rec.player << ',' << rec.iteration << ',' << cumulative << ','
           << detail::num(rec.energy) << ',' << detail::num(rec.utility) << ',' << detail::num(rec.grad_norm)
           << ",,\n";
    };
    H2CellResult r;
    r.run = run_sequential_quantum(h, spec, cfg, levels, cell.seed, cell.algorithm, opts);
    r.iteration_rows = rows.str();
    return r;
  });

  std::ostringstream csv;
  csv << "seed,config_hash,kind,algorithm,shots,player,iteration,cumulative_iteration,energy,utility,grad_norm,"
         "variance,converged\n";
  for (std::size_t j = 0; j < levels; ++j) {
    const auto idx = static_cast<Eigen::Index>(oracle.size() - 1 - static_cast<Eigen::Index>(j));
    csv << out.seeds.front() << ',' << out.config_hash << ",oracle,dense,exact," << (j + 1) << ",,,"
        << detail::num(oracle.eigenvalues[idx]) << ",,,,\n";
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& cell = cells[i];
    const auto& run = results[i].run;
    csv << results[i].iteration_rows;
    const std::string label = detail::shot_model(cell.shots, cell.seed).label();
    for (std::size_t j = 0; j < run.levels.size(); ++j) {
      const auto& level = run.levels[j];
      csv << cell.seed << ',' << out.config_hash << ",level," << to_string(cell.algorithm) << ',' << label << ','
          << (j + 1) << ',' << level.state.iterations_used << ',' << level.cumulative_iterations << ','
          << detail::num(level.energy) << ",," << detail::num(level.state.grad_norm_history.back()) << ','
          << detail::num(level.state.energy_variance) << ',' << (level.state.converged ? "true" : "false") << '\n';

      const double target = oracle.eigenvalues[oracle.size() - 1 - static_cast<Eigen::Index>(j)];
      const double err = std::abs(level.energy - target);
      std::string tag = std::string(to_string(cell.algorithm)) + " shots=" + label + " seed=" +
                        std::to_string(cell.seed) + " level=" + std::to_string(j + 1);
      double tol = 0.0;
      std::string rule;
      if (cell.shots == 0) {
        tol = cell.algorithm == QuantumAlgorithm::quantumgame ? 2e-2 : 5e-2;
        rule = detail::num(tol);
      } else {
        tol = 10.0 * std::sqrt(level.state.energy_variance / static_cast<double>(cell.shots));
        rule = "10*sqrt(Var/N)=" + detail::num(tol);
      }
      out.notes.push_back(tag + " energy=" + detail::num(level.energy) + " oracle=" + detail::num(target) +
                          " error=" + detail::num(err) + " tolerance=" + rule +
                          (level.state.converged ? "" : " (iteration budget reached)"));
      if (!(err <= tol)) out.failures.push_back(tag + " misses its tolerance");
    }
    if (run.hamiltonian_hash_before != run.hamiltonian_hash_after) {
      out.failures.push_back("Hamiltonian changed during a run");
    }
  }
  out.csv = csv.str();
  return out;
}

// ---------------------------------------------------------------------------
// beta-sweep

inline BenchOutput bench_beta_sweep(const KeyValueConfig& c, const BenchContext& ctx) {
  BenchOutput out;
  ResolvedConfig resolved;
  resolved.text("experiment", "beta-sweep");
  const PauliSum h = detail::load_hamiltonian(c, ctx, resolved);
  const auto ansatz = detail::AnsatzSettings::read(c, resolved);
  const auto run_settings = QuantumRunSettings::read(c, resolved, static_cast<std::size_t>(h.dim()));
  const auto shots = detail::read_shots(c, resolved);
  const bool smoke = ctx.smoke || c.get_bool("smoke").value_or(false);
  std::vector<double> betas{0.1, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0};
  if (const auto b = c.get_doubles("betas"); b && !smoke) betas = *b;
  if (smoke) betas = {5.0};
  if (betas.empty()) throw ConfigError("betas list is empty");
  for (double b : betas) {
    if (!(b >= 0.0)) throw ConfigError("betas must be >= 0");
  }
  const auto num_seeds = smoke ? 1 : detail::positive<std::size_t>(c, "num_seeds", 1);
  out.seeds = detail::seed_list(detail::base_seed(c, ctx), num_seeds);
  resolved.list("betas", betas);
  resolved.list("seeds", out.seeds);
  resolved.flag("smoke", smoke);
  detail::finish(out, c, resolved);

  const AnsatzSpec spec = ansatz.build(h.num_qubits());
  out.ansatz = spec.describe();
  const auto oracle = exact_eigendecomposition(pauli_sum_to_matrix(h));

  struct Cell {
    double beta;
    std::size_t shots;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (double b : betas) {
    for (auto n : shots) {
      for (auto s : out.seeds) cells.push_back({b, n, s});
    }
  }
  const auto results = run_cells<QuantumRunResult>(cells.size(), ctx.workers, [&](std::size_t i) {
    SolverConfig cfg = run_settings.solver(cells[i].shots, cells[i].seed);
    cfg.beta = cells[i].beta;
    return run_vqd(h, spec, cfg, run_settings.levels, cells[i].seed);
  });

  std::ostringstream csv;
  csv << "seed,config_hash,beta,shots,total_iterations,converged,max_energy_error\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& run = results[i];
    double worst = 0.0;
    for (std::size_t j = 0; j < run.levels.size(); ++j) {
      worst = std::max(worst, std::abs(run.levels[j].energy -
                                       oracle.eigenvalues[oracle.size() - 1 - static_cast<Eigen::Index>(j)]));
    }
    const std::string label = detail::shot_model(cells[i].shots, cells[i].seed).label();
    csv << cells[i].seed << ',' << out.config_hash << ',' << detail::num(cells[i].beta) << ',' << label << ','
        << run.total_iterations << ',' << (run.converged ? "true" : "false") << ',' << detail::num(worst) << '\n';
    out.notes.push_back("beta=" + detail::num(cells[i].beta) + " shots=" + label +
                        " total_iterations=" + std::to_string(run.total_iterations) +
                        " max_energy_error=" + detail::num(worst));
  }
  out.csv = csv.str();
  return out;
}

// ---------------------------------------------------------------------------
// diagnostics

inline BenchOutput bench_diagnostics(const KeyValueConfig& c, const BenchContext& ctx) {
  BenchOutput out;
  ResolvedConfig resolved;
  resolved.text("experiment", "diagnostics");
  const bool smoke = ctx.smoke || c.get_bool("smoke").value_or(false);
  DiagnosticsConfig d = smoke ? DiagnosticsConfig::smoke() : DiagnosticsConfig{};
  d.seed = detail::base_seed(c, ctx);
  const auto sizes = [&](const std::string& key, std::vector<Eigen::Index>& target) {
    if (const auto v = c.get_ints(key)) {
      if (smoke) return;
      target.assign(v->begin(), v->end());
      if (target.empty()) throw ConfigError(key + " list is empty");
    }
  };
  const auto count = [&](const std::string& key, std::size_t& target) {
    if (const auto v = c.get_int(key)) {
      if (*v < 0) throw ConfigError(key + " must be >= 0");
      if (!smoke) target = static_cast<std::size_t>(*v);
    }
  };
  count("lipschitz_samples", d.lipschitz_samples);
  sizes("lipschitz_dims", d.lipschitz_dims);
  d.sigma = c.get_double("sigma").value_or(d.sigma);
  d.c = c.get_double("c").value_or(d.c);
  d.exponent = detail::positive(c, "exponent", d.exponent);
  d.min_gap = c.get_double("min_gap").value_or(d.min_gap);
  if (const auto e = c.get_doubles("epsilons")) d.epsilons = *e;
  count("error_trials", d.error_trials);
  if (const auto v = c.get_int("error_dim")) d.error_dim = static_cast<Eigen::Index>(*v);
  count("error_parents", d.error_parents);
  sizes("convergence_dims", d.convergence_dims);
  count("convergence_seeds", d.convergence_seeds);
  count("convergence_players", d.convergence_players);
  d.phi_tol = c.get_double("phi_tol").value_or(d.phi_tol);
  count("quantum_samples", d.quantum_samples);
  const auto ansatz = detail::AnsatzSettings::read(c, resolved);
  d.quantum_layers = ansatz.layers;
  d.quantum_rotations = ansatz.rotations;
  d.ansatz_seed = ansatz.seed;
  if (d.quantum_samples > 0) d.hamiltonian = detail::load_hamiltonian(c, ctx, resolved);
  d.validate();

  out.seeds = {d.seed};
  resolved.integer("seed", static_cast<long long>(d.seed));
  resolved.integer("lipschitz_samples", static_cast<long long>(d.lipschitz_samples));
  resolved.list("lipschitz_dims", d.lipschitz_dims);
  resolved.number("sigma", d.sigma);
  resolved.number("c", d.c);
  resolved.number("exponent", d.exponent);
  resolved.number("min_gap", d.min_gap);
  resolved.list("epsilons", d.epsilons);
  resolved.integer("error_trials", static_cast<long long>(d.error_trials));
  resolved.integer("error_dim", static_cast<long long>(d.error_dim));
  resolved.integer("error_parents", static_cast<long long>(d.error_parents));
  resolved.list("convergence_dims", d.convergence_dims);
  resolved.integer("convergence_seeds", static_cast<long long>(d.convergence_seeds));
  resolved.integer("convergence_players", static_cast<long long>(d.convergence_players));
  resolved.number("phi_tol", d.phi_tol);
  resolved.integer("quantum_samples", static_cast<long long>(d.quantum_samples));
  resolved.flag("smoke", smoke);
  detail::finish(out, c, resolved);
  if (d.quantum_samples > 0) {
    out.ansatz = AnsatzSpec::random_layers(d.hamiltonian->num_qubits(), d.quantum_layers, d.quantum_rotations,
                                           d.ansatz_seed)
                     .describe();
  }

  // The four suites are independent cells.
  using Suite = std::function<std::vector<DiagnosticRow>(const DiagnosticsConfig&)>;
  const std::vector<Suite> suites{lipschitz_suite, error_accumulation_suite, convergence_suite, quantum_suite};
  const auto parts = run_cells<std::vector<DiagnosticRow>>(suites.size(), ctx.workers,
                                                            [&](std::size_t i) { return suites[i](d); });
  std::ostringstream csv;
  csv << "seed,config_hash,bound,parameters,bound_value,measured_value,pass\n";
  std::size_t total = 0;
  for (const auto& rows : parts) {
    for (const auto& r : rows) {
      ++total;
      csv << d.seed << ',' << out.config_hash << ',';
      write_diagnostic_row(csv, r);
      if (!r.pass) {
        out.failures.push_back(r.bound + " " + r.parameters + " bound=" + detail::num(r.bound_value) +
                               " measured=" + detail::num(r.measured_value));
      }
    }
  }
  out.csv = csv.str();
  out.notes.push_back(std::to_string(total) + " checks, " + std::to_string(out.failures.size()) + " violations");
  return out;
}

inline BenchOutput run_bench(Experiment e, const KeyValueConfig& c, const BenchContext& ctx) {
  if (const auto declared = c.get_string("experiment")) {
    if (parse_experiment(*declared) != e) {
      throw ConfigError("config is for experiment '" + *declared + "', not '" + to_string(e) + "'");
    }
  }
  switch (e) {
    case Experiment::scaling: return bench_scaling(c, ctx);
    case Experiment::h2: return bench_h2(c, ctx);
    case Experiment::beta_sweep: return bench_beta_sweep(c, ctx);
    case Experiment::diagnostics: return bench_diagnostics(c, ctx);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace eigengame
