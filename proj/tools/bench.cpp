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


// bench scaling|h2|beta-sweep|diagnostics --config <file> --seed <int> --out <dir>
//
// Exit codes: 0 success, 1 solver or bound failure, 2 configuration error.

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "eigengame/bench.hpp"

namespace fs = std::filesystem;
using namespace eigengame;

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string manifest(const BenchOutput& r, Experiment e, const std::string& command, const std::string& config_path,
                     std::size_t workers) {
  std::ostringstream m;
  m << "experiment: " << to_string(e) << '\n'
    << "timestamp: " << utc_timestamp() << '\n'
    << "command: " << command << '\n'
    << "eigengame_version: " << EIGENGAME_VERSION << '\n'
    << "eigen_version: " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.' << EIGEN_MINOR_VERSION << '\n'
    << "config_file: " << (config_path.empty() ? "(built-in defaults)" : config_path) << '\n'
    << "config_hash: " << r.config_hash << '\n'
    << "workers: " << workers << '\n'
    << "seeds:";
  for (auto s : r.seeds) m << ' ' << s;
  m << "\nstatus: " << (r.exit_code() == 0 ? "ok" : "failed") << "\n\n[config]\n" << r.resolved;
  if (!r.ansatz.empty()) m << "\n[ansatz]\n" << r.ansatz;
  m << "\n[summary]\n";
  for (const auto& n : r.notes) m << n << '\n';
  if (!r.failures.empty()) {
    m << "\n[failures]\n";
    for (const auto& f : r.failures) m << f << '\n';
  }
  return m.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EigenGame / QuantumGame experiment harness"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool smoke = false;
  std::size_t workers = 0;

  const std::pair<Experiment, const char*> experiments[] = {
      {Experiment::scaling, "classical iteration counts vs dimension, exact vs 0th-order gradients"},
      {Experiment::h2, "H2 energy levels with QuantumGame and VQD, noiseless and sampled"},
      {Experiment::beta_sweep, "VQD iterations and accuracy across penalty weights"},
      {Experiment::diagnostics, "Lipschitz, error-accumulation and iteration-bound checks"},
  };
  for (const auto& [e, about] : experiments) {
    auto* sub = app.add_subcommand(to_string(e), about);
    sub->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "base seed, overrides the config");
    sub->add_option("--out", out_dir, "output directory")->required();
    sub->add_flag("--smoke", smoke, "single-sample quick run");
    sub->add_option("--workers", workers, "worker threads (0: all cores)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const Experiment experiment = parse_experiment(app.get_subcommands().front()->get_name());
  std::string command;
  for (int i = 0; i < argc; ++i) command += (i ? " " : "") + std::string(argv[i]);

  BenchOutput result;
  try {
    BenchContext ctx;
    ctx.seed = seed;
    ctx.smoke = smoke;
    ctx.workers = workers;
    KeyValueConfig cfg = KeyValueConfig::empty();
    if (!config_path.empty()) {
      cfg = KeyValueConfig::load(config_path);
      ctx.base_dir = fs::path(config_path).parent_path();
    }
    result = run_bench(experiment, cfg, ctx);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 1;
  }

  try {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "results.csv", result.csv);
    write_file(fs::path(out_dir) / "manifest.txt",
               manifest(result, experiment, command, config_path, workers));
  } catch (const std::exception& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return 2;
  }

  for (const auto& n : result.notes) std::cout << n << '\n';
  for (const auto& f : result.failures) std::cerr << "FAIL " << f << '\n';
  std::cout << "config_hash " << result.config_hash << " -> " << out_dir << '\n';
  return result.exit_code();
}
