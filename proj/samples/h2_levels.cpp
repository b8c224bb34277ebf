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


// Recovers the four H2 energy levels with the quantum game and prints them
// next to the dense eigenvalues. Usage: h2_levels [path/to/hamiltonian.txt]

#include <cstdio>
#include <string>

#include "eigengame/hamiltonian.hpp"
#include "eigengame/quantumgame.hpp"

int main(int argc, char** argv) {
  using namespace eigengame;
  const std::string path = argc > 1 ? argv[1] : std::string(EIGENGAME_SOURCE_DIR) + "/data/h2_parity_2q.txt";
  try {
    const auto h = load_pauli_sum(path);
    const auto exact = exact_eigendecomposition(pauli_sum_to_matrix(h));
    const auto spec = AnsatzSpec::random_layers(h.num_qubits(), 3, 3, 6);

    SolverConfig cfg;
    cfg.direction = Direction::minimize;
    const int levels = static_cast<int>(exact.eigenvalues.size());
    const auto run = run_quantumgame(h, spec, cfg, levels, 1);

    std::printf("%-6s %-16s %-16s %s\n", "level", "quantumgame", "exact", "iterations");
    for (int j = 0; j < static_cast<int>(run.levels.size()); ++j) {
      std::printf("%-6d %-16.10f %-16.10f %zu\n", j, run.levels[j].energy, exact.eigenvalues[levels - 1 - j],
                  run.levels[j].state.iterations_used);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "h2_levels: %s\n", e.what());
    return 1;
  }
  return 0;
}
