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

// 64-bit FNV-1a, used to fingerprint operators and configs.

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <cstring>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>

#include "eigengame/pauli.hpp"

namespace eigengame {

class Fnv1a {
 public:
  Fnv1a& bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      state_ ^= p[i];
      state_ *= 0x100000001b3ULL;
    }
    return *this;
  }
  Fnv1a& text(std::string_view s) { return bytes(s.data(), s.size()); }
  Fnv1a& number(double x) { return bytes(&x, sizeof x); }
  Fnv1a& number(std::uint64_t x) { return bytes(&x, sizeof x); }

  std::uint64_t value() const noexcept { return state_; }

  std::string hex() const {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << state_;
    return out.str();
  }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t hash_of(const PauliSum& h) {
  Fnv1a f;
  f.number(static_cast<std::uint64_t>(h.num_qubits()));
  for (const auto& t : h.terms()) f.number(t.coefficient).text(t.paulis).text("\n");
  return f.value();
}

template <typename Derived>
std::uint64_t hash_of(const Eigen::MatrixBase<Derived>& m) {
  Fnv1a f;
  f.number(static_cast<std::uint64_t>(m.rows())).number(static_cast<std::uint64_t>(m.cols()));
  const auto dense = m.eval();
  f.bytes(dense.data(), sizeof(typename Derived::Scalar) * static_cast<std::size_t>(dense.size()));
  return f.value();
}

}  // namespace eigengame
