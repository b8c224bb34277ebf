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

// Weighted sums of Pauli strings and their text serialization.
//
// Qubit ordering: character k of a Pauli string acts on qubit k, and qubit 0
// is the most significant bit of a basis index, so the operator for "AB" is
// kron(A, B).

#pragma once

#include <Eigen/Dense>

#include <bit>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "eigengame/errors.hpp"

namespace eigengame {

struct PauliTerm {
  double coefficient = 0.0;
  std::string paulis;

  friend bool operator==(const PauliTerm&, const PauliTerm&) = default;
};

/// Bit-mask form of one Pauli string: P|x> = i^{y_count} (-1)^{|x & z_mask|} |x ^ x_mask>.
struct PauliMasks {
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  int y_count = 0;

  static PauliMasks from_string(std::string_view paulis) {
    PauliMasks masks;
    const auto q = paulis.size();
    for (std::size_t k = 0; k < q; ++k) {
      const std::uint64_t bit = std::uint64_t{1} << (q - 1 - k);
      switch (paulis[k]) {
        case 'I':
          break;
        case 'X':
          masks.x_mask |= bit;
          break;
        case 'Y':
          masks.x_mask |= bit;
          masks.z_mask |= bit;
          ++masks.y_count;
          break;
        case 'Z':
          masks.z_mask |= bit;
          break;
        default:
          throw MalformedPauliError("invalid Pauli character '" +
                                    std::string(1, paulis[k]) + "'");
      }
    }
    return masks;
  }

  std::complex<double> global_phase() const {
    static constexpr std::complex<double> kPowers[4] = {
        {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
    return kPowers[y_count % 4];
  }

  /// Phase picked up by basis state |x> (before the bit flip).
  double sign(std::uint64_t x) const {
    return (std::popcount(x & z_mask) & 1) ? -1.0 : 1.0;
  }
};

/// Hamiltonian as a real-weighted sum of Pauli strings.
class PauliSum {
 public:
  PauliSum() = default;

  PauliSum(int num_qubits, std::vector<PauliTerm> terms)
      : num_qubits_(num_qubits), terms_(std::move(terms)) {
    if (num_qubits_ < 1 || num_qubits_ > 30) {
      throw MalformedPauliError("num_qubits must be in [1, 30], got " +
                                std::to_string(num_qubits_));
    }
    for (const auto& term : terms_) {
      if (static_cast<int>(term.paulis.size()) != num_qubits_) {
        throw MalformedPauliError("Pauli string '" + term.paulis + "' has length " +
                                  std::to_string(term.paulis.size()) + ", expected " +
                                  std::to_string(num_qubits_));
      }
      if (!std::isfinite(term.coefficient)) {
        throw MalformedPauliError("non-finite coefficient for '" + term.paulis + "'");
      }
      (void)PauliMasks::from_string(term.paulis);
    }
  }

  /// Infers the qubit count from the first term.
  static PauliSum from_terms(std::vector<PauliTerm> terms) {
    if (terms.empty()) throw MalformedPauliError("empty Pauli sum");
    const int q = static_cast<int>(terms.front().paulis.size());
    return PauliSum(q, std::move(terms));
  }

  int num_qubits() const noexcept { return num_qubits_; }
  std::size_t dim() const noexcept { return std::size_t{1} << num_qubits_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  /// Sum of |coefficient|; an upper bound on the operator norm.
  double coefficient_l1_norm() const {
    double total = 0.0;
    for (const auto& t : terms_) total += std::abs(t.coefficient);
    return total;
  }

  PauliSum scaled(double factor) const {
    auto out = *this;
    for (auto& t : out.terms_) t.coefficient *= factor;
    return out;
  }

  /// Returns this + shift * I.
  PauliSum shifted(double shift) const {
    auto out = *this;
    out.terms_.push_back({shift, std::string(static_cast<std::size_t>(num_qubits_), 'I')});
    return out;
  }

  /// Returns this (x) P_extra, appending one qubit acted on by `extra`.
  PauliSum tensor_with(char extra) const {
    std::vector<PauliTerm> terms = terms_;
    for (auto& t : terms) t.paulis.push_back(extra);
    return PauliSum(num_qubits_ + 1, std::move(terms));
  }

  friend bool operator==(const PauliSum&, const PauliSum&) = default;

 private:
  int num_qubits_ = 0;
  std::vector<PauliTerm> terms_;
};

/// out = h |in>, for a dense amplitude vector of matching dimension.
inline Eigen::VectorXcd apply_pauli_sum(const PauliSum& h, const Eigen::VectorXcd& in) {
  if (static_cast<std::size_t>(in.size()) != h.dim()) {
    throw DimensionMismatchError("Pauli sum acts on " + std::to_string(h.dim()) +
                                 " amplitudes, state has " + std::to_string(in.size()));
  }
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(in.size());
  const auto dim = static_cast<std::uint64_t>(in.size());
  for (const auto& term : h.terms()) {
    const auto masks = PauliMasks::from_string(term.paulis);
    const std::complex<double> scale = term.coefficient * masks.global_phase();
    for (std::uint64_t x = 0; x < dim; ++x) {
      out[static_cast<Eigen::Index>(x ^ masks.x_mask)] +=
          scale * masks.sign(x) * in[static_cast<Eigen::Index>(x)];
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format: optional '#' comment lines, then "<coefficient> <pauli string>"
// per line. Blank lines are ignored.

inline std::string format_coefficient(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw InvalidArgumentError("cannot format coefficient");
  return std::string(buf, ptr);
}

inline PauliSum parse_pauli_sum(std::istream& in) {
  std::vector<PauliTerm> terms;
  std::string line;
  std::size_t line_no = 0;
  std::size_t expected_len = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#') continue;

    std::istringstream fields(line.substr(first));
    std::string coeff_text, paulis, extra;
    if (!(fields >> coeff_text >> paulis)) {
      throw FormatError(line_no, "expected '<coefficient> <pauli string>'");
    }
    if (fields >> extra) throw FormatError(line_no, "unexpected trailing field '" + extra + "'");

    double coefficient = 0.0;
    const char* begin = coeff_text.data();
    const char* end = begin + coeff_text.size();
    if (*begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, coefficient);
    if (ec != std::errc() || ptr != end || !std::isfinite(coefficient)) {
      throw FormatError(line_no, "invalid coefficient '" + coeff_text + "'");
    }
    for (char c : paulis) {
      if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
        throw FormatError(line_no, "invalid Pauli string '" + paulis + "'");
      }
    }
    if (expected_len == 0) {
      expected_len = paulis.size();
    } else if (paulis.size() != expected_len) {
      throw MalformedPauliError("line " + std::to_string(line_no) + ": Pauli string '" +
                                paulis + "' has length " + std::to_string(paulis.size()) +
                                ", earlier terms have length " + std::to_string(expected_len));
    }
    terms.push_back({coefficient, std::move(paulis)});
  }
  if (terms.empty()) throw FormatError(line_no, "no Pauli terms found");
  return PauliSum::from_terms(std::move(terms));
}

inline PauliSum load_pauli_sum(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("cannot open Pauli file '" + path + "'");
  return parse_pauli_sum(in);
}

inline void write_pauli_sum(std::ostream& out, const PauliSum& h,
                            const std::vector<std::string>& header = {}) {
  for (const auto& line : header) out << "# " << line << '\n';
  for (const auto& t : h.terms()) out << format_coefficient(t.coefficient) << ' ' << t.paulis << '\n';
}

inline void save_pauli_sum(const std::string& path, const PauliSum& h,
                           const std::vector<std::string>& header = {}) {
  std::ofstream out(path);
  if (!out) throw InvalidArgumentError("cannot write Pauli file '" + path + "'");
  write_pauli_sum(out, h, header);
}

}  // namespace eigengame
