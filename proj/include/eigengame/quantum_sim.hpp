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

// Dense statevector simulation: rotation ansatzes, Pauli-sum expectations,
// a Gaussian shot-noise model, the Hadamard-style interference circuit for
// <psi_r|M|psi_j>, the SwapTest, and parameter-shift gradients.
//
// Qubit k is bit (q - 1 - k) of a basis index, matching PauliSum.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "eigengame/errors.hpp"
#include "eigengame/pauli.hpp"

namespace eigengame {

using Eigen::VectorXcd;
using Complex = std::complex<double>;

inline constexpr double kStateNormTolerance = 1e-10;

class StateVector {
 public:
  /// |0...0>
  static StateVector zero(int num_qubits) { return basis(num_qubits, 0); }

  static StateVector basis(int num_qubits, std::uint64_t index) {
    check_qubits(num_qubits);
    VectorXcd amps = VectorXcd::Zero(Eigen::Index{1} << num_qubits);
    if (index >= static_cast<std::uint64_t>(amps.size())) {
      throw InvalidArgumentError("basis index out of range");
    }
    amps[static_cast<Eigen::Index>(index)] = 1.0;
    return StateVector(num_qubits, std::move(amps));
  }

  /// |+...+>
  static StateVector plus(int num_qubits) {
    check_qubits(num_qubits);
    const Eigen::Index dim = Eigen::Index{1} << num_qubits;
    return StateVector(num_qubits, VectorXcd::Constant(dim, 1.0 / std::sqrt(double(dim))));
  }

  /// Validates length 2^q and unit norm.
  static StateVector from_amplitudes(VectorXcd amps, double tolerance = kStateNormTolerance) {
    const auto dim = amps.size();
    if (dim < 2 || (dim & (dim - 1)) != 0) {
      throw InvalidDimensionError("amplitude count " + std::to_string(dim) + " is not 2^q");
    }
    const double norm = amps.norm();
    if (std::abs(norm - 1.0) > tolerance) {
      throw NormalizationError("state norm is " + std::to_string(norm));
    }
    int q = 0;
    while ((Eigen::Index{1} << q) < dim) ++q;
    return StateVector(q, std::move(amps));
  }

  /// Rescales to unit norm; for amplitude vectors produced by arithmetic.
  static StateVector normalized(VectorXcd amps) {
    const double norm = amps.norm();
    if (!(norm > 0.0)) throw NormalizationError("cannot normalize the zero vector");
    amps /= norm;
    return from_amplitudes(std::move(amps));
  }

  int num_qubits() const noexcept { return num_qubits_; }
  Eigen::Index dim() const noexcept { return amps_.size(); }
  const VectorXcd& amplitudes() const noexcept { return amps_; }
  double norm() const { return amps_.norm(); }

  /// <this|other>
  Complex inner(const StateVector& other) const {
    if (other.num_qubits_ != num_qubits_) throw DimensionMismatchError("inner: qubit counts differ");
    return amps_.dot(other.amps_);
  }

  /// this (x) other, with this on the leading (more significant) qubits.
  StateVector tensor(const StateVector& other) const {
    VectorXcd out(amps_.size() * other.amps_.size());
    for (Eigen::Index i = 0; i < amps_.size(); ++i) {
      out.segment(i * other.amps_.size(), other.amps_.size()) = amps_[i] * other.amps_;
    }
    return StateVector(num_qubits_ + other.num_qubits_, std::move(out));
  }

  /// Applies a 2x2 unitary [[a, b], [c, d]] to `qubit`.
  StateVector& apply(int qubit, Complex a, Complex b, Complex c, Complex d) {
    const std::uint64_t bit = mask(qubit);
    const auto dim = static_cast<std::uint64_t>(amps_.size());
    for (std::uint64_t i = 0; i < dim; ++i) {
      if (i & bit) continue;
      const auto i0 = static_cast<Eigen::Index>(i);
      const auto i1 = static_cast<Eigen::Index>(i | bit);
      const Complex x0 = amps_[i0];
      const Complex x1 = amps_[i1];
      amps_[i0] = a * x0 + b * x1;
      amps_[i1] = c * x0 + d * x1;
    }
    return *this;
  }

  StateVector& rx(int qubit, double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return apply(qubit, c, Complex(0, -s), Complex(0, -s), c);
  }
  StateVector& ry(int qubit, double theta) {
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return apply(qubit, c, -s, s, c);
  }
  StateVector& rz(int qubit, double theta) {
    return apply(qubit, std::polar(1.0, -theta / 2), 0.0, 0.0, std::polar(1.0, theta / 2));
  }
  StateVector& h(int qubit) {
    const double r = std::numbers::sqrt2 / 2;
    return apply(qubit, r, r, r, -r);
  }
  StateVector& s(int qubit) { return apply(qubit, 1.0, 0.0, 0.0, Complex(0, 1)); }
  StateVector& x(int qubit) { return apply(qubit, 0.0, 1.0, 1.0, 0.0); }

  StateVector& cnot(int control, int target) {
    if (control == target) throw InvalidArgumentError("cnot: control equals target");
    const std::uint64_t cbit = mask(control), tbit = mask(target);
    const auto dim = static_cast<std::uint64_t>(amps_.size());
    for (std::uint64_t i = 0; i < dim; ++i) {
      if ((i & cbit) && !(i & tbit)) {
        std::swap(amps_[static_cast<Eigen::Index>(i)], amps_[static_cast<Eigen::Index>(i | tbit)]);
      }
    }
    return *this;
  }

  /// Fredkin gate: swaps qubits a and b when control is |1>.
  StateVector& cswap(int control, int a, int b) {
    if (control == a || control == b || a == b) throw InvalidArgumentError("cswap: qubits must differ");
    const std::uint64_t cbit = mask(control), abit = mask(a), bbit = mask(b);
    const auto dim = static_cast<std::uint64_t>(amps_.size());
    for (std::uint64_t i = 0; i < dim; ++i) {
      if ((i & cbit) && (i & abit) && !(i & bbit)) {
        std::swap(amps_[static_cast<Eigen::Index>(i)],
                  amps_[static_cast<Eigen::Index>((i & ~abit) | bbit)]);
      }
    }
    return *this;
  }

  /// Probability that `qubit` reads 0.
  double probability_zero(int qubit) const {
    const std::uint64_t bit = mask(qubit);
    double p = 0.0;
    for (Eigen::Index i = 0; i < amps_.size(); ++i) {
      if (!(static_cast<std::uint64_t>(i) & bit)) p += std::norm(amps_[i]);
    }
    return p;
  }

 private:
  StateVector(int num_qubits, VectorXcd amps) : num_qubits_(num_qubits), amps_(std::move(amps)) {}

  static void check_qubits(int q) {
    if (q < 1 || q > 30) throw InvalidDimensionError("qubit count must be in [1, 30]");
  }

  std::uint64_t mask(int qubit) const {
    if (qubit < 0 || qubit >= num_qubits_) {
      throw InvalidArgumentError("qubit " + std::to_string(qubit) + " out of range");
    }
    return std::uint64_t{1} << (num_qubits_ - 1 - qubit);
  }

  int num_qubits_ = 0;
  VectorXcd amps_;
};

inline void write_state_csv(std::ostream& out, const StateVector& psi) {
  const auto old_precision = out.precision(17);
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    out << psi.amplitudes()[i].real() << ',' << psi.amplitudes()[i].imag() << '\n';
  }
  out.precision(old_precision);
}

// ---------------------------------------------------------------------------
// Ansatz

enum class RotationAxis { X, Y, Z };
enum class InitialState { zero, plus };

inline char axis_letter(RotationAxis axis) {
  switch (axis) {
    case RotationAxis::X: return 'X';
    case RotationAxis::Y: return 'Y';
    case RotationAxis::Z: return 'Z';
  }
  return '?';
}

struct RotationGate {
  RotationAxis axis = RotationAxis::Y;
  int qubit = 0;
  std::size_t slot = 0;   // index within the layer's parameter block
};

struct AnsatzLayer {
  std::vector<RotationGate> rotations;
  bool cnot_ring = true;   // CNOT(k, k+1 mod q) for every k, after the rotations
};

class AnsatzSpec {
 public:
  AnsatzSpec(int num_qubits, std::vector<AnsatzLayer> layers, InitialState initial = InitialState::plus)
      : num_qubits_(num_qubits), layers_(std::move(layers)), initial_(initial) {
    if (num_qubits_ < 1 || num_qubits_ > 30) throw InvalidDimensionError("ansatz qubit count out of range");
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const auto& rot = layers_[l].rotations;
      std::vector<int> seen(rot.size(), 0);
      for (const auto& g : rot) {
        if (g.qubit < 0 || g.qubit >= num_qubits_) {
          throw InvalidArgumentError("layer " + std::to_string(l) + ": qubit out of range");
        }
        if (g.slot >= rot.size() || seen[g.slot]++) {
          throw InvalidArgumentError("layer " + std::to_string(l) +
                                     ": parameter slots must be referenced exactly once");
        }
      }
      offsets_.push_back(num_parameters_);
      num_parameters_ += rot.size();
    }
  }

  /// Per layer: `rotations_per_layer` rotations with seeded axis and target,
  /// then a CNOT ring. Same (q, layers, rotations, seed) gives the same spec.
  static AnsatzSpec random_layers(int num_qubits, std::size_t num_layers, std::size_t rotations_per_layer,
                                  std::uint64_t seed, InitialState initial = InitialState::plus) {
    if (num_qubits < 1) throw InvalidDimensionError("ansatz needs at least one qubit");
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      0x3c6ef372u};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<int> axis(0, 2);
    std::uniform_int_distribution<int> qubit(0, num_qubits - 1);
    std::vector<AnsatzLayer> layers(num_layers);
    for (auto& layer : layers) {
      for (std::size_t s = 0; s < rotations_per_layer; ++s) {
        const auto a = static_cast<RotationAxis>(axis(rng));
        layer.rotations.push_back({a, qubit(rng), s});
      }
      layer.cnot_ring = num_qubits > 1;
    }
    return AnsatzSpec(num_qubits, std::move(layers), initial);
  }

  int num_qubits() const noexcept { return num_qubits_; }
  std::size_t num_layers() const noexcept { return layers_.size(); }
  const std::vector<AnsatzLayer>& layers() const noexcept { return layers_; }
  InitialState initial_state() const noexcept { return initial_; }
  std::size_t num_parameters() const noexcept { return num_parameters_; }
  std::size_t layer_offset(std::size_t layer) const { return offsets_.at(layer); }

  std::string describe() const {
    std::ostringstream out;
    out << "ansatz qubits=" << num_qubits_ << " layers=" << layers_.size()
        << " parameters=" << num_parameters_
        << " initial=" << (initial_ == InitialState::plus ? "plus" : "zero") << '\n';
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      out << "layer " << l << ':';
      for (const auto& g : layers_[l].rotations) {
        out << " R" << axis_letter(g.axis) << "(q" << g.qubit << ",s" << g.slot << ')';
      }
      if (layers_[l].cnot_ring) out << " cnot_ring";
      out << '\n';
    }
    return out.str();
  }

  friend bool operator==(const AnsatzSpec& a, const AnsatzSpec& b) { return a.describe() == b.describe(); }

 private:
  int num_qubits_;
  std::vector<AnsatzLayer> layers_;
  InitialState initial_;
  std::vector<std::size_t> offsets_;
  std::size_t num_parameters_ = 0;
};

/// Flat parameter vector addressable as (layer, slot).
class ParameterTensor {
 public:
  ParameterTensor() = default;
  explicit ParameterTensor(Eigen::VectorXd values) : values_(std::move(values)) {}

  static ParameterTensor zeros(const AnsatzSpec& spec) {
    return ParameterTensor(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.num_parameters())));
  }

  /// Uniform in [-pi, pi), seeded.
  static ParameterTensor random(const AnsatzSpec& spec, std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      0x0b5e55edu};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    Eigen::VectorXd v(static_cast<Eigen::Index>(spec.num_parameters()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = angle(rng);
    return ParameterTensor(std::move(v));
  }

  const Eigen::VectorXd& values() const noexcept { return values_; }
  Eigen::VectorXd& values() noexcept { return values_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }

  double at(const AnsatzSpec& spec, std::size_t layer, std::size_t slot) const {
    bind_check(spec);
    if (slot >= spec.layers().at(layer).rotations.size()) throw BindingError("slot out of range");
    return values_[static_cast<Eigen::Index>(spec.layer_offset(layer) + slot)];
  }

  void bind_check(const AnsatzSpec& spec) const {
    if (size() != spec.num_parameters()) {
      throw BindingError("ansatz has " + std::to_string(spec.num_parameters()) +
                         " parameters, tensor has " + std::to_string(size()));
    }
  }

  friend bool operator==(const ParameterTensor& a, const ParameterTensor& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  Eigen::VectorXd values_;
};

inline StateVector apply_ansatz(const AnsatzSpec& spec, const ParameterTensor& theta) {
  theta.bind_check(spec);
  const int q = spec.num_qubits();
  StateVector psi = spec.initial_state() == InitialState::plus ? StateVector::plus(q) : StateVector::zero(q);
  for (std::size_t l = 0; l < spec.num_layers(); ++l) {
    const auto& layer = spec.layers()[l];
    const std::size_t offset = spec.layer_offset(l);
    for (const auto& g : layer.rotations) {
      const double angle = theta.values()[static_cast<Eigen::Index>(offset + g.slot)];
      switch (g.axis) {
        case RotationAxis::X: psi.rx(g.qubit, angle); break;
        case RotationAxis::Y: psi.ry(g.qubit, angle); break;
        case RotationAxis::Z: psi.rz(g.qubit, angle); break;
      }
    }
    if (layer.cnot_ring && q > 1) {
      // On two qubits the ring degenerates to a single CNOT.
      if (q == 2) {
        psi.cnot(0, 1);
      } else {
        for (int k = 0; k < q; ++k) psi.cnot(k, (k + 1) % q);
      }
    }
  }
  return psi;
}

// ---------------------------------------------------------------------------
// Expectations and shot noise

namespace detail {

inline void check_qubits(const PauliSum& h, const StateVector& psi) {
  if (h.num_qubits() != psi.num_qubits()) {
    throw DimensionMismatchError("operator acts on " + std::to_string(h.num_qubits()) +
                                 " qubits, state has " + std::to_string(psi.num_qubits()));
  }
}

}  // namespace detail

/// <psi|h|psi>
inline double expectation(const PauliSum& h, const StateVector& psi) {
  detail::check_qubits(h, psi);
  return psi.amplitudes().dot(apply_pauli_sum(h, psi.amplitudes())).real();
}

/// <h^2> - <h>^2, clamped at zero.
inline double variance(const PauliSum& h, const StateVector& psi) {
  detail::check_qubits(h, psi);
  const VectorXcd hpsi = apply_pauli_sum(h, psi.amplitudes());
  const double mean = psi.amplitudes().dot(hpsi).real();
  return std::max(0.0, hpsi.squaredNorm() - mean * mean);
}

/// Shot budget per expectation value; nullopt means exact expectations.
class ShotModel {
 public:
  static ShotModel exact() { return ShotModel(); }
  static ShotModel finite(std::size_t shots, std::uint64_t seed) {
    if (shots == 0) throw InvalidShotCountError("shot count must be >= 1");
    ShotModel m;
    m.shots_ = shots;
    m.seed_ = seed;
    return m;
  }

  bool is_exact() const noexcept { return !shots_.has_value(); }
  std::size_t shots() const {
    if (!shots_) throw InvalidShotCountError("exact shot model has no shot count");
    return *shots_;
  }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Shot count as text: "exact" or N.
  std::string label() const { return shots_ ? std::to_string(*shots_) : std::string("exact"); }

 private:
  std::optional<std::size_t> shots_;
  std::uint64_t seed_ = 0;
};

/// RNG stream for one chain of noisy estimates. Not shared across threads.
class ShotSampler {
 public:
  explicit ShotSampler(const ShotModel& model, std::uint64_t stream = 0) : model_(model) {
    std::seed_seq seq{static_cast<std::uint32_t>(model.seed()), static_cast<std::uint32_t>(model.seed() >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x6a09e667u};
    rng_.seed(seq);
  }

  const ShotModel& model() const noexcept { return model_; }

  /// exact + N(0, variance / shots); exact when the model is exact.
  double perturb(double exact, double variance) {
    if (model_.is_exact()) return exact;
    const double sd = std::sqrt(std::max(0.0, variance) / static_cast<double>(model_.shots()));
    return exact + sd * normal_(rng_);
  }

 private:
  ShotModel model_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Estimated <h> from a finite shot budget.
inline double shot_noisy_expectation(const PauliSum& h, const StateVector& psi, ShotSampler& sampler) {
  detail::check_qubits(h, psi);
  const VectorXcd hpsi = apply_pauli_sum(h, psi.amplitudes());
  const double mean = psi.amplitudes().dot(hpsi).real();
  return sampler.perturb(mean, hpsi.squaredNorm() - mean * mean);
}

inline double shot_noisy_expectation(const PauliSum& h, const StateVector& psi, const ShotModel& shots) {
  if (shots.is_exact()) throw InvalidShotCountError("shot_noisy_expectation needs a finite shot count");
  ShotSampler sampler(shots);
  return shot_noisy_expectation(h, psi, sampler);
}

inline double measured_expectation(const PauliSum& h, const StateVector& psi, ShotSampler* sampler) {
  return sampler ? shot_noisy_expectation(h, psi, *sampler) : expectation(h, psi);
}

/// <psi_r|h|psi_j> from the (q+1)-qubit interference circuit: the ancilla
/// (last qubit) holds (|psi_j>|0> + |psi_r>|1>)/sqrt(2); H then <h (x) Z>
/// gives the real part, S then H then <h (x) Z> the imaginary part.
inline Complex mixed_expectation(const PauliSum& h, const StateVector& psi_r, const StateVector& psi_j,
                                 ShotSampler* sampler = nullptr) {
  detail::check_qubits(h, psi_r);
  detail::check_qubits(h, psi_j);
  const Eigen::Index dim = psi_r.dim();
  VectorXcd joint(2 * dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    joint[2 * i] = psi_j.amplitudes()[i] * std::numbers::sqrt2 / 2.0;
    joint[2 * i + 1] = psi_r.amplitudes()[i] * std::numbers::sqrt2 / 2.0;
  }
  const StateVector prepared = StateVector::from_amplitudes(std::move(joint), 1e-8);
  const int ancilla = h.num_qubits();
  const PauliSum hz = h.tensor_with('Z');

  StateVector real_circuit = prepared;
  real_circuit.h(ancilla);
  StateVector imag_circuit = prepared;
  imag_circuit.s(ancilla).h(ancilla);
  return {measured_expectation(hz, real_circuit, sampler), measured_expectation(hz, imag_circuit, sampler)};
}

inline Complex mixed_expectation(const PauliSum& h, const AnsatzSpec& spec, const ParameterTensor& theta_r,
                                 const ParameterTensor& theta_j, ShotSampler* sampler = nullptr) {
  return mixed_expectation(h, apply_ansatz(spec, theta_r), apply_ansatz(spec, theta_j), sampler);
}

/// |<psi1|psi2>|^2 from the (2q+1)-qubit SwapTest, with
/// P(ancilla = 0) = 1/2 + |<psi1|psi2>|^2 / 2.
inline double swap_test_overlap(const StateVector& psi1, const StateVector& psi2,
                                ShotSampler* sampler = nullptr) {
  if (psi1.num_qubits() != psi2.num_qubits()) throw DimensionMismatchError("swap test: qubit counts differ");
  const int q = psi1.num_qubits();
  StateVector circuit = StateVector::zero(1).tensor(psi1).tensor(psi2);
  circuit.h(0);
  for (int k = 0; k < q; ++k) circuit.cswap(0, 1 + k, 1 + q + k);
  circuit.h(0);
  const double overlap = std::clamp(2.0 * circuit.probability_zero(0) - 1.0, 0.0, 1.0);
  if (!sampler) return overlap;
  // Var(2 P0_hat - 1) = 4 P0 (1 - P0) / N = (1 - overlap^2) / N.
  return std::clamp(sampler->perturb(overlap, 1.0 - overlap * overlap), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Gradients

using ParameterObjective = std::function<double(const ParameterTensor&)>;

/// Component m is lambda [f(theta + s e_m) - f(theta - s e_m)] with
/// s = pi / (4 lambda); exact for gates exp(-i theta G) with G = +-lambda.
inline Eigen::VectorXd parameter_shift_gradient(const ParameterObjective& objective, const ParameterTensor& theta,
                                                double shift_eigenvalue = 0.5) {
  if (!(shift_eigenvalue > 0.0)) throw InvalidArgumentError("shift eigenvalue must be positive");
  const double shift = std::numbers::pi / (4.0 * shift_eigenvalue);
  Eigen::VectorXd grad(theta.values().size());
  ParameterTensor probe = theta;
  for (Eigen::Index m = 0; m < grad.size(); ++m) {
    const double base = theta.values()[m];
    probe.values()[m] = base + shift;
    const double up = objective(probe);
    probe.values()[m] = base - shift;
    const double down = objective(probe);
    probe.values()[m] = base;
    grad[m] = shift_eigenvalue * (up - down);
  }
  return grad;
}

}  // namespace eigengame
