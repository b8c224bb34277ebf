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

// Dense Hermitian operators, the exact eigendecomposition oracle, and the
// seeded power-law test-matrix generator.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "eigengame/errors.hpp"
#include "eigengame/pauli.hpp"

namespace eigengame {

using Complex = std::complex<double>;

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};
template <typename T>
inline constexpr bool is_complex_v = is_complex<T>::value;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Absolute tolerance on |m(i,j) - conj(m(j,i))|.
inline constexpr double kHermiticityTolerance = 1e-12;

/// Dense p x p Hermitian (real symmetric when Scalar = double) operator.
/// Immutable once constructed; construction validates Hermiticity.
template <typename Scalar>
class HermitianMatrix {
 public:
  using scalar_type = Scalar;
  using Matrix = DenseMatrix<Scalar>;
  using Vector = DenseVector<Scalar>;

  explicit HermitianMatrix(Matrix entries, double tolerance = kHermiticityTolerance)
      : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
      throw InvalidDimensionError("Hermitian matrix must be square and non-empty, got " +
                                  std::to_string(entries_.rows()) + "x" +
                                  std::to_string(entries_.cols()));
    }
    if (!entries_.allFinite()) throw HermiticityError("matrix has non-finite entries");
    const double deviation = (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    if (deviation > tolerance) {
      throw HermiticityError("matrix is not Hermitian (max |m - m^H| = " +
                             std::to_string(deviation) + ")");
    }
  }

  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const Matrix& entries() const noexcept { return entries_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

  bool has_qubit_dim() const noexcept {
    const auto d = static_cast<std::uint64_t>(dim());
    return (d & (d - 1)) == 0;
  }

  int num_qubits() const {
    if (!has_qubit_dim()) {
      throw InvalidDimensionError("dimension " + std::to_string(dim()) + " is not a power of two");
    }
    int q = 0;
    while ((Eigen::Index{1} << q) < dim()) ++q;
    return q;
  }

  Vector diagonal() const { return entries_.diagonal(); }

  friend bool operator==(const HermitianMatrix& a, const HermitianMatrix& b) {
    return a.entries_.rows() == b.entries_.rows() && a.entries_ == b.entries_;
  }

 private:
  Matrix entries_;
};

using RealSymmetricMatrix = HermitianMatrix<double>;
using ComplexHermitianMatrix = HermitianMatrix<Complex>;

/// Exact eigenpairs sorted by descending eigenvalue.
template <typename Scalar>
struct Spectrum {
  Eigen::VectorXd eigenvalues;        // descending
  DenseMatrix<Scalar> eigenvectors;   // column i pairs with eigenvalues[i]
  Eigen::VectorXd gaps;               // gaps[i] = eigenvalues[i] - eigenvalues[i + 1]
  bool degenerate = false;            // some gap is zero to working precision

  Eigen::Index size() const noexcept { return eigenvalues.size(); }
  DenseVector<Scalar> vector(Eigen::Index i) const { return eigenvectors.col(i); }

  double spectral_norm() const {
    return std::max(std::abs(eigenvalues[0]), std::abs(eigenvalues[eigenvalues.size() - 1]));
  }

  double min_gap() const {
    return gaps.size() == 0 ? std::numeric_limits<double>::infinity() : gaps.minCoeff();
  }
};

namespace detail {

inline Eigen::VectorXd gaps_of(const Eigen::VectorXd& descending) {
  const Eigen::Index n = descending.size();
  Eigen::VectorXd gaps(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index i = 0; i + 1 < n; ++i) gaps[i] = descending[i] - descending[i + 1];
  return gaps;
}

inline bool is_degenerate(const Eigen::VectorXd& descending, const Eigen::VectorXd& gaps) {
  if (gaps.size() == 0) return false;
  const double scale = std::max(1.0, descending.cwiseAbs().maxCoeff());
  return gaps.minCoeff() <= 1e-9 * scale;
}

template <typename Scalar>
Scalar draw_gaussian(std::mt19937_64& rng, std::normal_distribution<double>& normal) {
  if constexpr (is_complex_v<Scalar>) {
    const double re = normal(rng);
    const double im = normal(rng);
    return Scalar(re, im);
  } else {
    return normal(rng);
  }
}

}  // namespace detail

/// Brute-force dense diagonalization; the reference every solver is checked
/// against.
template <typename Scalar>
Spectrum<Scalar> exact_eigendecomposition(const HermitianMatrix<Scalar>& m) {
  Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(m.entries());
  if (solver.info() != Eigen::Success) throw NumericalOverflowError("eigensolver did not converge");
  Spectrum<Scalar> out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  out.gaps = detail::gaps_of(out.eigenvalues);
  out.degenerate = detail::is_degenerate(out.eigenvalues, out.gaps);
  return out;
}

/// Validating overload for raw matrices; throws HermiticityError on
/// non-Hermitian input.
template <typename Derived>
auto exact_eigendecomposition(const Eigen::MatrixBase<Derived>& raw) {
  using Scalar = typename Derived::Scalar;
  return exact_eigendecomposition(HermitianMatrix<Scalar>(DenseMatrix<Scalar>(raw)));
}

/// Seeded Haar-random orthogonal (Scalar = double) or unitary
/// (Scalar = Complex) matrix, from the QR factorization of a Gaussian matrix.
template <typename Scalar>
DenseMatrix<Scalar> random_orthonormal(Eigen::Index dim, std::uint64_t seed) {
  if (dim < 1) throw InvalidDimensionError("random_orthonormal: dim must be >= 1");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x51ed2701u};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix<Scalar> g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = detail::draw_gaussian<Scalar>(rng, normal);
  }
  Eigen::HouseholderQR<DenseMatrix<Scalar>> qr(g);
  DenseMatrix<Scalar> q = qr.householderQ() * DenseMatrix<Scalar>::Identity(dim, dim);
  const auto& r = qr.matrixQR();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0.0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

struct PowerLawOptions {
  double min_gap = 1e-6;               // every pairwise gap must exceed this
  bool identity_similarity = false;    // debug override: P = I, so M = D
  std::size_t max_redraws = 100000;
};

template <typename Scalar>
struct PowerLawHamiltonian {
  HermitianMatrix<Scalar> matrix;
  Spectrum<Scalar> spectrum;
};

/// lambda = u^0.5 has density 2*lambda on (0,1).
inline constexpr double kDefaultPowerLawExponent = 0.5;
inline constexpr double kPowerLawFloor = 1e-4;
inline constexpr double kPowerLawCeiling = 1.0 - 1e-4;

/// Draws `dim` distinct eigenvalues lambda = u^exponent, u ~ U(0,1), clamped
/// to [1e-4, 1 - 1e-4], sorted descending. Values closer than min_gap to a
/// neighbour are redrawn.
inline Eigen::VectorXd sample_powerlaw_eigenvalues(Eigen::Index dim, std::uint64_t seed,
                                                   double exponent,
                                                   const PowerLawOptions& options = {}) {
  if (dim < 1) throw InvalidDimensionError("power-law spectrum needs dim >= 1");
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw InvalidArgumentError("power-law exponent must be positive");
  }
  if (!(options.min_gap > 0.0)) throw InvalidArgumentError("min_gap must be positive");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    0x9a3f1c55u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  auto draw = [&] {
    return std::clamp(std::pow(uniform(rng), exponent), kPowerLawFloor, kPowerLawCeiling);
  };

  std::vector<double> values(static_cast<std::size_t>(dim));
  for (auto& v : values) v = draw();
  std::size_t redraws = 0;
  for (;;) {
    std::sort(values.begin(), values.end(), std::greater<>());
    bool clean = true;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      if (values[i] - values[i + 1] <= options.min_gap) {
        values[i + 1] = draw();
        clean = false;
        if (++redraws > options.max_redraws) {
          throw InvalidArgumentError("could not draw a non-degenerate power-law spectrum (dim " +
                                     std::to_string(dim) + ", exponent " +
                                     std::to_string(exponent) + ")");
        }
      }
    }
    if (clean) break;
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), dim);
}

/// M = P^H D P with D the sampled power-law eigenvalues and P a seeded random
/// orthonormal matrix. The returned spectrum is the one that was sampled.
template <typename Scalar = double>
PowerLawHamiltonian<Scalar> build_powerlaw_hamiltonian(Eigen::Index dim, std::uint64_t seed,
                                                       double exponent,
                                                       const PowerLawOptions& options = {}) {
  if (dim < 2) throw InvalidDimensionError("build_powerlaw_hamiltonian: dim must be >= 2");
  const Eigen::VectorXd lambda = sample_powerlaw_eigenvalues(dim, seed, exponent, options);
  const DenseMatrix<Scalar> p = options.identity_similarity
                                    ? DenseMatrix<Scalar>::Identity(dim, dim)
                                    : random_orthonormal<Scalar>(dim, seed);
  const DenseMatrix<Scalar> p_adj = p.adjoint();
  DenseMatrix<Scalar> m = p_adj * lambda.cast<Scalar>().asDiagonal() * p;
  m = (0.5 * (m + m.adjoint())).eval();

  Spectrum<Scalar> spectrum;
  spectrum.eigenvalues = lambda;
  spectrum.eigenvectors = p_adj;
  spectrum.gaps = detail::gaps_of(lambda);
  spectrum.degenerate = false;
  return {HermitianMatrix<Scalar>(std::move(m)), std::move(spectrum)};
}

/// Dense matrix of sum_i a_i kron(P_i0, P_i1, ...).
inline ComplexHermitianMatrix pauli_sum_to_matrix(const PauliSum& h) {
  if (h.num_qubits() < 1) throw MalformedPauliError("Pauli sum has no qubits");
  const auto dim = static_cast<std::uint64_t>(h.dim());
  DenseMatrix<Complex> m = DenseMatrix<Complex>::Zero(static_cast<Eigen::Index>(dim),
                                                      static_cast<Eigen::Index>(dim));
  for (const auto& term : h.terms()) {
    const auto masks = PauliMasks::from_string(term.paulis);
    const Complex scale = term.coefficient * masks.global_phase();
    for (std::uint64_t x = 0; x < dim; ++x) {
      m(static_cast<Eigen::Index>(x ^ masks.x_mask), static_cast<Eigen::Index>(x)) +=
          scale * masks.sign(x);
    }
  }
  return ComplexHermitianMatrix(std::move(m));
}

/// Real part of a Hermitian matrix whose imaginary part vanishes.
inline RealSymmetricMatrix to_real_symmetric(const ComplexHermitianMatrix& m,
                                             double tolerance = 1e-12) {
  const double imag = m.entries().imag().cwiseAbs().maxCoeff();
  if (imag > tolerance) {
    throw InvalidArgumentError("matrix has imaginary entries up to " + std::to_string(imag));
  }
  return RealSymmetricMatrix(m.entries().real());
}

inline ComplexHermitianMatrix to_complex(const RealSymmetricMatrix& m) {
  return ComplexHermitianMatrix(m.entries().cast<Complex>());
}

/// CSV of "re,im" pairs, one matrix row per line.
template <typename Scalar>
void write_matrix_csv(std::ostream& out, const HermitianMatrix<Scalar>& m) {
  const auto old_precision = out.precision(17);
  for (Eigen::Index i = 0; i < m.dim(); ++i) {
    for (Eigen::Index j = 0; j < m.dim(); ++j) {
      const Complex z(m(i, j));
      if (j) out << ',';
      out << z.real() << ',' << z.imag();
    }
    out << '\n';
  }
  out.precision(old_precision);
}

}  // namespace eigengame
