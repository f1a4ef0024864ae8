// Copyright 2026 The fdlyap Authors
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

// Dense complex linear algebra on small matrices and the quantum-state value
// types. Every type validates its physical invariants on construction and is
// immutable afterwards.

#pragma once

#include <complex>
#include <random>
#include <span>

#include <Eigen/Dense>

namespace fdlyap {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tolerance {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTraceReal = 1e-10;
inline constexpr double kTraceImag = 1e-12;
inline constexpr double kPositivity = -1e-8;
inline constexpr double kNormalization = 1e-10;
}  // namespace tolerance

/// Largest entrywise |a_ij - b_ij|.
double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b);

/// Spectral norm (largest singular value).
double operator_norm(const ComplexMatrix& a);

/// A Hermitian matrix: Hamiltonians, projectors, POVM effects.
class HermitianOperator {
 public:
  /// Throws InvariantError if `m` is not square or not Hermitian within
  /// tolerance::kHermitian.
  explicit HermitianOperator(ComplexMatrix m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

  HermitianOperator operator*(double s) const;
  HermitianOperator operator+(const HermitianOperator& other) const;

 private:
  ComplexMatrix m_;
};

/// Trace-one positive semidefinite Hermitian matrix.
///
/// Positivity is checked against tolerance::kPositivity and never repaired:
/// states produced by an integrator that drifted outside the tolerance are
/// rejected rather than projected back.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

  Complex trace() const { return m_.trace(); }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }
  double purity() const;

 private:
  ComplexMatrix m_;
  double min_eigenvalue_;
};

/// Returns a*b - b*a.
ComplexMatrix commutator(const HermitianOperator& a, const ComplexMatrix& b);

/// Re Tr(a rho). Throws InvariantError if the imaginary part exceeds 1e-10.
double trace_inner(const HermitianOperator& a, const DensityMatrix& rho);

struct Eigensystem {
  RealVector values;     // ascending
  ComplexMatrix vectors;  // columns are eigenvectors
};

Eigensystem hermitian_eigensystem(const HermitianOperator& a);

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

/// (Tr sx rho, Tr sy rho, Tr sz rho). Requires dim 2.
BlochVector bloch_components(const DensityMatrix& rho);

/// |psi><psi| for a unit-norm amplitude vector.
DensityMatrix pure_state(std::span<const Complex> amplitudes);

/// (I + r.sigma)/2 for |r| <= 1.
DensityMatrix state_from_bloch(const BlochVector& r);

/// Haar-random pure state (normalized complex Gaussian amplitudes).
DensityMatrix random_pure_state(Eigen::Index dim, std::mt19937_64& rng);

namespace ops {

HermitianOperator identity(Eigen::Index dim);
HermitianOperator zero(Eigen::Index dim);
HermitianOperator sigma_x();
HermitianOperator sigma_y();
HermitianOperator sigma_z();
/// |0><1|, maps the excited state |1> to |0>.
ComplexMatrix sigma_minus();
/// cx*sx + cy*sy + cz*sz.
HermitianOperator pauli(double cx, double cy, double cz);
/// |i><i| in dimension `dim`.
HermitianOperator basis_projector(Eigen::Index dim, Eigen::Index index);
/// |psi><psi| for a unit-norm vector.
HermitianOperator projector(std::span<const Complex> amplitudes);

}  // namespace ops

}  // namespace fdlyap
