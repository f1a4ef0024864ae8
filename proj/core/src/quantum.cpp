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

#include "fdlyap/quantum.hpp"

#include <cmath>
#include <sstream>

#include "fdlyap/errors.hpp"

namespace fdlyap {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << " must be a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* op) {
  if (a != b) {
    std::ostringstream os;
    os << op << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionError(os.str());
  }
}

double hermiticity_defect(const ComplexMatrix& m) { return max_abs_difference(m, m.adjoint()); }

ComplexMatrix outer(std::span<const Complex> amplitudes) {
  if (amplitudes.empty()) {
    throw DimensionError("amplitude vector is empty");
  }
  const auto n = static_cast<Eigen::Index>(amplitudes.size());
  const Eigen::Map<const ComplexVector> psi(amplitudes.data(), n);
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > tolerance::kNormalization) {
    std::ostringstream os;
    os.precision(17);
    os << "amplitude vector is not normalized (norm " << norm << ")";
    throw InvariantError(os.str());
  }
  return psi * psi.adjoint();
}

}  // namespace

double max_abs_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a.rows(), b.rows(), "max_abs_difference");
  require_same_dim(a.cols(), b.cols(), "max_abs_difference");
  return (a - b).cwiseAbs().maxCoeff();
}

double operator_norm(const ComplexMatrix& a) {
  if (a.size() == 0) {
    return 0.0;
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues()(0);
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  require_square(m_, "Hermitian operator");
  const double defect = hermiticity_defect(m_);
  if (!(defect <= tolerance::kHermitian)) {
    std::ostringstream os;
    os << "operator is not Hermitian (max |A - A^dagger| = " << defect << ")";
    throw InvariantError(os.str());
  }
}

HermitianOperator HermitianOperator::operator*(double s) const { return HermitianOperator(m_ * s); }

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  require_same_dim(dim(), other.dim(), "operator+");
  return HermitianOperator(m_ + other.m_);
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)), min_eigenvalue_(0.0) {
  require_square(m_, "density matrix");
  if (!m_.allFinite()) {
    throw InvariantError("density matrix has non-finite entries");
  }
  const double defect = hermiticity_defect(m_);
  if (!(defect <= tolerance::kHermitian)) {
    std::ostringstream os;
    os << "density matrix is not Hermitian (defect " << defect << ")";
    throw InvariantError(os.str());
  }
  const Complex tr = m_.trace();
  if (std::abs(tr.real() - 1.0) > tolerance::kTraceReal || std::abs(tr.imag()) >= tolerance::kTraceImag) {
    std::ostringstream os;
    os.precision(17);
    os << "density matrix trace is " << tr << ", expected 1";
    throw InvariantError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m_, Eigen::EigenvaluesOnly);
  min_eigenvalue_ = solver.eigenvalues()(0);
  if (min_eigenvalue_ < tolerance::kPositivity) {
    std::ostringstream os;
    os << "density matrix is not positive (min eigenvalue " << min_eigenvalue_ << ")";
    throw InvariantError(os.str());
  }
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

ComplexMatrix commutator(const HermitianOperator& a, const ComplexMatrix& b) {
  require_same_dim(a.dim(), b.rows(), "commutator");
  require_same_dim(b.rows(), b.cols(), "commutator");
  return a.matrix() * b - b * a.matrix();
}

double trace_inner(const HermitianOperator& a, const DensityMatrix& rho) {
  require_same_dim(a.dim(), rho.dim(), "trace_inner");
  const Complex tr = (a.matrix() * rho.matrix()).trace();
  if (std::abs(tr.imag()) >= 1e-10) {
    std::ostringstream os;
    os << "Tr(A rho) has imaginary part " << tr.imag();
    throw InvariantError(os.str());
  }
  return tr.real();
}

Eigensystem hermitian_eigensystem(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

BlochVector bloch_components(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw DimensionError("Bloch components are defined for qubits only (dim " + std::to_string(rho.dim()) + ")");
  }
  const BlochVector r{trace_inner(ops::sigma_x(), rho), trace_inner(ops::sigma_y(), rho),
                      trace_inner(ops::sigma_z(), rho)};
  if (r.norm() > 1.0 + 1e-8) {
    throw InvariantError("Bloch vector lies outside the unit ball");
  }
  return r;
}

DensityMatrix pure_state(std::span<const Complex> amplitudes) { return DensityMatrix(outer(amplitudes)); }

DensityMatrix state_from_bloch(const BlochVector& r) {
  if (r.norm() > 1.0 + 1e-12) {
    throw InvariantError("Bloch vector norm exceeds 1");
  }
  ComplexMatrix m = ops::identity(2).matrix();
  m += r.x * ops::sigma_x().matrix() + r.y * ops::sigma_y().matrix() + r.z * ops::sigma_z().matrix();
  return DensityMatrix(0.5 * m);
}

DensityMatrix random_pure_state(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector psi(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    psi(i) = Complex(re, im);
  }
  psi /= psi.norm();
  return pure_state(std::span<const Complex>(psi.data(), static_cast<std::size_t>(dim)));
}

namespace ops {

HermitianOperator identity(Eigen::Index dim) { return HermitianOperator(ComplexMatrix::Identity(dim, dim)); }

HermitianOperator zero(Eigen::Index dim) { return HermitianOperator(ComplexMatrix::Zero(dim, dim)); }

HermitianOperator sigma_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return HermitianOperator(std::move(m));
}

HermitianOperator sigma_y() {
  ComplexMatrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return HermitianOperator(std::move(m));
}

HermitianOperator sigma_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return HermitianOperator(std::move(m));
}

ComplexMatrix sigma_minus() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  return m;
}

HermitianOperator pauli(double cx, double cy, double cz) {
  return HermitianOperator(cx * sigma_x().matrix() + cy * sigma_y().matrix() + cz * sigma_z().matrix());
}

HermitianOperator basis_projector(Eigen::Index dim, Eigen::Index index) {
  if (index < 0 || index >= dim) {
    throw DimensionError("basis index out of range");
  }
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return HermitianOperator(std::move(m));
}

HermitianOperator projector(std::span<const Complex> amplitudes) { return HermitianOperator(outer(amplitudes)); }

}  // namespace ops

}  // namespace fdlyap
