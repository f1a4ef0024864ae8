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

// The plant: drift Hamiltonian plus Lindblad dissipation plus piecewise
// constant control. A step takes exactly one ControlInput for its whole
// duration, so zero-order hold is a property of the interface.

#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fdlyap/quantum.hpp"

namespace fdlyap {

/// Control amplitudes u_k, one per control Hamiltonian.
struct ControlInput {
  std::vector<double> values;

  static ControlInput zeros(std::size_t channels) { return {std::vector<double>(channels, 0.0)}; }

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }

  friend bool operator==(const ControlInput&, const ControlInput&) = default;
};

/// Generator of the controlled dynamics. The controller never sees this
/// object; only the plant and the offline analysis do.
class GeneratorSpec {
 public:
  GeneratorSpec(HermitianOperator drift, std::vector<ComplexMatrix> collapse_ops,
                std::vector<HermitianOperator> control_hams);

  const HermitianOperator& drift() const noexcept { return drift_; }
  const std::vector<ComplexMatrix>& collapse_ops() const noexcept { return collapse_ops_; }
  const std::vector<HermitianOperator>& control_hams() const noexcept { return control_hams_; }

  Eigen::Index dim() const noexcept { return drift_.dim(); }
  std::size_t num_controls() const noexcept { return control_hams_.size(); }
  bool is_unitary() const noexcept { return collapse_ops_.empty(); }

  /// H_drift + sum_k u_k H_k.
  HermitianOperator total_hamiltonian(const ControlInput& u) const;

 private:
  HermitianOperator drift_;
  std::vector<ComplexMatrix> collapse_ops_;
  std::vector<HermitianOperator> control_hams_;
};

/// -i[H_drift + sum u_k H_k, rho] + sum_k (L_k rho L_k^dag - {L_k^dag L_k, rho}/2).
///
/// Accepts a bare matrix so intermediate Runge-Kutta stages (not themselves
/// valid states) can be evaluated.
ComplexMatrix lindblad_rhs(const GeneratorSpec& gen, const ControlInput& u, const ComplexMatrix& rho);
ComplexMatrix lindblad_rhs(const GeneratorSpec& gen, const ControlInput& u, const DensityMatrix& rho);

/// U rho U^dag with U = exp(-i H_total dt) built from the eigendecomposition
/// of H_total. Only valid without collapse operators.
DensityMatrix step_exact_unitary(const GeneratorSpec& gen, const ControlInput& u, const DensityMatrix& rho, double dt);

inline constexpr int kDefaultSubsteps = 64;

/// Classical RK4 on lindblad_rhs with step dt/substeps. The state is
/// symmetrized once per substep and never renormalized; a trace change above
/// 1e-6 over the call raises IntegrationError.
DensityMatrix step_rk4(const GeneratorSpec& gen, const ControlInput& u, const DensityMatrix& rho, double dt,
                       int substeps = kDefaultSubsteps);

/// Conservative bound D >= ||F_drift(rho) + F_noise(rho)||_1 over all states:
/// 2||H_drift|| + sum_k (2||L_k||^2 + ||L_k^dag L_k||), operator norms.
double disturbance_bound(const GeneratorSpec& gen);

/// Propagator choice for the closed loop.
struct Integrator {
  enum class Kind { exact_unitary, rk4 };

  Kind kind = Kind::exact_unitary;
  int substeps = kDefaultSubsteps;

  static Integrator exact_unitary() { return {Kind::exact_unitary, kDefaultSubsteps}; }
  static Integrator rk4(int substeps = kDefaultSubsteps) { return {Kind::rk4, substeps}; }

  std::string name() const;

  friend bool operator==(const Integrator&, const Integrator&) = default;
};

DensityMatrix propagate(const Integrator& integrator, const GeneratorSpec& gen, const ControlInput& u,
                        const DensityMatrix& rho, double dt);

}  // namespace fdlyap
