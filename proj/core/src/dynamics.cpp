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

#include "fdlyap/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "fdlyap/errors.hpp"

namespace fdlyap {

namespace {

constexpr Complex kMinusI{0.0, -1.0};

void require_positive_dt(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InvariantError("time step must be positive and finite");
  }
}

void check_state_dim(const GeneratorSpec& gen, Eigen::Index rows, Eigen::Index cols) {
  if (rows != gen.dim() || cols != gen.dim()) {
    std::ostringstream os;
    os << "state is " << rows << "x" << cols << " but the generator acts on dimension " << gen.dim();
    throw DimensionError(os.str());
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

// Generator with the control amplitudes folded in, reused across the
// Runge-Kutta stages of one call.
struct FrozenGenerator {
  ComplexMatrix hamiltonian;
  std::vector<ComplexMatrix> jumps;
  std::vector<ComplexMatrix> jumps_adj;
  ComplexMatrix half_decay;  // sum_k L_k^dag L_k / 2

  FrozenGenerator(const GeneratorSpec& gen, const ControlInput& u)
      : hamiltonian(gen.total_hamiltonian(u).matrix()), half_decay(ComplexMatrix::Zero(gen.dim(), gen.dim())) {
    for (const auto& l : gen.collapse_ops()) {
      jumps.push_back(l);
      jumps_adj.push_back(l.adjoint());
      half_decay += 0.5 * (jumps_adj.back() * l);
    }
  }

  ComplexMatrix operator()(const ComplexMatrix& rho) const {
    ComplexMatrix out = kMinusI * (hamiltonian * rho - rho * hamiltonian);
    if (!jumps.empty()) {
      for (std::size_t k = 0; k < jumps.size(); ++k) {
        out += jumps[k] * rho * jumps_adj[k];
      }
      out -= half_decay * rho + rho * half_decay;
    }
    return out;
  }
};

}  // namespace

GeneratorSpec::GeneratorSpec(HermitianOperator drift, std::vector<ComplexMatrix> collapse_ops,
                             std::vector<HermitianOperator> control_hams)
    : drift_(std::move(drift)), collapse_ops_(std::move(collapse_ops)), control_hams_(std::move(control_hams)) {
  const auto n = drift_.dim();
  for (const auto& l : collapse_ops_) {
    if (l.rows() != n || l.cols() != n) {
      throw DimensionError("collapse operator dimension differs from the drift Hamiltonian");
    }
  }
  for (const auto& h : control_hams_) {
    if (h.dim() != n) {
      throw DimensionError("control Hamiltonian dimension differs from the drift Hamiltonian");
    }
  }
}

HermitianOperator GeneratorSpec::total_hamiltonian(const ControlInput& u) const {
  if (u.size() != control_hams_.size()) {
    std::ostringstream os;
    os << "control input has " << u.size() << " channels, generator has " << control_hams_.size();
    throw DimensionError(os.str());
  }
  ComplexMatrix h = drift_.matrix();
  for (std::size_t k = 0; k < control_hams_.size(); ++k) {
    if (u[k] != 0.0) {
      h += u[k] * control_hams_[k].matrix();
    }
  }
  return HermitianOperator(std::move(h));
}

ComplexMatrix lindblad_rhs(const GeneratorSpec& gen, const ControlInput& u, const ComplexMatrix& rho) {
  check_state_dim(gen, rho.rows(), rho.cols());
  return FrozenGenerator(gen, u)(rho);
}

ComplexMatrix lindblad_rhs(const GeneratorSpec& gen, const ControlInput& u, const DensityMatrix& rho) {
  return lindblad_rhs(gen, u, rho.matrix());
}

DensityMatrix step_exact_unitary(const GeneratorSpec& gen, const ControlInput& u, const DensityMatrix& rho, double dt) {
  if (!gen.is_unitary()) {
    throw InvariantError("exact unitary propagation requires an empty collapse-operator list; use step_rk4");
  }
  require_positive_dt(dt);
  check_state_dim(gen, rho.dim(), rho.dim());

  const Eigensystem eig = hermitian_eigensystem(gen.total_hamiltonian(u));
  ComplexVector phases(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    phases(i) = std::exp(kMinusI * (eig.values(i) * dt));
  }
  const ComplexMatrix propagator = eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
  return DensityMatrix(hermitian_part(propagator * rho.matrix() * propagator.adjoint()));
}

DensityMatrix step_rk4(const GeneratorSpec& gen, const ControlInput& u, const DensityMatrix& rho, double dt,
                       int substeps) {
  require_positive_dt(dt);
  if (substeps < 1) {
    throw InvariantError("RK4 needs at least one substep");
  }
  check_state_dim(gen, rho.dim(), rho.dim());

  const FrozenGenerator f(gen, u);
  const double h = dt / substeps;
  ComplexMatrix state = rho.matrix();
  for (int s = 0; s < substeps; ++s) {
    const ComplexMatrix k1 = f(state);
    const ComplexMatrix k2 = f(state + (0.5 * h) * k1);
    const ComplexMatrix k3 = f(state + (0.5 * h) * k2);
    const ComplexMatrix k4 = f(state + h * k3);
    state += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    state = hermitian_part(state);
  }

  if (!state.allFinite()) {
    throw IntegrationError("RK4 produced non-finite entries");
  }
  const double drift = std::abs(state.trace() - rho.trace());
  if (drift > 1e-6) {
    std::ostringstream os;
    os << "RK4 trace drift " << drift << " exceeds 1e-6 (dt " << dt << ", substeps " << substeps << ")";
    throw IntegrationError(os.str());
  }
  return DensityMatrix(std::move(state));
}

double disturbance_bound(const GeneratorSpec& gen) {
  double bound = 2.0 * operator_norm(gen.drift().matrix());
  for (const auto& l : gen.collapse_ops()) {
    const double n = operator_norm(l);
    bound += 2.0 * n * n + operator_norm(l.adjoint() * l);
  }
  return bound;
}

std::string Integrator::name() const {
  return kind == Kind::exact_unitary ? "exact_unitary" : "rk4(" + std::to_string(substeps) + ")";
}

DensityMatrix propagate(const Integrator& integrator, const GeneratorSpec& gen, const ControlInput& u,
                        const DensityMatrix& rho, double dt) {
  switch (integrator.kind) {
    case Integrator::Kind::exact_unitary:
      return step_exact_unitary(gen, u, rho, dt);
    case Integrator::Kind::rk4:
      return step_rk4(gen, u, rho, dt, integrator.substeps);
  }
  throw Error("unknown integrator");
}

}  // namespace fdlyap
