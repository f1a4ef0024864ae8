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

#include "fdlyap/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fdlyap/errors.hpp"

namespace fdlyap {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void validate_mode(const ReadoutMode& mode) {
  std::visit(overloaded{[](const ExactReadout&) {},
                        [](const ShotReadout& m) {
                          if (m.shots < 1) {
                            throw InvariantError("shot count must be positive");
                          }
                        },
                        [](const BoundedNoiseReadout& m) {
                          if (!(m.eta_max >= 0.0) || !std::isfinite(m.eta_max)) {
                            throw InvariantError("eta_max must be a finite non-negative number");
                          }
                        }},
             mode);
}

}  // namespace

Povm::Povm(std::vector<HermitianOperator> effects) : effects_(std::move(effects)) {
  if (effects_.empty()) {
    throw InvariantError("a POVM needs at least one effect");
  }
  const auto n = effects_.front().dim();
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (const auto& e : effects_) {
    if (e.dim() != n) {
      throw DimensionError("POVM effects have different dimensions");
    }
    if (hermitian_eigensystem(e).values(0) < -1e-10) {
      throw InvariantError("POVM effect is not positive semidefinite");
    }
    sum += e.matrix();
  }
  if (max_abs_difference(sum, ComplexMatrix::Identity(n, n)) > 1e-10) {
    throw InvariantError("POVM effects do not sum to the identity");
  }
}

Povm Povm::binary(const HermitianOperator& projector) {
  return Povm({projector, HermitianOperator(ComplexMatrix::Identity(projector.dim(), projector.dim()) -
                                            projector.matrix())});
}

std::vector<double> outcome_probabilities(const Povm& povm, const DensityMatrix& rho) {
  std::vector<double> p;
  p.reserve(povm.effects().size());
  double total = 0.0;
  for (const auto& e : povm.effects()) {
    const double pj = trace_inner(e, rho);
    if (pj < -1e-10 || pj > 1.0 + 1e-10) {
      std::ostringstream os;
      os << "outcome probability " << pj << " outside [0, 1]";
      throw InvariantError(os.str());
    }
    p.push_back(std::clamp(pj, 0.0, 1.0));
    total += p.back();
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvariantError("outcome probabilities do not sum to one");
  }
  return p;
}

std::string readout_name(const ReadoutMode& mode) {
  return std::visit(overloaded{[](const ExactReadout&) { return std::string("exact"); },
                               [](const ShotReadout&) { return std::string("shots"); },
                               [](const BoundedNoiseReadout&) { return std::string("bounded_noise"); }},
                    mode);
}

LyapunovObservable::LyapunovObservable(HermitianOperator target_projector, ReadoutMode mode, std::uint64_t seed)
    : target_(std::move(target_projector)), povm_(Povm::binary(target_)), mode_(mode), seed_(seed), rng_(seed) {
  const ComplexMatrix& p = target_.matrix();
  if (max_abs_difference(p * p, p) > 1e-10) {
    throw InvariantError("target operator is not a projector (P^2 != P)");
  }
  if (std::abs(p.trace() - Complex(1.0, 0.0)) > 1e-10) {
    throw InvariantError("target projector must have unit trace (rank one)");
  }
  validate_mode(mode_);
}

double LyapunovObservable::exact(const DensityMatrix& rho) const {
  return outcome_probabilities(povm_, rho)[1];
}

double LyapunovObservable::evaluate(const DensityMatrix& rho) {
  const double v = exact(rho);
  return std::visit(overloaded{[&](const ExactReadout&) { return v; },
                               [&](const ShotReadout& m) {
                                 std::binomial_distribution<int> draws(m.shots, 1.0 - v);
                                 const int hits = draws(rng_);
                                 return 1.0 - static_cast<double>(hits) / m.shots;
                               },
                               [&](const BoundedNoiseReadout& m) {
                                 if (m.eta_max == 0.0) {
                                   return v;
                                 }
                                 std::uniform_real_distribution<double> eta(-m.eta_max, m.eta_max);
                                 return v + eta(rng_);
                               }},
                    mode_);
}

bool LyapunovObservable::is_proper_at(const DensityMatrix& rho) const {
  const bool vanishes = exact(rho) < 1e-9;
  const bool at_target = (rho.matrix() - target_.matrix()).norm() < 1e-4;
  return vanishes == at_target;
}

void LyapunovObservable::reseed(std::uint64_t seed) {
  seed_ = seed;
  rng_.seed(seed);
}

double LyapunovObservable::noise_bound() const {
  if (const auto* m = std::get_if<BoundedNoiseReadout>(&mode_)) {
    return m->eta_max;
  }
  return 0.0;
}

}  // namespace fdlyap
