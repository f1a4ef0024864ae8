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

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "fdlyap/quantum.hpp"

namespace fdlyap {

/// Positive operator-valued measure {M_j}: M_j >= 0, sum_j M_j = I.
class Povm {
 public:
  explicit Povm(std::vector<HermitianOperator> effects);

  /// {P, I - P}.
  static Povm binary(const HermitianOperator& projector);

  const std::vector<HermitianOperator>& effects() const noexcept { return effects_; }
  Eigen::Index dim() const noexcept { return effects_.front().dim(); }

 private:
  std::vector<HermitianOperator> effects_;
};

/// p_j = Tr(M_j rho), clipped into [0, 1].
std::vector<double> outcome_probabilities(const Povm& povm, const DensityMatrix& rho);

/// V is read directly from the state.
struct ExactReadout {};

/// V is one minus the target-outcome frequency over `shots` independent
/// preparations of the sampled state.
struct ShotReadout {
  int shots = 1000;
};

/// V is corrupted by additive noise drawn uniformly from [-eta_max, eta_max].
struct BoundedNoiseReadout {
  double eta_max = 0.0;
};

using ReadoutMode = std::variant<ExactReadout, ShotReadout, BoundedNoiseReadout>;

std::string readout_name(const ReadoutMode& mode);

/// The measurement-derived Lyapunov observable V = 1 - Tr(P rho).
///
/// Owns its seeded random stream, so an instance belongs to one run at a time.
/// Evaluation is non-demolition: it reads statistics of the sampled state and
/// does not disturb the plant.
class LyapunovObservable {
 public:
  LyapunovObservable(HermitianOperator target_projector, ReadoutMode mode, std::uint64_t seed);

  /// V as the controller sees it; consumes random draws in shot and
  /// bounded-noise modes.
  double evaluate(const DensityMatrix& rho);

  /// Noise-free 1 - Tr(P rho).
  double exact(const DensityMatrix& rho) const;

  /// (V < 1e-9) == (||rho - P||_F < 1e-4). Used to certify properness.
  bool is_proper_at(const DensityMatrix& rho) const;

  /// Restarts the random stream from `seed`.
  void reseed(std::uint64_t seed);

  const HermitianOperator& target_projector() const noexcept { return target_; }
  const ReadoutMode& mode() const noexcept { return mode_; }
  std::uint64_t seed() const noexcept { return seed_; }
  /// eta_max for bounded noise, zero otherwise.
  double noise_bound() const;

 private:
  HermitianOperator target_;
  Povm povm_;
  ReadoutMode mode_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

}  // namespace fdlyap
