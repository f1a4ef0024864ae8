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

// Model-free feedback laws. Nothing in this header can see a quantum state:
// the inputs are sampled Lyapunov values and, for the double-probe law, an
// opaque oracle that returns the one-step-ahead value of a candidate input.

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdlyap/dynamics.hpp"

namespace fdlyap {

enum class ControllerMode { sign_based, double_probe };

/// How double-probe candidates are evaluated.
///   branch:     the probe is simulated from a snapshot of the sampled state
///               and does not consume plant time.
///   sequential: each probe is applied to the plant for a sub-interval; the
///               sampling interval is split into 2m probe slots plus one
///               actuation slot.
enum class ProbeSemantics { branch, sequential };

std::string to_string(ControllerMode mode);
std::string to_string(ProbeSemantics semantics);

/// Probe values whose difference is at most this are treated as a symmetric
/// (uninformative) pseudo-gradient.
inline constexpr double kSymmetryTolerance = 1e-12;

struct ControllerState {
  ControllerMode mode = ControllerMode::double_probe;
  std::vector<double> gains;          // kappa_k(t_n)
  std::vector<double> initial_gains;  // kappa_k(t_0)
  std::vector<double> alpha;          // amplification rates
  double u_max = 2.0;
  double lambda = 1.0;           // pseudo-gradient step scale (double-probe)
  double probe_amplitude = 0.5;  // double-probe only
  std::optional<double> prev_V;
  ProbeSemantics probe_semantics = ProbeSemantics::branch;

  static ControllerState sign_based(std::vector<double> gains, std::vector<double> alpha, double u_max);
  static ControllerState double_probe(std::vector<double> gains, std::vector<double> alpha, double u_max,
                                      double lambda, double probe_amplitude);

  std::size_t channels() const noexcept { return gains.size(); }

  /// Throws InvariantError unless gains, alpha, u_max (and lambda, probe
  /// amplitude in double-probe mode) are positive and consistently sized.
  void validate() const;

  friend bool operator==(const ControllerState&, const ControllerState&) = default;
};

/// Lyapunov value at the end of `horizon` when `candidate` is held constant
/// from the current sampled state.
using ProbeOracle = std::function<double(const ControlInput& candidate, double horizon)>;

struct ControllerOutput {
  ControlInput u;
  ControllerState state;
  /// Double-probe only: V+_k, V-_k interleaved by channel.
  std::vector<double> probe_values;
  /// Double-probe only: the pseudo-gradient was symmetric and the best probe
  /// branch was applied instead.
  bool argmin_fallback = false;
};

/// -1, 0 or +1.
double sign_of(double x) noexcept;

/// Sign law u_k = clamp(-kappa_k sign(dV), +-u_max) with a shared sign across
/// channels, followed by kappa_k += alpha_k |dV| when dV >= 0. The first call
/// (no previous sample) emits u = 0.
ControllerOutput sign_based_update(const ControllerState& state, double V_now);

/// Per-channel symmetric probes +-a give g_k = (V+_k - V-_k) / (2 a tau) and
/// u_k = clamp(-lambda kappa_k/kappa_k(t_0) g_k, +-u_max). When every probe pair
/// is symmetric but some probe improves on V_now, the best single probe is
/// applied (argmin over channels and signs). Gains follow the same
/// insufficient-decrease rule as the sign law.
ControllerOutput double_probe_update(const ControllerState& state, double V_now, const ProbeOracle& oracle,
                                     double tau);

/// Dispatches on state.mode.
ControllerOutput controller_update(const ControllerState& state, double V_now, const ProbeOracle& oracle, double tau);

/// Candidate with the smallest one-step-ahead V; ties go to the lowest index.
ControlInput select_argmin_candidate(const ProbeOracle& oracle, std::span<const ControlInput> candidates, double tau);

/// Index of the first minimum.
std::size_t argmin_first(std::span<const double> values);

}  // namespace fdlyap
