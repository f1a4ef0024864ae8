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

// Post-hoc checks on logged trajectories: finite-difference descent, plateau
// exclusion, disturbance-limited residuals and steady-state statistics. All
// functions are pure.

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fdlyap/dynamics.hpp"
#include "fdlyap/loop.hpp"
#include "fdlyap/quantum.hpp"

namespace fdlyap {

/// Default trailing window for limsup and steady-state estimates.
inline constexpr std::size_t kDefaultTrailingWindow = 500;

struct DescentReport {
  /// Smallest N with dV(t_n) <= tol for every n >= N; absent if the last
  /// difference is an ascent.
  std::optional<std::size_t> first_descent_index;
  /// Ascents (n, dV) with dV > tol in the second half of the log.
  std::vector<std::pair<std::size_t, double>> violations;
  bool eventually_descending = false;
};

/// Observable descent check on the sampled V the controller saw.
///
/// |dV| <= tol counts as locally constant. A finite log always admits the
/// vacuous N = length, so descent is only certified when the witness tail
/// covers at least the second half of the log, i.e. N <= length / 2; the
/// violations are exactly the ascents that prevent that.
DescentReport check_descent(std::span<const double> V, double tol);
DescentReport check_descent(const TrajectoryLog& log, double tol);

/// Tolerance used for descent checks: 1e-12 for exact readout, 2 eta_max for
/// bounded noise.
double default_descent_tolerance(double eta_max);

/// False iff V_exact stays inside [v_floor, v_floor + 1e-3] for `window`
/// consecutive samples while no gain grows, i.e. the loop is stuck on a
/// strictly positive plateau.
bool check_plateau_exclusion(const TrajectoryLog& log, double v_floor, std::size_t window);

struct IssReport {
  double residual = 0.0;         // mean V_exact over the trailing window
  double limsup_estimate = 0.0;  // max V_exact over the trailing window
  double D = 0.0;                // disturbance_bound(generator)
  double tau = 0.0;
  double C_empirical = 0.0;      // limsup / (D tau); 0 when D tau == 0
  std::size_t window = 0;
};

IssReport iss_residual(const TrajectoryLog& log, const GeneratorSpec& gen, double tau, std::size_t window);

struct SteadyState {
  BlochVector mean;
  BlochVector stdev;
  std::size_t window = 0;
};

/// Componentwise mean and population standard deviation of the Bloch vector
/// over the trailing window.
SteadyState steady_state(const TrajectoryLog& log, std::size_t window);

/// Mean control over the trailing window.
ControlInput mean_control(const TrajectoryLog& log, std::size_t window);

struct NoiseRobustnessReport {
  bool slope_ok = false;
  std::vector<double> eta_max;
  std::vector<double> residuals;  // trailing max of V_exact
  /// Least-squares slope of residual against eta_max through the origin,
  /// over the runs with eta_max > 0.
  double C_empirical = 0.0;
};

/// Logs must be ordered by strictly increasing eta_max starting at 0 and come
/// from otherwise identical configurations. slope_ok requires residuals to be
/// nondecreasing up to `slack` and residual(0) < 1e-3.
NoiseRobustnessReport check_noise_robustness(std::span<const TrajectoryLog> logs, std::span<const double> eta_max,
                                             std::size_t window, double slack = 0.02);

/// ||lindblad_rhs(gen, u, rho)||_F: how far rho is from being stationary
/// under the held control u.
double stationarity_defect(const DensityMatrix& rho, const GeneratorSpec& gen, const ControlInput& u);

struct OscillationEnvelope {
  std::vector<double> amplitudes;  // max - min of V_exact per window, oldest first
  bool nonincreasing = false;
};

/// Splits the final `count * window_length` samples into consecutive windows.
OscillationEnvelope oscillation_envelope(const TrajectoryLog& log, std::size_t window_length, std::size_t count,
                                         double slack);

}  // namespace fdlyap
