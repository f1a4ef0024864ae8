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

// Sampled-data closed loop: sample V(t_n), run the controller, hold its
// output over [t_n, t_{n+1}), propagate, log.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdlyap/controller.hpp"
#include "fdlyap/dynamics.hpp"
#include "fdlyap/measurement.hpp"
#include "fdlyap/quantum.hpp"

namespace fdlyap {

struct LoopConfig {
  double tau;
  std::size_t n_steps;
  DensityMatrix initial_state;
  GeneratorSpec generator;
  LyapunovObservable observable;
  ControllerState controller;
  Integrator integrator;
  std::uint64_t seed;

  /// Throws InvariantError / DimensionError on inconsistent settings.
  void validate() const;
};

/// Counts of plant-state reads by channel.
struct AccessAudit {
  std::size_t measurement_reads = 0;
  std::size_t probe_reads = 0;
  std::size_t analysis_reads = 0;
  /// Ground-truth reads made while the controller was running. Must be zero.
  std::size_t controller_direct_reads = 0;

  friend bool operator==(const AccessAudit&, const AccessAudit&) = default;
};

/// The plant owns the hidden state. All reads go through one of three
/// metered channels: measurement, probe, or the analysis-only ground truth.
class Plant {
 public:
  Plant(DensityMatrix initial, GeneratorSpec generator, Integrator integrator);

  /// Sampled measurement of V.
  double measure(LyapunovObservable& observable);

  /// One-step-ahead V under a constant candidate, simulated from a snapshot;
  /// the committed state is untouched.
  double probe(LyapunovObservable& observable, const ControlInput& candidate, double horizon);

  /// Commits one zero-order-hold interval.
  void advance(const ControlInput& u, double dt);

  /// Analysis-only access to the true state.
  const DensityMatrix& ground_truth();

  /// RAII marker for "the controller is executing". Ground-truth reads inside
  /// the scope are counted as controller direct reads.
  class ControllerScope {
   public:
    explicit ControllerScope(Plant& plant) : plant_(plant) { ++plant_.controller_depth_; }
    ~ControllerScope() { --plant_.controller_depth_; }
    ControllerScope(const ControllerScope&) = delete;
    ControllerScope& operator=(const ControllerScope&) = delete;

   private:
    Plant& plant_;
  };

  const AccessAudit& audit() const noexcept { return audit_; }
  const GeneratorSpec& generator() const noexcept { return generator_; }

 private:
  DensityMatrix state_;
  GeneratorSpec generator_;
  Integrator integrator_;
  AccessAudit audit_;
  int controller_depth_ = 0;
};

/// One row per sampling instant t_n. `u` and `gains` are the decision taken at
/// t_n and held on [t_n, t_{n+1}).
struct TrajectoryRow {
  std::size_t n = 0;
  double t = 0.0;
  double V_measured = 0.0;
  double V_exact = 0.0;  // ground truth, never shown to the controller
  double delta_V = 0.0;  // V_measured(t_n) - V_measured(t_{n-1}); zero at n = 0
  ControlInput u;
  std::vector<double> gains;
  std::optional<BlochVector> bloch;
  double trace_error = 0.0;
  double min_eigenvalue = 0.0;
  bool argmin_fallback = false;
};

struct TrajectoryLog {
  double tau = 0.0;
  std::size_t channels = 0;
  std::vector<TrajectoryRow> rows;
  AccessAudit audit;

  std::size_t size() const noexcept { return rows.size(); }
  std::vector<double> V_exact() const;
  std::vector<double> V_measured() const;
};

/// Runs cfg.n_steps intervals and returns n_steps + 1 rows. Deterministic in
/// cfg (including cfg.seed, which seeds the observable's stream). Throws
/// LoopError carrying the step index on any invariant violation.
TrajectoryLog run_closed_loop(const LoopConfig& cfg);

struct BatchResult {
  std::optional<TrajectoryLog> log;
  std::string error;

  bool ok() const noexcept { return log.has_value(); }
};

/// Independent runs executed concurrently; results keep the input order and
/// a failing run does not stop the others. `max_threads == 0` uses the
/// hardware concurrency.
std::vector<BatchResult> run_batch(std::span<const LoopConfig> configs, std::size_t max_threads = 0);

}  // namespace fdlyap
