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


// Experiment descriptions: strict JSON run configurations, the shipped
// presets, and the runner that writes trajectory.csv, report.json and
// run-metadata.json.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fdlyap/analysis.hpp"
#include "fdlyap/loop.hpp"

namespace fdlyap {

/// A fully resolved run. `resolved_json` is the canonical document with every
/// default filled in; parsing it again reproduces the run bit for bit.
struct RunSpec {
  std::string label;  // subdirectory name inside a sweep, empty otherwise
  LoopConfig config;
  std::size_t analysis_window;
  std::string resolved_json;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> steps;
  std::optional<int> shots;       // switches the readout to shots mode
  std::optional<double> eta_max;  // switches the readout to bounded noise
  std::optional<int> substeps;    // switches the integrator to rk4
};

/// Parses a run configuration. Throws ParseError on malformed JSON,
/// SchemaError on unknown keys, missing keys or out-of-range values, and
/// InvariantError / DimensionError when the physics does not hold together.
RunSpec parse_run_config(std::string_view text, const Overrides& overrides = {});
RunSpec load_run_config(const std::filesystem::path& path, const Overrides& overrides = {});

struct PresetInfo {
  std::string name;
  std::string summary;
};

const std::vector<PresetInfo>& presets();

/// Runs of the named preset with the overrides applied; sweeps return one
/// spec per grid point, each with a distinct label. Throws Error naming the
/// available presets when `name` is unknown.
std::vector<RunSpec> preset_runs(const std::string& name, const Overrides& overrides = {});

/// The qubit-driftfree preset started from an arbitrary initial state.
RunSpec driftfree_run(const DensityMatrix& initial, std::uint64_t seed, std::size_t steps = 400);

struct RunResult {
  RunSpec spec;
  TrajectoryLog log;
};

/// Runs the specs concurrently. The first failing run's error is rethrown
/// (as LoopError or Error) after all runs finish.
std::vector<RunResult> execute(const std::vector<RunSpec>& specs);

/// report.json for a single run.
std::string run_report_json(const RunResult& result);

/// Top-level report.json for a sweep preset.
std::string sweep_report_json(const std::string& preset, const std::vector<RunResult>& results);

/// Executes the specs and writes the output files into `out_dir` (created if
/// needed); sweeps get one subdirectory per grid point plus a summary
/// report.json. Returns the results for further inspection.
std::vector<RunResult> write_runs(const std::string& name, const std::vector<RunSpec>& specs,
                                  const std::filesystem::path& out_dir);

}  // namespace fdlyap
