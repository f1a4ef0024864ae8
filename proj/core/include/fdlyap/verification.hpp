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


// The acceptance suite: ten end-to-end checks run against the shipped
// presets, each reported as a single pass/fail line.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fdlyap {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  std::vector<std::pair<std::string, double>> metrics;
};

struct VerifyOptions {
  /// Forces every closed-loop run onto rk4 with this many substeps and uses
  /// it for the integrator cross-check.
  std::optional<int> substeps;
};

struct VerifyReport {
  std::vector<CriterionResult> criteria;

  bool passed() const;
};

/// `on_result` is called as soon as each criterion finishes.
VerifyReport run_verification(const VerifyOptions& options = {},
                              const std::function<void(const CriterionResult&)>& on_result = {});

/// "PASS [n] title: detail" or "FAIL [n] title: detail".
std::string format_result_line(const CriterionResult& result);

std::string verify_report_json(const VerifyReport& report, const VerifyOptions& options);

struct CrossValidation {
  double max_error = 0.0;  // Frobenius, over all sampled intervals
  std::size_t intervals = 0;
};

/// RK4(substeps) against the exact propagator over random unitary intervals
/// of length tau with drift of up to the qubit-drift magnitude and controls
/// uniform in [-u_max, u_max].
CrossValidation integrator_cross_validation(int substeps, std::size_t intervals, std::uint64_t seed);

/// err(substeps) / err(2 substeps) against the exact propagator on a fixed
/// driven qubit; close to 16 for a fourth-order method.
double rk4_order_ratio(int substeps);

}  // namespace fdlyap
