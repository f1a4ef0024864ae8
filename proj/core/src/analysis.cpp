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

#include "fdlyap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fdlyap/errors.hpp"

namespace fdlyap {

namespace {

void require_window(std::size_t window, std::size_t length, const char* op) {
  if (window == 0 || window > length) {
    std::ostringstream os;
    os << op << ": window " << window << " does not fit a log of length " << length;
    throw Error(os.str());
  }
}

std::span<const TrajectoryRow> tail(const TrajectoryLog& log, std::size_t window) {
  return std::span<const TrajectoryRow>(log.rows).last(window);
}

double trailing_max(const TrajectoryLog& log, std::size_t window) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& r : tail(log, window)) {
    best = std::max(best, r.V_exact);
  }
  return best;
}

}  // namespace

DescentReport check_descent(std::span<const double> V, double tol) {
  if (V.size() < 2) {
    throw Error("check_descent needs at least two samples");
  }
  const std::size_t length = V.size();
  const std::size_t half = std::max<std::size_t>(1, length / 2);

  DescentReport report;
  std::size_t n_star = length;
  for (std::size_t n = length - 1; n >= 1; --n) {
    if (V[n] - V[n - 1] > tol) {
      break;
    }
    n_star = n;
  }
  if (n_star < length) {
    report.first_descent_index = n_star;
  }
  for (std::size_t n = half; n < length; ++n) {
    const double dv = V[n] - V[n - 1];
    if (dv > tol) {
      report.violations.emplace_back(n, dv);
    }
  }
  report.eventually_descending = report.violations.empty();
  return report;
}

DescentReport check_descent(const TrajectoryLog& log, double tol) {
  const auto v = log.V_measured();
  return check_descent(std::span<const double>(v), tol);
}

double default_descent_tolerance(double eta_max) { return eta_max > 0.0 ? 2.0 * eta_max : 1e-12; }

bool check_plateau_exclusion(const TrajectoryLog& log, double v_floor, std::size_t window) {
  if (window == 0 || window > log.size()) {
    return true;
  }
  const double ceiling = v_floor + 1e-3;
  std::size_t run_length = 0;
  for (std::size_t i = 0; i < log.size(); ++i) {
    const double v = log.rows[i].V_exact;
    if (v >= v_floor && v <= ceiling) {
      ++run_length;
    } else {
      run_length = 0;
    }
    if (run_length >= window) {
      // Window [i - window + 1, i] sits on the plateau; is the gain still
      // climbing anywhere inside it?
      const auto& first = log.rows[i + 1 - window].gains;
      const auto& last = log.rows[i].gains;
      bool gains_bounded = true;
      for (std::size_t k = 0; k < first.size(); ++k) {
        if (last[k] - first[k] > 1e-12) {
          gains_bounded = false;
        }
      }
      if (gains_bounded) {
        return false;
      }
    }
  }
  return true;
}

IssReport iss_residual(const TrajectoryLog& log, const GeneratorSpec& gen, double tau, std::size_t window) {
  if (window == 0 || window >= log.size()) {
    std::ostringstream os;
    os << "iss_residual: window " << window << " must be smaller than the log length " << log.size();
    throw Error(os.str());
  }
  IssReport r;
  r.window = window;
  r.tau = tau;
  r.D = disturbance_bound(gen);
  double sum = 0.0;
  for (const auto& row : tail(log, window)) {
    sum += row.V_exact;
  }
  r.residual = sum / static_cast<double>(window);
  r.limsup_estimate = trailing_max(log, window);
  const double scale = r.D * tau;
  r.C_empirical = scale > 0.0 ? r.limsup_estimate / scale : 0.0;
  return r;
}

SteadyState steady_state(const TrajectoryLog& log, std::size_t window) {
  require_window(window, log.size(), "steady_state");
  SteadyState s;
  s.window = window;
  const auto rows = tail(log, window);
  for (const auto& r : rows) {
    if (!r.bloch) {
      throw Error("steady_state: log has no Bloch data (qubit runs only)");
    }
    s.mean.x += r.bloch->x;
    s.mean.y += r.bloch->y;
    s.mean.z += r.bloch->z;
  }
  const double n = static_cast<double>(window);
  s.mean = {s.mean.x / n, s.mean.y / n, s.mean.z / n};
  BlochVector var;
  for (const auto& r : rows) {
    var.x += (r.bloch->x - s.mean.x) * (r.bloch->x - s.mean.x);
    var.y += (r.bloch->y - s.mean.y) * (r.bloch->y - s.mean.y);
    var.z += (r.bloch->z - s.mean.z) * (r.bloch->z - s.mean.z);
  }
  s.stdev = {std::sqrt(var.x / n), std::sqrt(var.y / n), std::sqrt(var.z / n)};
  return s;
}

ControlInput mean_control(const TrajectoryLog& log, std::size_t window) {
  require_window(window, log.size(), "mean_control");
  ControlInput mean = ControlInput::zeros(log.channels);
  for (const auto& r : tail(log, window)) {
    for (std::size_t k = 0; k < log.channels; ++k) {
      mean.values[k] += r.u[k];
    }
  }
  for (auto& v : mean.values) {
    v /= static_cast<double>(window);
  }
  return mean;
}

NoiseRobustnessReport check_noise_robustness(std::span<const TrajectoryLog> logs, std::span<const double> eta_max,
                                             std::size_t window, double slack) {
  if (logs.empty() || logs.size() != eta_max.size()) {
    throw Error("check_noise_robustness: need one log per eta_max value");
  }
  if (eta_max.front() != 0.0) {
    throw Error("check_noise_robustness: the sweep must start at eta_max = 0");
  }
  for (std::size_t i = 1; i < logs.size(); ++i) {
    if (!(eta_max[i] > eta_max[i - 1])) {
      throw Error("check_noise_robustness: eta_max must be strictly increasing");
    }
    if (logs[i].size() != logs[0].size() || logs[i].tau != logs[0].tau || logs[i].channels != logs[0].channels) {
      throw Error("check_noise_robustness: logs come from mismatched configurations");
    }
  }

  NoiseRobustnessReport report;
  report.eta_max.assign(eta_max.begin(), eta_max.end());
  for (const auto& log : logs) {
    require_window(window, log.size(), "check_noise_robustness");
    report.residuals.push_back(trailing_max(log, window));
  }

  bool ok = report.residuals.front() < 1e-3;
  for (std::size_t i = 1; i < report.residuals.size(); ++i) {
    ok = ok && report.residuals[i] >= report.residuals[i - 1] - slack;
  }
  report.slope_ok = ok;

  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < eta_max.size(); ++i) {
    if (eta_max[i] > 0.0) {
      num += eta_max[i] * report.residuals[i];
      den += eta_max[i] * eta_max[i];
    }
  }
  report.C_empirical = den > 0.0 ? num / den : 0.0;
  return report;
}

double stationarity_defect(const DensityMatrix& rho, const GeneratorSpec& gen, const ControlInput& u) {
  return lindblad_rhs(gen, u, rho).norm();
}

OscillationEnvelope oscillation_envelope(const TrajectoryLog& log, std::size_t window_length, std::size_t count,
                                         double slack) {
  if (window_length == 0 || count == 0 || window_length * count > log.size()) {
    throw Error("oscillation_envelope: windows do not fit the log");
  }
  OscillationEnvelope env;
  const std::size_t start = log.size() - window_length * count;
  for (std::size_t w = 0; w < count; ++w) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = start + w * window_length; i < start + (w + 1) * window_length; ++i) {
      lo = std::min(lo, log.rows[i].V_exact);
      hi = std::max(hi, log.rows[i].V_exact);
    }
    env.amplitudes.push_back(hi - lo);
  }
  env.nonincreasing = true;
  for (std::size_t i = 1; i < env.amplitudes.size(); ++i) {
    env.nonincreasing = env.nonincreasing && env.amplitudes[i] <= env.amplitudes[i - 1] + slack;
  }
  return env;
}

}  // namespace fdlyap
