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

#include "fdlyap/controller.hpp"

#include <algorithm>
#include <cmath>

#include "fdlyap/errors.hpp"

namespace fdlyap {

namespace {

double saturate(double u, double u_max) { return std::clamp(u, -u_max, u_max); }

bool all_positive(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0 && std::isfinite(x); });
}

// kappa_k <- kappa_k + alpha_k |dV| when the last interval failed to decrease V.
// dV == 0 adds nothing, so exactly constant plateaus leave the gains alone.
void amplify_gains(ControllerState& s, double V_now) {
  if (!s.prev_V) {
    return;
  }
  const double dv = V_now - *s.prev_V;
  if (dv >= 0.0) {
    for (std::size_t k = 0; k < s.gains.size(); ++k) {
      s.gains[k] += s.alpha[k] * std::abs(dv);
    }
  }
}

}  // namespace

std::string to_string(ControllerMode mode) {
  return mode == ControllerMode::sign_based ? "sign_based" : "double_probe";
}

std::string to_string(ProbeSemantics semantics) {
  return semantics == ProbeSemantics::branch ? "branch" : "sequential";
}

ControllerState ControllerState::sign_based(std::vector<double> gains, std::vector<double> alpha, double u_max) {
  ControllerState s;
  s.mode = ControllerMode::sign_based;
  s.initial_gains = gains;
  s.gains = std::move(gains);
  s.alpha = std::move(alpha);
  s.u_max = u_max;
  s.validate();
  return s;
}

ControllerState ControllerState::double_probe(std::vector<double> gains, std::vector<double> alpha, double u_max,
                                              double lambda, double probe_amplitude) {
  ControllerState s;
  s.mode = ControllerMode::double_probe;
  s.initial_gains = gains;
  s.gains = std::move(gains);
  s.alpha = std::move(alpha);
  s.u_max = u_max;
  s.lambda = lambda;
  s.probe_amplitude = probe_amplitude;
  s.validate();
  return s;
}

void ControllerState::validate() const {
  if (gains.empty()) {
    throw InvariantError("controller needs at least one channel");
  }
  if (alpha.size() != gains.size() || initial_gains.size() != gains.size()) {
    throw InvariantError("gains, initial gains and alpha must have one entry per channel");
  }
  if (!all_positive(gains) || !all_positive(initial_gains)) {
    throw InvariantError("gains must be positive");
  }
  if (!all_positive(alpha)) {
    throw InvariantError("gain amplification rates alpha must be positive");
  }
  if (!(u_max > 0.0) || !std::isfinite(u_max)) {
    throw InvariantError("u_max must be positive");
  }
  if (mode == ControllerMode::double_probe) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw InvariantError("lambda must be positive");
    }
    if (!(probe_amplitude > 0.0) || probe_amplitude > u_max) {
      throw InvariantError("probe amplitude must lie in (0, u_max]");
    }
  }
}

double sign_of(double x) noexcept { return static_cast<double>((x > 0.0) - (x < 0.0)); }

ControllerOutput sign_based_update(const ControllerState& state, double V_now) {
  ControllerOutput out{ControlInput::zeros(state.channels()), state, {}, false};
  if (state.prev_V) {
    const double direction = -sign_of(V_now - *state.prev_V);
    for (std::size_t k = 0; k < state.channels(); ++k) {
      out.u.values[k] = saturate(state.gains[k] * direction, state.u_max);
    }
  }
  amplify_gains(out.state, V_now);
  out.state.prev_V = V_now;
  return out;
}

ControllerOutput double_probe_update(const ControllerState& state, double V_now, const ProbeOracle& oracle,
                                     double tau) {
  if (state.probe_amplitude > state.u_max) {
    throw InvariantError("probe amplitude exceeds u_max");
  }
  const std::size_t m = state.channels();
  const double a = state.probe_amplitude;

  ControllerOutput out{ControlInput::zeros(m), state, {}, false};
  out.probe_values.reserve(2 * m);
  std::vector<ControlInput> candidates;
  candidates.reserve(2 * m);

  bool symmetric = true;
  for (std::size_t k = 0; k < m; ++k) {
    ControlInput plus = ControlInput::zeros(m);
    plus.values[k] = a;
    ControlInput minus = ControlInput::zeros(m);
    minus.values[k] = -a;

    const double v_plus = oracle(plus, tau);
    const double v_minus = oracle(minus, tau);
    out.probe_values.push_back(v_plus);
    out.probe_values.push_back(v_minus);
    candidates.push_back(std::move(plus));
    candidates.push_back(std::move(minus));

    const double g = (v_plus - v_minus) / (2.0 * a * tau);
    const double lambda_eff = state.lambda * (state.gains[k] / state.initial_gains[k]);
    out.u.values[k] = saturate(-lambda_eff * g, state.u_max);
    symmetric = symmetric && std::abs(v_plus - v_minus) <= kSymmetryTolerance;
  }

  // A symmetric landscape gives g = 0 both at the target and at critical
  // points away from it (e.g. the antipode of the target on the Bloch sphere).
  // Only the latter has a probe branch that strictly improves V.
  if (symmetric) {
    const std::size_t best = argmin_first(out.probe_values);
    if (out.probe_values[best] < V_now - kSymmetryTolerance) {
      out.u = candidates[best];
      out.argmin_fallback = true;
    }
  }

  amplify_gains(out.state, V_now);
  out.state.prev_V = V_now;
  return out;
}

ControllerOutput controller_update(const ControllerState& state, double V_now, const ProbeOracle& oracle, double tau) {
  switch (state.mode) {
    case ControllerMode::sign_based:
      return sign_based_update(state, V_now);
    case ControllerMode::double_probe:
      return double_probe_update(state, V_now, oracle, tau);
  }
  throw Error("unknown controller mode");
}

std::size_t argmin_first(std::span<const double> values) {
  if (values.empty()) {
    throw Error("argmin of an empty list");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) {
      best = i;
    }
  }
  return best;
}

ControlInput select_argmin_candidate(const ProbeOracle& oracle, std::span<const ControlInput> candidates, double tau) {
  if (candidates.empty()) {
    throw Error("select_argmin_candidate needs at least one candidate");
  }
  std::vector<double> values;
  values.reserve(candidates.size());
  for (const auto& c : candidates) {
    values.push_back(oracle(c, tau));
  }
  return candidates[argmin_first(values)];
}

}  // namespace fdlyap
