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

#include <string>

#include "fdlyap/analysis.hpp"
#include "fdlyap/loop.hpp"
#include "json.hpp"

namespace fdlyap::detail {

using Json = nlohmann::ordered_json;

inline Json to_json(const BlochVector& b) { return Json::array({b.x, b.y, b.z}); }

inline Json to_json(const DescentReport& d, double tol, std::size_t max_violations = 50) {
  Json j;
  j["tolerance"] = tol;
  j["first_descent_index"] = d.first_descent_index ? Json(*d.first_descent_index) : Json(nullptr);
  j["eventually_descending"] = d.eventually_descending;
  j["violation_count"] = d.violations.size();
  Json v = Json::array();
  for (std::size_t i = 0; i < d.violations.size() && i < max_violations; ++i) {
    v.push_back(Json::array({d.violations[i].first, d.violations[i].second}));
  }
  j["violations"] = std::move(v);
  return j;
}

inline Json to_json(const IssReport& r) {
  return Json{{"residual", r.residual}, {"limsup_estimate", r.limsup_estimate}, {"D", r.D},
              {"tau", r.tau},           {"C_empirical", r.C_empirical},         {"window", r.window}};
}

inline Json to_json(const SteadyState& s) {
  return Json{{"window", s.window}, {"mean", to_json(s.mean)}, {"stdev", to_json(s.stdev)}, {"norm", s.mean.norm()}};
}

inline Json to_json(const NoiseRobustnessReport& r) {
  return Json{{"slope_ok", r.slope_ok},
              {"eta_max", r.eta_max},
              {"residuals", r.residuals},
              {"C_empirical", r.C_empirical}};
}

inline Json to_json(const OscillationEnvelope& e, std::size_t window_length) {
  return Json{{"window_length", window_length}, {"amplitudes", e.amplitudes}, {"nonincreasing", e.nonincreasing}};
}

inline Json to_json(const AccessAudit& a) {
  return Json{{"measurement_reads", a.measurement_reads},
              {"probe_reads", a.probe_reads},
              {"analysis_reads", a.analysis_reads},
              {"controller_direct_reads", a.controller_direct_reads}};
}

}  // namespace fdlyap::detail
