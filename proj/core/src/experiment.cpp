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


#include "fdlyap/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "fdlyap/errors.hpp"
#include "fdlyap/trajectory_io.hpp"
#include "report_json.hpp"

namespace fdlyap {

namespace {

using detail::Json;

// Strict view of a JSON object: every key must be consumed exactly once by
// the parser, anything left over is an unknown key.
class Fields {
 public:
  Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw SchemaError(path_ + " must be an object");
    }
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const Json& required(const std::string& key) {
    if (!j_.contains(key)) {
      throw SchemaError("missing key " + at(key));
    }
    seen_.insert(key);
    return j_.at(key);
  }

  const Json* optional(const std::string& key) {
    if (!j_.contains(key)) {
      return nullptr;
    }
    seen_.insert(key);
    return &j_.at(key);
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) {
        throw SchemaError("unknown key " + at(item.key()));
      }
    }
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) {
    throw SchemaError(path + " must be a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw SchemaError(path + " must be finite");
  }
  return v;
}

double positive(const Json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) {
    throw SchemaError(path + " must be positive");
  }
  return v;
}

std::uint64_t unsigned_integer(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) {
    return j.get<std::uint64_t>();
  }
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  throw SchemaError(path + " must be a nonnegative integer");
}

std::uint64_t positive_integer(const Json& j, const std::string& path) {
  const auto v = unsigned_integer(j, path);
  if (v == 0) {
    throw SchemaError(path + " must be at least 1");
  }
  return v;
}

std::string string_value(const Json& j, const std::string& path) {
  if (!j.is_string()) {
    throw SchemaError(path + " must be a string");
  }
  return j.get<std::string>();
}

std::vector<double> number_list(const Json& j, const std::string& path) {
  if (!j.is_array()) {
    throw SchemaError(path + " must be an array of numbers");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::array<double, 3> triple(const Json& j, const std::string& path) {
  const auto v = number_list(j, path);
  if (v.size() != 3) {
    throw SchemaError(path + " must have exactly three entries");
  }
  return {v[0], v[1], v[2]};
}

// A complex number is either a plain number or a [re, im] pair.
Complex complex_value(const Json& j, const std::string& path) {
  if (j.is_number()) {
    return {number(j, path), 0.0};
  }
  if (j.is_array() && j.size() == 2) {
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
  }
  throw SchemaError(path + " must be a number or a [re, im] pair");
}

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

std::vector<Complex> complex_list(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    throw SchemaError(path + " must be a nonempty array");
  }
  std::vector<Complex> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(complex_value(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Json complex_list_json(const std::vector<Complex>& v) {
  Json out = Json::array();
  for (const auto& c : v) {
    out.push_back(complex_json(c));
  }
  return out;
}

ComplexMatrix complex_matrix(const Json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) {
    throw SchemaError(path + " must be a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  ComplexMatrix m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto row = complex_list(j[static_cast<std::size_t>(r)], path + "[" + std::to_string(r) + "]");
    if (r == 0) {
      m.resize(rows, static_cast<Eigen::Index>(row.size()));
    } else if (static_cast<Eigen::Index>(row.size()) != m.cols()) {
      throw SchemaError(path + " has rows of different lengths");
    }
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      m(r, c) = row[static_cast<std::size_t>(c)];
    }
  }
  if (m.rows() != m.cols()) {
    throw DimensionError(path + " is not square");
  }
  return m;
}

Json matrix_json(const ComplexMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(complex_json(m(r, c)));
    }
    out.push_back(std::move(row));
  }
  return out;
}

// {"pauli": [cx, cy, cz]} or {"matrix": [[...]]}; for collapse operators also
// {"lowering": gamma}, i.e. sqrt(gamma) |0><1|.
struct ParsedOperator {
  ComplexMatrix matrix;
  Json canonical;
};

ParsedOperator parse_operator(const Json& j, const std::string& path, bool allow_lowering) {
  Fields f(j, path);
  ParsedOperator out;
  int forms = 0;
  if (const Json* p = f.optional("pauli")) {
    const auto c = triple(*p, f.at("pauli"));
    out.matrix = ops::pauli(c[0], c[1], c[2]).matrix();
    out.canonical = Json{{"pauli", Json::array({c[0], c[1], c[2]})}};
    ++forms;
  }
  if (const Json* p = f.optional("matrix")) {
    out.matrix = complex_matrix(*p, f.at("matrix"));
    out.canonical = Json{{"matrix", matrix_json(out.matrix)}};
    ++forms;
  }
  if (allow_lowering) {
    if (const Json* p = f.optional("lowering")) {
      const double gamma = number(*p, f.at("lowering"));
      if (gamma < 0.0) {
        throw SchemaError(f.at("lowering") + " must be nonnegative");
      }
      out.matrix = std::sqrt(gamma) * ops::sigma_minus();
      out.canonical = Json{{"lowering", gamma}};
      ++forms;
    }
  }
  f.finish();
  if (forms != 1) {
    throw SchemaError(path + (allow_lowering ? " needs exactly one of pauli, matrix, lowering"
                                             : " needs exactly one of pauli, matrix"));
  }
  return out;
}

struct ParsedState {
  DensityMatrix rho;
  Json canonical;
};

ParsedState parse_state(const Json& j, const std::string& path) {
  Fields f(j, path);
  const Json* amps = f.optional("amplitudes");
  const Json* bloch = f.optional("bloch");
  f.finish();
  if ((amps == nullptr) == (bloch == nullptr)) {
    throw SchemaError(path + " needs exactly one of amplitudes, bloch");
  }
  if (amps) {
    const auto v = complex_list(*amps, f.at("amplitudes"));
    return {pure_state(v), Json{{"amplitudes", complex_list_json(v)}}};
  }
  const auto b = triple(*bloch, f.at("bloch"));
  return {state_from_bloch({b[0], b[1], b[2]}), Json{{"bloch", Json::array({b[0], b[1], b[2]})}}};
}

ReadoutMode parse_readout(Fields& f, Json& canonical) {
  std::string mode = "exact";
  if (const Json* p = f.optional("mode")) {
    mode = string_value(*p, f.at("mode"));
  }
  int shots = ShotReadout{}.shots;
  if (const Json* p = f.optional("shots")) {
    const auto s = positive_integer(*p, f.at("shots"));
    if (s > 1'000'000'000ULL) {
      throw SchemaError(f.at("shots") + " is too large");
    }
    shots = static_cast<int>(s);
  }
  double eta = 0.0;
  if (const Json* p = f.optional("eta_max")) {
    eta = number(*p, f.at("eta_max"));
    if (eta < 0.0) {
      throw SchemaError(f.at("eta_max") + " must be nonnegative");
    }
  }
  canonical["mode"] = mode;
  canonical["shots"] = shots;
  canonical["eta_max"] = eta;
  if (mode == "exact") {
    return ExactReadout{};
  }
  if (mode == "shots") {
    return ShotReadout{shots};
  }
  if (mode == "bounded_noise") {
    return BoundedNoiseReadout{eta};
  }
  throw SchemaError(f.at("mode") + " must be one of exact, shots, bounded_noise");
}

struct ParsedController {
  ControllerState state;
  Json canonical;
};

ParsedController parse_controller(const Json& j) {
  Fields f(j, "controller");
  const std::string mode = string_value(f.required("mode"), "controller.mode");
  auto gains = number_list(f.required("gains"), "controller.gains");
  auto alpha = number_list(f.required("alpha"), "controller.alpha");

  ControllerState defaults;
  const double u_max = f.has("u_max") ? positive(*f.optional("u_max"), "controller.u_max") : defaults.u_max;
  const double lambda = f.has("lambda") ? positive(*f.optional("lambda"), "controller.lambda") : defaults.lambda;
  const double a = f.has("probe_amplitude") ? positive(*f.optional("probe_amplitude"), "controller.probe_amplitude")
                                            : defaults.probe_amplitude;
  std::string semantics = "branch";
  if (const Json* p = f.optional("probe_semantics")) {
    semantics = string_value(*p, "controller.probe_semantics");
  }
  f.finish();

  ParsedController out;
  if (mode == "sign_based") {
    out.state = ControllerState::sign_based(gains, alpha, u_max);
  } else if (mode == "double_probe") {
    out.state = ControllerState::double_probe(gains, alpha, u_max, lambda, a);
  } else {
    throw SchemaError("controller.mode must be sign_based or double_probe");
  }
  if (semantics == "sequential") {
    out.state.probe_semantics = ProbeSemantics::sequential;
  } else if (semantics != "branch") {
    throw SchemaError("controller.probe_semantics must be branch or sequential");
  }
  out.canonical = Json{{"mode", mode},      {"gains", gains},           {"alpha", alpha},
                       {"u_max", u_max},    {"lambda", lambda},         {"probe_amplitude", a},
                       {"probe_semantics", semantics}};
  return out;
}

struct ParsedIntegrator {
  Integrator integrator;
  Json canonical;
};

ParsedIntegrator parse_integrator(const Json& j) {
  std::string type;
  int substeps = kDefaultSubsteps;
  if (j.is_string()) {
    type = j.get<std::string>();
  } else {
    Fields f(j, "integrator");
    type = string_value(f.required("type"), "integrator.type");
    if (const Json* p = f.optional("substeps")) {
      const auto s = positive_integer(*p, "integrator.substeps");
      if (s > 1'000'000ULL) {
        throw SchemaError("integrator.substeps is too large");
      }
      substeps = static_cast<int>(s);
    }
    f.finish();
  }
  ParsedIntegrator out;
  if (type == "exact_unitary") {
    out.integrator = Integrator::exact_unitary();
    out.integrator.substeps = substeps;
  } else if (type == "rk4") {
    out.integrator = Integrator::rk4(substeps);
  } else {
    throw SchemaError("integrator must be exact_unitary or rk4");
  }
  out.canonical = Json{{"type", type}, {"substeps", substeps}};
  return out;
}

RunSpec parse_document(const Json& doc, std::string label) {
  Fields f(doc, "");
  Json canonical;

  const double tau = positive(f.required("tau"), "tau");
  const auto n_steps = positive_integer(f.required("n_steps"), "n_steps");
  if (n_steps > 10'000'000ULL) {
    throw SchemaError("n_steps is too large");
  }
  canonical["tau"] = tau;
  canonical["n_steps"] = n_steps;

  auto initial = parse_state(f.required("initial_state"), "initial_state");
  canonical["initial_state"] = initial.canonical;

  auto drift = parse_operator(f.required("drift"), "drift", false);
  canonical["drift"] = drift.canonical;

  std::vector<ComplexMatrix> collapse;
  Json collapse_json = Json::array();
  if (const Json* p = f.optional("collapse_ops")) {
    if (!p->is_array()) {
      throw SchemaError("collapse_ops must be an array");
    }
    for (std::size_t i = 0; i < p->size(); ++i) {
      auto op = parse_operator((*p)[i], "collapse_ops[" + std::to_string(i) + "]", true);
      collapse.push_back(std::move(op.matrix));
      collapse_json.push_back(std::move(op.canonical));
    }
  }
  canonical["collapse_ops"] = std::move(collapse_json);

  const Json& hams_json = f.required("control_hams");
  if (!hams_json.is_array() || hams_json.empty()) {
    throw SchemaError("control_hams must be a nonempty array");
  }
  std::vector<HermitianOperator> hams;
  Json hams_canonical = Json::array();
  for (std::size_t i = 0; i < hams_json.size(); ++i) {
    auto op = parse_operator(hams_json[i], "control_hams[" + std::to_string(i) + "]", false);
    hams.emplace_back(op.matrix);
    hams_canonical.push_back(std::move(op.canonical));
  }
  canonical["control_hams"] = std::move(hams_canonical);

  auto controller = parse_controller(f.required("controller"));
  canonical["controller"] = controller.canonical;

  Json observable_canonical;
  ReadoutMode readout = ExactReadout{};
  std::optional<ParsedState> target;
  if (const Json* p = f.optional("observable")) {
    Fields of(*p, "observable");
    readout = parse_readout(of, observable_canonical);
    if (const Json* t = of.optional("target")) {
      target = parse_state(*t, "observable.target");
    }
    of.finish();
  } else {
    static const Json empty = Json::object();
    Fields of(empty, "observable");
    readout = parse_readout(of, observable_canonical);
  }

  auto integrator = parse_integrator(f.has("integrator") ? *f.optional("integrator") : Json("exact_unitary"));
  canonical["integrator"] = integrator.canonical;

  std::uint64_t seed = 0;
  if (const Json* p = f.optional("seed")) {
    seed = unsigned_integer(*p, "seed");
  }
  canonical["seed"] = seed;

  std::size_t window = std::min<std::size_t>(kDefaultTrailingWindow, n_steps);
  if (const Json* p = f.optional("analysis")) {
    Fields af(*p, "analysis");
    if (const Json* w = af.optional("window")) {
      window = positive_integer(*w, "analysis.window");
      if (window > n_steps) {
        throw SchemaError("analysis.window must not exceed n_steps");
      }
    }
    af.finish();
  }
  canonical["analysis"] = Json{{"window", window}};

  if (const Json* p = f.optional("metadata")) {
    if (!p->is_object()) {
      throw SchemaError("metadata must be an object");
    }
    canonical["metadata"] = *p;
  }
  f.finish();

  // Physics: dimensions and invariants are checked by the library types.
  HermitianOperator drift_op(drift.matrix);
  const Eigen::Index dim = drift_op.dim();
  GeneratorSpec gen(drift_op, std::move(collapse), std::move(hams));
  if (initial.rho.dim() != dim) {
    throw DimensionError("initial_state has dimension " + std::to_string(initial.rho.dim()) +
                         " but the drift has dimension " + std::to_string(dim));
  }
  HermitianOperator target_projector = ops::basis_projector(dim, 0);
  Json target_canonical;
  if (target) {
    target_projector = HermitianOperator(target->rho.matrix());
    target_canonical = target->canonical;
  } else {
    std::vector<Complex> ground(static_cast<std::size_t>(dim), Complex(0.0, 0.0));
    ground[0] = 1.0;
    target_canonical = Json{{"amplitudes", complex_list_json(ground)}};
  }
  if (target_projector.dim() != dim) {
    throw DimensionError("observable.target has the wrong dimension");
  }
  observable_canonical["target"] = target_canonical;
  // Keep the document layout stable: observable before integrator.
  Json ordered;
  for (const auto& [key, value] : canonical.items()) {
    if (key == "integrator") {
      ordered["observable"] = observable_canonical;
    }
    ordered[key] = value;
  }

  LoopConfig cfg{tau,
                 static_cast<std::size_t>(n_steps),
                 initial.rho,
                 std::move(gen),
                 LyapunovObservable(target_projector, readout, seed),
                 controller.state,
                 integrator.integrator,
                 seed};
  cfg.validate();
  return RunSpec{std::move(label), std::move(cfg), window, ordered.dump(2) + "\n"};
}

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Presets

constexpr double kInvSqrt2 = 0.70710678118654752440;

Json qubit_base(const std::string& name, std::size_t steps, std::size_t window) {
  return Json{
      {"tau", 0.5},
      {"n_steps", steps},
      {"initial_state", {{"amplitudes", Json::array({Json::array({0.0, 0.0}), Json::array({1.0, 0.0})})}}},
      {"drift", {{"pauli", Json::array({0.0, 0.0, 0.0})}}},
      {"collapse_ops", Json::array()},
      {"control_hams", Json::array({Json{{"pauli", Json::array({0.5, 0.0, 0.0})}},
                                    Json{{"pauli", Json::array({0.0, 0.5, 0.0})}}})},
      {"controller",
       {{"mode", "double_probe"},
        {"gains", Json::array({1.0, 1.0})},
        {"alpha", Json::array({0.5, 0.5})},
        {"u_max", 2.0},
        {"lambda", 0.2},
        {"probe_amplitude", 0.5},
        {"probe_semantics", "branch"}}},
      {"observable", {{"mode", "exact"}, {"shots", 1000}, {"eta_max", 0.0}}},
      {"integrator", {{"type", "exact_unitary"}, {"substeps", kDefaultSubsteps}}},
      {"seed", 20260101},
      {"analysis", {{"window", window}}},
      {"metadata", {{"preset", name}}},
  };
}

Json drift_pauli(double scale) { return Json{{"pauli", Json::array({0.35 * scale, 0.20 * scale, 0.45 * scale})}}; }

struct PresetDoc {
  std::string label;
  Json doc;
};

std::vector<PresetDoc> preset_documents(const std::string& name) {
  if (name == "qubit-driftfree") {
    return {{"", qubit_base(name, 400, 100)}};
  }
  if (name == "qubit-drift") {
    Json d = qubit_base(name, 2000, 500);
    d["drift"] = drift_pauli(1.0);
    return {{"", d}};
  }
  if (name == "qubit-signlaw") {
    Json d = qubit_base(name, 400, 100);
    d["initial_state"] = Json{{"amplitudes", Json::array({Json::array({kInvSqrt2, 0.0}), Json::array({0.5, -0.5})})}};
    d["controller"] = Json{{"mode", "sign_based"},
                           {"gains", Json::array({0.2, 0.2})},
                           {"alpha", Json::array({0.5, 0.5})},
                           {"u_max", 2.0}};
    d["observable"] = Json{{"mode", "shots"}, {"shots", 1000}, {"eta_max", 0.0}};
    return {{"", d}};
  }
  if (name == "noise-sweep") {
    std::vector<PresetDoc> out;
    for (double eta : {0.0, 0.01, 0.05, 0.1}) {
      Json d = qubit_base(name, 1000, 500);
      d["observable"] = Json{{"mode", "bounded_noise"}, {"shots", 1000}, {"eta_max", eta}};
      d["metadata"]["eta_max"] = eta;
      out.push_back({"eta_" + format_shortest(eta), d});
    }
    return out;
  }
  if (name == "drift-sweep") {
    std::vector<PresetDoc> out;
    for (double s : {0.25, 0.5, 1.0}) {
      Json d = qubit_base(name, 2000, 500);
      d["drift"] = drift_pauli(s);
      d["metadata"]["drift_scale"] = s;
      out.push_back({"s_" + format_shortest(s), d});
    }
    return out;
  }
  std::string names;
  for (const auto& p : presets()) {
    names += names.empty() ? p.name : ", " + p.name;
  }
  throw Error("unknown preset '" + name + "'; available presets: " + names);
}

void apply_overrides(Json& d, const Overrides& o, bool eta_is_swept) {
  if (o.seed) {
    d["seed"] = *o.seed;
  }
  if (o.steps) {
    if (*o.steps == 0) {
      throw SchemaError("--steps must be at least 1");
    }
    d["n_steps"] = *o.steps;
    if (d.contains("analysis") && d["analysis"].contains("window") && d["analysis"]["window"].is_number_integer()) {
      d["analysis"]["window"] = std::min(d["analysis"]["window"].get<std::size_t>(), *o.steps);
    }
  }
  if (o.shots && o.eta_max) {
    throw SchemaError("--shots and --eta-max select different readout modes; pass only one");
  }
  if (o.shots) {
    if (*o.shots < 1) {
      throw SchemaError("--shots must be at least 1");
    }
    if (eta_is_swept) {
      throw SchemaError("the noise sweep fixes its readout mode; --shots cannot override it");
    }
    d["observable"]["mode"] = "shots";
    d["observable"]["shots"] = *o.shots;
    d["observable"]["eta_max"] = 0.0;
  }
  if (o.eta_max) {
    if (eta_is_swept) {
      throw SchemaError("the noise sweep fixes its eta_max grid; --eta-max cannot override it");
    }
    d["observable"]["mode"] = "bounded_noise";
    d["observable"]["eta_max"] = *o.eta_max;
  }
  if (o.substeps) {
    d["integrator"] = Json{{"type", "rk4"}, {"substeps", *o.substeps}};
  }
}

bool is_drift_free(const GeneratorSpec& gen) {
  return gen.collapse_ops().empty() && gen.drift().matrix().cwiseAbs().maxCoeff() == 0.0;
}

Json run_report(const RunResult& r) {
  const auto& log = r.log;
  const auto& cfg = r.spec.config;
  const std::size_t window = r.spec.analysis_window;

  Json j;
  j["label"] = r.spec.label;
  j["steps"] = cfg.n_steps;
  j["readout"] = readout_name(cfg.observable.mode());
  j["integrator"] = cfg.integrator.name();
  j["final_V_exact"] = log.rows.back().V_exact;
  j["final_V_measured"] = log.rows.back().V_measured;

  const double tol = default_descent_tolerance(cfg.observable.noise_bound());
  j["descent_report"] = detail::to_json(check_descent(log, tol), tol);

  if (is_drift_free(cfg.generator)) {
    Json plateau{{"window", 50}, {"v_floor", Json::array()}, {"passed", Json::array()}};
    for (double v_floor : {0.1, 0.3, 0.5}) {
      plateau["v_floor"].push_back(v_floor);
      plateau["passed"].push_back(check_plateau_exclusion(log, v_floor, 50));
    }
    j["plateau_exclusion"] = plateau;
  }

  const IssReport iss = iss_residual(log, cfg.generator, cfg.tau, std::min(window, log.size() - 1));
  j["iss_report"] = detail::to_json(iss);

  const ControlInput u_mean = mean_control(log, window);
  j["mean_control"] = u_mean.values;
  if (cfg.generator.dim() == 2) {
    const SteadyState ss = steady_state(log, window);
    j["steady_state"] = detail::to_json(ss);
    const DensityMatrix at_target(cfg.observable.target_projector().matrix());
    j["stationarity_defect"] = {
        {"steady_state", stationarity_defect(state_from_bloch(ss.mean), cfg.generator, u_mean)},
        {"target_uncontrolled", stationarity_defect(at_target, cfg.generator, ControlInput::zeros(log.channels))}};
  }

  constexpr std::size_t kEnvelopeWindow = 100;
  constexpr std::size_t kEnvelopeCount = 3;
  if (log.size() >= kEnvelopeWindow * kEnvelopeCount) {
    const auto env = oscillation_envelope(log, kEnvelopeWindow, kEnvelopeCount, 0.02);
    j["oscillation"] = detail::to_json(env, kEnvelopeWindow);
    j["bounded_oscillation"] = env.nonincreasing && iss.limsup_estimate < 0.5;
  }

  double max_trace_error = 0.0;
  double min_eigenvalue = 1.0;
  std::size_t fallbacks = 0;
  for (const auto& row : log.rows) {
    max_trace_error = std::max(max_trace_error, row.trace_error);
    min_eigenvalue = std::min(min_eigenvalue, row.min_eigenvalue);
    fallbacks += row.argmin_fallback ? 1 : 0;
  }
  j["invariants"] = {{"max_trace_error", max_trace_error},
                     {"min_eigenvalue", min_eigenvalue},
                     {"audit", detail::to_json(log.audit)}};
  j["argmin_fallbacks"] = fallbacks;
  return j;
}

}  // namespace

RunSpec parse_run_config(std::string_view text, const Overrides& overrides) {
  Json doc = parse_json_text(text);
  if (!doc.is_object()) {
    throw SchemaError("a run configuration must be a JSON object");
  }
  apply_overrides(doc, overrides, false);
  return parse_document(doc, "");
}

RunSpec load_run_config(const std::filesystem::path& path, const Overrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot read config file " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), overrides);
}

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> list = {
      {"qubit-driftfree", "drift-free qubit, double-probe controller, start |1>, 400 steps"},
      {"qubit-drift", "qubit with unknown drift 0.35 sx + 0.20 sy + 0.45 sz, 2000 steps"},
      {"qubit-signlaw", "drift-free qubit, sign-based controller with shot-noise readout"},
      {"noise-sweep", "drift-free runs with bounded readout noise eta_max in {0, 0.01, 0.05, 0.1}"},
      {"drift-sweep", "drift scaled by s in {0.25, 0.5, 1.0}"},
  };
  return list;
}

std::vector<RunSpec> preset_runs(const std::string& name, const Overrides& overrides) {
  std::vector<RunSpec> out;
  for (auto& [label, doc] : preset_documents(name)) {
    apply_overrides(doc, overrides, name == "noise-sweep");
    out.push_back(parse_document(doc, label));
  }
  return out;
}

RunSpec driftfree_run(const DensityMatrix& initial, std::uint64_t seed, std::size_t steps) {
  Json d = qubit_base("qubit-driftfree", steps, std::min<std::size_t>(100, steps));
  d["seed"] = seed;
  d["initial_state"] = Json{{"bloch", detail::to_json(bloch_components(initial))}};
  return parse_document(d, "");
}

std::vector<RunResult> execute(const std::vector<RunSpec>& specs) {
  std::vector<LoopConfig> configs;
  configs.reserve(specs.size());
  for (const auto& s : specs) {
    configs.push_back(s.config);
  }
  auto batch = run_batch(configs);
  std::vector<RunResult> out;
  out.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (!batch[i].ok()) {
      const std::string where = specs[i].label.empty() ? std::string("run") : "run " + specs[i].label;
      throw Error(where + " failed at " + batch[i].error);
    }
    out.push_back({specs[i], std::move(*batch[i].log)});
  }
  return out;
}

std::string run_report_json(const RunResult& result) { return run_report(result).dump(2) + "\n"; }

std::string sweep_report_json(const std::string& preset, const std::vector<RunResult>& results) {
  Json j;
  j["preset"] = preset;
  Json runs = Json::array();
  for (const auto& r : results) {
    const std::size_t w = std::min(r.spec.analysis_window, r.log.size() - 1);
    const auto iss = iss_residual(r.log, r.spec.config.generator, r.spec.config.tau, w);
    runs.push_back({{"label", r.spec.label},
                    {"eta_max", r.spec.config.observable.noise_bound()},
                    {"D", iss.D},
                    {"iss_report", detail::to_json(iss)}});
  }
  j["runs"] = runs;

  if (preset == "noise-sweep") {
    std::vector<TrajectoryLog> logs;
    std::vector<double> eta;
    for (const auto& r : results) {
      logs.push_back(r.log);
      eta.push_back(r.spec.config.observable.noise_bound());
    }
    const auto report = check_noise_robustness(logs, eta, results.front().spec.analysis_window);
    j["noise_robustness"] = detail::to_json(report);
  } else if (preset == "drift-sweep") {
    bool monotone = true;
    std::vector<double> limsup;
    for (const auto& r : runs) {
      limsup.push_back(r["iss_report"]["limsup_estimate"].get<double>());
    }
    for (std::size_t i = 1; i < limsup.size(); ++i) {
      monotone = monotone && limsup[i] >= limsup[i - 1] - 0.02;
    }
    j["iss_monotone"] = monotone;
  }
  return j.dump(2) + "\n";
}

std::vector<RunResult> write_runs(const std::string& name, const std::vector<RunSpec>& specs,
                                  const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) {
    throw Error("cannot create output directory " + out_dir.string());
  }
  auto results = execute(specs);
  const bool sweep = results.size() > 1 || !results.front().spec.label.empty();
  for (const auto& r : results) {
    std::filesystem::path dir = out_dir;
    if (sweep) {
      dir /= r.spec.label;
      std::filesystem::create_directories(dir, ec);
      if (ec) {
        throw Error("cannot create output directory " + dir.string());
      }
    }
    write_text_file(dir / "trajectory.csv", trajectory_csv(r.log));
    Json report = run_report(r);
    report["name"] = name;
    write_text_file(dir / "report.json", report.dump(2) + "\n");
    write_text_file(dir / "run-metadata.json", r.spec.resolved_json);
  }
  if (sweep) {
    write_text_file(out_dir / "report.json", sweep_report_json(name, results));
  }
  return results;
}

}  // namespace fdlyap
