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

#include "fdlyap/loop.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "fdlyap/errors.hpp"

namespace fdlyap {

void LoopConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw InvariantError("sampling period tau must be positive");
  }
  if (n_steps < 1) {
    throw InvariantError("n_steps must be at least 1");
  }
  if (initial_state.dim() != generator.dim()) {
    throw DimensionError("initial state and generator dimensions differ");
  }
  if (observable.target_projector().dim() != generator.dim()) {
    throw DimensionError("target projector and generator dimensions differ");
  }
  if (controller.channels() != generator.num_controls()) {
    std::ostringstream os;
    os << "controller has " << controller.channels() << " channels but the generator has "
       << generator.num_controls() << " control Hamiltonians";
    throw DimensionError(os.str());
  }
  controller.validate();
  if (integrator.kind == Integrator::Kind::exact_unitary && !generator.is_unitary()) {
    throw InvariantError("exact_unitary integrator requires an empty collapse-operator list");
  }
  if (integrator.kind == Integrator::Kind::rk4 && integrator.substeps < 1) {
    throw InvariantError("rk4 substeps must be at least 1");
  }
}

Plant::Plant(DensityMatrix initial, GeneratorSpec generator, Integrator integrator)
    : state_(std::move(initial)), generator_(std::move(generator)), integrator_(integrator) {}

double Plant::measure(LyapunovObservable& observable) {
  ++audit_.measurement_reads;
  return observable.evaluate(state_);
}

double Plant::probe(LyapunovObservable& observable, const ControlInput& candidate, double horizon) {
  ++audit_.probe_reads;
  const DensityMatrix branch = propagate(integrator_, generator_, candidate, state_, horizon);
  return observable.evaluate(branch);
}

void Plant::advance(const ControlInput& u, double dt) { state_ = propagate(integrator_, generator_, u, state_, dt); }

const DensityMatrix& Plant::ground_truth() {
  if (controller_depth_ > 0) {
    ++audit_.controller_direct_reads;
  } else {
    ++audit_.analysis_reads;
  }
  return state_;
}

std::vector<double> TrajectoryLog::V_exact() const {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) {
    v.push_back(r.V_exact);
  }
  return v;
}

std::vector<double> TrajectoryLog::V_measured() const {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) {
    v.push_back(r.V_measured);
  }
  return v;
}

TrajectoryLog run_closed_loop(const LoopConfig& cfg) {
  cfg.validate();

  Plant plant(cfg.initial_state, cfg.generator, cfg.integrator);
  LyapunovObservable observable = cfg.observable;
  observable.reseed(cfg.seed);
  ControllerState controller = cfg.controller;

  const std::size_t m = controller.channels();
  const bool qubit = cfg.generator.dim() == 2;
  const bool sequential =
      controller.mode == ControllerMode::double_probe && controller.probe_semantics == ProbeSemantics::sequential;
  // Sequential probing spends 2m sub-intervals on probes and one on actuation.
  const double slot = sequential ? cfg.tau / static_cast<double>(2 * m + 1) : cfg.tau;

  ProbeOracle oracle;
  if (sequential) {
    oracle = [&](const ControlInput& candidate, double horizon) {
      plant.advance(candidate, horizon);
      return plant.measure(observable);
    };
  } else {
    oracle = [&](const ControlInput& candidate, double horizon) {
      return plant.probe(observable, candidate, horizon);
    };
  }

  TrajectoryLog log;
  log.tau = cfg.tau;
  log.channels = m;
  log.rows.reserve(cfg.n_steps + 1);

  std::optional<double> previous;
  for (std::size_t n = 0; n <= cfg.n_steps; ++n) {
    try {
      TrajectoryRow row;
      row.n = n;
      row.t = static_cast<double>(n) * cfg.tau;
      row.V_measured = plant.measure(observable);
      row.delta_V = previous ? row.V_measured - *previous : 0.0;
      previous = row.V_measured;

      {
        const DensityMatrix& truth = plant.ground_truth();
        row.V_exact = observable.exact(truth);
        row.trace_error = std::abs(truth.trace() - Complex(1.0, 0.0));
        row.min_eigenvalue = truth.min_eigenvalue();
        if (qubit) {
          row.bloch = bloch_components(truth);
        }
      }

      row.gains = controller.gains;
      ControllerOutput out;
      {
        Plant::ControllerScope scope(plant);
        out = controller_update(controller, row.V_measured, oracle, slot);
      }
      for (std::size_t k = 0; k < m; ++k) {
        if (std::abs(out.u[k]) > controller.u_max) {
          throw InvariantError("controller output exceeds u_max");
        }
        if (out.state.gains[k] < controller.gains[k]) {
          throw InvariantError("controller gains decreased");
        }
      }
      row.u = out.u;
      row.argmin_fallback = out.argmin_fallback;
      controller = std::move(out.state);

      if (n < cfg.n_steps) {
        plant.advance(row.u, sequential ? slot : cfg.tau);
      }
      log.rows.push_back(std::move(row));
    } catch (const LoopError&) {
      throw;
    } catch (const std::exception& e) {
      throw LoopError(n, e.what());
    }
  }
  log.audit = plant.audit();
  return log;
}

std::vector<BatchResult> run_batch(std::span<const LoopConfig> configs, std::size_t max_threads) {
  if (configs.empty()) {
    throw Error("run_batch needs at least one configuration");
  }
  std::vector<BatchResult> results(configs.size());
  std::size_t workers = max_threads == 0 ? std::max<std::size_t>(1, std::thread::hardware_concurrency()) : max_threads;
  workers = std::min(workers, configs.size());

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        results[i].log = run_closed_loop(configs[i]);
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
    }
  };

  if (workers == 1) {
    work();
    return results;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back(work);
  }
  pool.clear();
  return results;
}

}  // namespace fdlyap
