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


#include <benchmark/benchmark.h>

#include <random>

#include "fdlyap/dynamics.hpp"
#include "fdlyap/experiment.hpp"
#include "fdlyap/loop.hpp"

namespace {

using namespace fdlyap;

GeneratorSpec drift_qubit() {
  return GeneratorSpec(ops::pauli(0.35, 0.20, 0.45), {}, {ops::sigma_x() * 0.5, ops::sigma_y() * 0.5});
}

void BM_StepExactUnitary(benchmark::State& state) {
  const auto gen = drift_qubit();
  std::mt19937_64 rng(1);
  DensityMatrix rho = random_pure_state(2, rng);
  const ControlInput u{{0.3, -0.2}};
  for (auto _ : state) {
    rho = step_exact_unitary(gen, u, rho, 0.5);
    benchmark::DoNotOptimize(rho);
  }
}
BENCHMARK(BM_StepExactUnitary);

void BM_StepRk4(benchmark::State& state) {
  const auto gen = drift_qubit();
  std::mt19937_64 rng(1);
  DensityMatrix rho = random_pure_state(2, rng);
  const ControlInput u{{0.3, -0.2}};
  const int substeps = static_cast<int>(state.range(0));
  for (auto _ : state) {
    rho = step_rk4(gen, u, rho, 0.5, substeps);
    benchmark::DoNotOptimize(rho);
  }
}
BENCHMARK(BM_StepRk4)->Arg(8)->Arg(64);

void BM_StepRk4Damped(benchmark::State& state) {
  const GeneratorSpec gen(ops::pauli(0.35, 0.20, 0.45), {0.3 * ops::sigma_minus()},
                          {ops::sigma_x() * 0.5, ops::sigma_y() * 0.5});
  DensityMatrix rho(ops::basis_projector(2, 1).matrix());
  const ControlInput u{{0.3, -0.2}};
  for (auto _ : state) {
    rho = step_rk4(gen, u, rho, 0.5, 64);
    benchmark::DoNotOptimize(rho);
  }
}
BENCHMARK(BM_StepRk4Damped);

void BM_LindbladRhs(benchmark::State& state) {
  const auto gen = drift_qubit();
  const DensityMatrix rho(ops::basis_projector(2, 1).matrix());
  const ControlInput u{{0.3, -0.2}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(lindblad_rhs(gen, u, rho));
  }
}
BENCHMARK(BM_LindbladRhs);

void BM_DriftPresetLoop(benchmark::State& state) {
  Overrides o;
  o.steps = static_cast<std::size_t>(state.range(0));
  const auto spec = preset_runs("qubit-drift", o).front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_closed_loop(spec.config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DriftPresetLoop)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
