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


#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fdlyap/analysis.hpp"
#include "fdlyap/errors.hpp"
#include "test_support.hpp"

namespace fdlyap {
namespace {

// Synthetic log: V_exact = V_measured = v[n], constant gains unless given.
TrajectoryLog synthetic(const std::vector<double>& v, std::vector<double> gain_step = {0.0}) {
  TrajectoryLog log;
  log.tau = 0.5;
  log.channels = 1;
  double gain = 1.0;
  for (std::size_t n = 0; n < v.size(); ++n) {
    TrajectoryRow r;
    r.n = n;
    r.t = 0.5 * static_cast<double>(n);
    r.V_measured = v[n];
    r.V_exact = v[n];
    r.u = ControlInput::zeros(1);
    r.gains = {gain};
    gain += gain_step[n % gain_step.size()];
    r.bloch = BlochVector{0.0, 0.0, 1.0 - 2.0 * v[n]};
    log.rows.push_back(r);
  }
  return log;
}

GeneratorSpec drift_generator(double eps) {
  return GeneratorSpec(ops::pauli(eps, 0.0, 0.0), {}, {ops::sigma_x() * 0.5});
}

TEST(DescentTest, StrictlyDecreasing) {
  std::vector<double> v;
  for (int n = 0; n < 50; ++n) {
    v.push_back(1.0 / (1.0 + n));
  }
  const auto d = check_descent(v, 1e-12);
  ASSERT_TRUE(d.first_descent_index.has_value());
  EXPECT_EQ(*d.first_descent_index, 1u);
  EXPECT_TRUE(d.violations.empty());
  EXPECT_TRUE(d.eventually_descending);
}

TEST(DescentTest, ConstantIsLocallyConstant) {
  const std::vector<double> v(30, 0.4);
  const auto d = check_descent(v, 1e-12);
  EXPECT_TRUE(d.eventually_descending);
  EXPECT_TRUE(d.violations.empty());
}

TEST(DescentTest, LateAscentsAreViolations) {
  std::vector<double> v;
  for (int n = 0; n < 40; ++n) {
    v.push_back(n % 2 == 0 ? 0.5 : 0.6);
  }
  const auto d = check_descent(v, 1e-12);
  EXPECT_FALSE(d.eventually_descending);
  EXPECT_EQ(d.violations.size(), 10u);  // ascents at odd n in [20, 40)
  EXPECT_FALSE(d.first_descent_index.has_value());  // last difference ascends
  for (const auto& [n, dv] : d.violations) {
    EXPECT_GE(n, 20u);
    EXPECT_NEAR(dv, 0.1, 1e-15);
  }
}

TEST(DescentTest, EarlyAscentsAreForgiven) {
  std::vector<double> v{0.5, 0.6, 0.7, 0.65, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1};
  const auto d = check_descent(v, 1e-12);
  EXPECT_TRUE(d.eventually_descending);
  EXPECT_EQ(*d.first_descent_index, 3u);
}

TEST(DescentTest, ToleranceAbsorbsNoise) {
  const std::vector<double> v{0.5, 0.49, 0.495, 0.48, 0.485};
  EXPECT_FALSE(check_descent(v, 1e-12).eventually_descending);
  EXPECT_TRUE(check_descent(v, default_descent_tolerance(0.005)).eventually_descending);
  EXPECT_EQ(default_descent_tolerance(0.0), 1e-12);
}

TEST(DescentTest, IdempotentAndNeedsTwoSamples) {
  const auto log = synthetic({0.9, 0.7, 0.8, 0.6, 0.5, 0.55});
  const auto a = check_descent(log, 1e-12);
  const auto b = check_descent(log, 1e-12);
  EXPECT_EQ(a.first_descent_index, b.first_descent_index);
  EXPECT_EQ(a.violations, b.violations);
  EXPECT_THROW(check_descent(std::vector<double>{0.1}, 1e-12), Error);
}

TEST(PlateauTest, PinnedLogWithBoundedGainsIsCaught) {
  const auto log = synthetic(std::vector<double>(200, 0.4));
  EXPECT_FALSE(check_plateau_exclusion(log, 0.4, 50));
  EXPECT_TRUE(check_plateau_exclusion(log, 0.1, 50));
}

TEST(PlateauTest, GrowingGainsAreNotAPlateau) {
  const auto log = synthetic(std::vector<double>(200, 0.4), {0.01});
  EXPECT_TRUE(check_plateau_exclusion(log, 0.4, 50));
}

TEST(PlateauTest, ShortVisitsAreAllowed) {
  std::vector<double> v(200, 0.0);
  for (int n = 0; n < 40; ++n) {
    v[static_cast<std::size_t>(n)] = 0.3;
  }
  EXPECT_TRUE(check_plateau_exclusion(synthetic(v), 0.3, 50));
}

TEST(IssTest, ConvergedRunUnderTinyDrift) {
  std::vector<double> v;
  for (int n = 0; n < 300; ++n) {
    v.push_back(std::exp(-0.2 * n));
  }
  const auto r = iss_residual(synthetic(v), drift_generator(1e-3), 0.5, 100);
  EXPECT_LT(r.residual, 1e-6);
  EXPECT_LE(r.residual, r.limsup_estimate);
  EXPECT_NEAR(r.D, 2e-3, 1e-15);
  EXPECT_LT(r.C_empirical, 1e-3);
}

TEST(IssTest, DefinitionOfFields) {
  std::vector<double> v(10, 0.0);
  v[7] = 0.3;
  v[8] = 0.1;
  const auto r = iss_residual(synthetic(v), drift_generator(0.5), 0.5, 4);
  EXPECT_NEAR(r.residual, 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(r.limsup_estimate, 0.3);
  EXPECT_NEAR(r.C_empirical, 0.3 / (1.0 * 0.5), 1e-14);
}

TEST(IssTest, WindowMustFit) {
  const auto log = synthetic(std::vector<double>(10, 0.1));
  EXPECT_THROW(iss_residual(log, drift_generator(0.1), 0.5, 10), Error);
  EXPECT_THROW(iss_residual(log, drift_generator(0.1), 0.5, 0), Error);
}

TEST(SteadyStateTest, ConstantNorthPole) {
  const auto s = steady_state(synthetic(std::vector<double>(20, 0.0)), 10);
  EXPECT_EQ(s.mean.z, 1.0);
  EXPECT_EQ(s.mean.x, 0.0);
  EXPECT_EQ(s.stdev.x, 0.0);
  EXPECT_EQ(s.stdev.z, 0.0);
}

TEST(SteadyStateTest, PopulationStatistics) {
  // z alternates 1, 0 -> mean 0.5, population stdev 0.5.
  std::vector<double> v;
  for (int n = 0; n < 20; ++n) {
    v.push_back(n % 2 == 0 ? 0.0 : 0.5);
  }
  const auto s = steady_state(synthetic(v), 10);
  EXPECT_NEAR(s.mean.z, 0.5, 1e-15);
  EXPECT_NEAR(s.stdev.z, 0.5, 1e-15);
}

TEST(SteadyStateTest, MissingBlochAndOversizedWindow) {
  auto log = synthetic(std::vector<double>(20, 0.0));
  EXPECT_THROW(steady_state(log, 21), Error);
  log.rows.back().bloch.reset();
  EXPECT_THROW(steady_state(log, 5), Error);
}

TEST(MeanControlTest, AveragesTrailingWindow) {
  auto log = synthetic(std::vector<double>(6, 0.0));
  for (std::size_t n = 0; n < 6; ++n) {
    log.rows[n].u = ControlInput{{static_cast<double>(n)}};
  }
  EXPECT_DOUBLE_EQ(mean_control(log, 3)[0], 4.0);
}

TEST(NoiseRobustnessTest, MonotoneSweep) {
  std::vector<TrajectoryLog> logs;
  const std::vector<double> eta{0.0, 0.01, 0.05, 0.1};
  for (double e : eta) {
    logs.push_back(synthetic(std::vector<double>(50, 2.0 * e)));
  }
  const auto r = check_noise_robustness(logs, eta, 20);
  EXPECT_TRUE(r.slope_ok);
  EXPECT_NEAR(r.C_empirical, 2.0, 1e-12);
  ASSERT_EQ(r.residuals.size(), 4u);
}

TEST(NoiseRobustnessTest, DetectsNonMonotoneAndNonzeroBaseline) {
  const std::vector<double> eta{0.0, 0.1};
  std::vector<TrajectoryLog> logs{synthetic(std::vector<double>(50, 0.0)), synthetic(std::vector<double>(50, 0.0))};
  logs[0] = synthetic(std::vector<double>(50, 0.5));
  EXPECT_FALSE(check_noise_robustness(logs, eta, 20).slope_ok);
}

TEST(NoiseRobustnessTest, MalformedSweepsAreRejected) {
  std::vector<TrajectoryLog> logs{synthetic(std::vector<double>(50, 0.0)), synthetic(std::vector<double>(50, 0.0))};
  EXPECT_THROW(check_noise_robustness(logs, std::vector<double>{0.01, 0.1}, 20), Error);
  EXPECT_THROW(check_noise_robustness(logs, std::vector<double>{0.0, 0.0}, 20), Error);
  EXPECT_THROW(check_noise_robustness(logs, std::vector<double>{0.0}, 20), Error);
  logs[1] = synthetic(std::vector<double>(60, 0.0));
  EXPECT_THROW(check_noise_robustness(logs, std::vector<double>{0.0, 0.1}, 20), Error);
}

TEST(StationarityTest, CommutingStateIsStationary) {
  GeneratorSpec gen(ops::pauli(0.0, 0.0, 0.7), {}, {ops::sigma_x()});
  const DensityMatrix rho(ops::basis_projector(2, 0).matrix());
  EXPECT_LT(stationarity_defect(rho, gen, ControlInput::zeros(1)), 1e-10);
}

TEST(StationarityTest, TargetIsNotAnEquilibriumUnderDrift) {
  GeneratorSpec gen(ops::pauli(0.35, 0.20, 0.45), {}, {ops::sigma_x() * 0.5, ops::sigma_y() * 0.5});
  const DensityMatrix p0(ops::basis_projector(2, 0).matrix());
  const ComplexMatrix h = gen.drift().matrix();
  const ComplexMatrix c = testing::naive_product(h, p0.matrix()) - testing::naive_product(p0.matrix(), h);
  const double defect = stationarity_defect(p0, gen, ControlInput::zeros(2));
  EXPECT_GT(defect, 0.1);
  EXPECT_NEAR(defect, testing::frobenius(c), 1e-14);
}

TEST(OscillationEnvelopeTest, DecayingOscillation) {
  std::vector<double> v;
  for (int n = 0; n < 300; ++n) {
    v.push_back(0.2 + 0.1 * std::exp(-0.01 * n) * (n % 2 == 0 ? 1.0 : -1.0));
  }
  const auto env = oscillation_envelope(synthetic(v), 100, 3, 0.0);
  ASSERT_EQ(env.amplitudes.size(), 3u);
  EXPECT_TRUE(env.nonincreasing);
  EXPECT_GT(env.amplitudes[0], env.amplitudes[2]);
  EXPECT_THROW(oscillation_envelope(synthetic(v), 100, 4, 0.0), Error);
}

TEST(OscillationEnvelopeTest, GrowingOscillationIsFlagged) {
  std::vector<double> v;
  for (int n = 0; n < 300; ++n) {
    v.push_back(0.2 + 0.001 * n * (n % 2 == 0 ? 1.0 : -1.0) / 3.0);
  }
  EXPECT_FALSE(oscillation_envelope(synthetic(v), 100, 3, 0.02).nonincreasing);
}

}  // namespace
}  // namespace fdlyap
