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

#include "fdlyap/controller.hpp"
#include "fdlyap/errors.hpp"

namespace fdlyap {
namespace {

constexpr double kTau = 0.5;

ControllerState probe_state(double lambda = 0.2) {
  return ControllerState::double_probe({1.0, 1.0}, {0.5, 0.5}, 2.0, lambda, 0.5);
}

TEST(SignOfTest, ZeroIsZero) {
  EXPECT_EQ(sign_of(0.0), 0.0);
  EXPECT_EQ(sign_of(-0.0), 0.0);
  EXPECT_EQ(sign_of(3.0), 1.0);
  EXPECT_EQ(sign_of(-1e-300), -1.0);
}

TEST(ValidateTest, RejectsInconsistentParameters) {
  EXPECT_THROW(ControllerState::sign_based({}, {}, 2.0), InvariantError);
  EXPECT_THROW(ControllerState::sign_based({1.0}, {0.5, 0.5}, 2.0), InvariantError);
  EXPECT_THROW(ControllerState::sign_based({-1.0}, {0.5}, 2.0), InvariantError);
  EXPECT_THROW(ControllerState::sign_based({1.0}, {0.0}, 2.0), InvariantError);
  EXPECT_THROW(ControllerState::sign_based({1.0}, {0.5}, 0.0), InvariantError);
  EXPECT_THROW(ControllerState::double_probe({1.0}, {0.5}, 2.0, 0.0, 0.5), InvariantError);
  EXPECT_THROW(ControllerState::double_probe({1.0}, {0.5}, 2.0, 1.0, 3.0), InvariantError);
}

TEST(SignLawTest, BootstrapAppliesZero) {
  const auto s = ControllerState::sign_based({0.3, 0.3}, {0.5, 0.5}, 2.0);
  const auto out = sign_based_update(s, 0.8);
  EXPECT_EQ(out.u, ControlInput::zeros(2));
  EXPECT_EQ(out.state.gains, s.gains);
  ASSERT_TRUE(out.state.prev_V.has_value());
  EXPECT_EQ(*out.state.prev_V, 0.8);
}

TEST(SignLawTest, OpposesTheLastDifference) {
  auto s = ControllerState::sign_based({0.3, 0.7}, {0.5, 0.5}, 2.0);
  s = sign_based_update(s, 0.8).state;
  const auto down = sign_based_update(s, 0.6);  // dV < 0: gains fixed, u = +kappa
  EXPECT_DOUBLE_EQ(down.u[0], 0.3);
  EXPECT_DOUBLE_EQ(down.u[1], 0.7);
  EXPECT_EQ(down.state.gains, s.gains);

  const auto up = sign_based_update(down.state, 0.9);  // dV = +0.3: u uses pre-update gains
  EXPECT_DOUBLE_EQ(up.u[0], -0.3);
  EXPECT_DOUBLE_EQ(up.u[1], -0.7);
  EXPECT_NEAR(up.state.gains[0], 0.3 + 0.5 * 0.3, 1e-15);
  EXPECT_NEAR(up.state.gains[1], 0.7 + 0.5 * 0.3, 1e-15);
}

TEST(SignLawTest, ConstantPlateauLeavesGainsAlone) {
  auto s = ControllerState::sign_based({0.3}, {0.5}, 2.0);
  for (int i = 0; i < 10; ++i) {
    const auto out = sign_based_update(s, 0.4);
    EXPECT_EQ(out.u[0], 0.0);
    s = out.state;
  }
  EXPECT_EQ(s.gains[0], 0.3);
}

TEST(SignLawTest, SaturatesAtUmax) {
  auto s = ControllerState::sign_based({5.0}, {0.5}, 2.0);
  s = sign_based_update(s, 0.5).state;
  EXPECT_EQ(sign_based_update(s, 0.7).u[0], -2.0);
  EXPECT_EQ(sign_based_update(s, 0.3).u[0], 2.0);
}

// Alternating dV = +-0.2 for 100 differences: 50 ascents, each adding alpha * 0.2.
TEST(GainGrowthTest, SyntheticPlateauFeed) {
  const double alpha = 0.37;
  auto s = ControllerState::sign_based({1.0}, {alpha}, 2.0);
  for (int n = 0; n <= 100; ++n) {
    s = sign_based_update(s, n % 2 == 0 ? 0.6 : 0.4).state;
  }
  EXPECT_NEAR(s.gains[0] - 1.0, alpha * 0.2 * 50, 1e-12);
}

// For V(candidate) = c0 + sum_k c_k candidate_k the central difference is
// exact: g_k = c_k / tau.
TEST(DoubleProbeTest, LinearLandscapeGivesExactPseudoGradient) {
  const std::vector<double> c{0.1, -0.3};
  const ProbeOracle oracle = [&](const ControlInput& cand, double horizon) {
    EXPECT_EQ(horizon, kTau);
    return 0.5 + c[0] * cand[0] + c[1] * cand[1];
  };
  const auto out = double_probe_update(probe_state(), 0.5, oracle, kTau);
  EXPECT_NEAR(out.u[0], -0.2 * c[0] / kTau, 1e-15);
  EXPECT_NEAR(out.u[1], -0.2 * c[1] / kTau, 1e-15);
  ASSERT_EQ(out.probe_values.size(), 4u);
  EXPECT_NEAR(out.probe_values[0], 0.5 + 0.5 * c[0], 1e-15);
  EXPECT_NEAR(out.probe_values[1], 0.5 - 0.5 * c[0], 1e-15);
  EXPECT_FALSE(out.argmin_fallback);
}

TEST(DoubleProbeTest, StepScalesWithGainRatio) {
  const ProbeOracle oracle = [](const ControlInput& cand, double) { return 0.5 + 0.01 * cand[0]; };
  auto s = probe_state();
  s.gains = {3.0, 1.0};
  const auto out = double_probe_update(s, 0.5, oracle, kTau);
  EXPECT_NEAR(out.u[0], -0.2 * 3.0 * 0.01 / kTau, 1e-15);
  EXPECT_EQ(out.u[1], 0.0);
}

TEST(DoubleProbeTest, Saturates) {
  const ProbeOracle oracle = [](const ControlInput& cand, double) { return 0.5 - 10.0 * cand[1]; };
  const auto out = double_probe_update(probe_state(1.0), 0.5, oracle, kTau);
  EXPECT_EQ(out.u[1], 2.0);
}

TEST(DoubleProbeTest, SymmetricProbesWithBetterBranchFallBackToArgmin) {
  // Even landscape: every pair is symmetric, channel 2 is the better one.
  const ProbeOracle oracle = [](const ControlInput& cand, double) {
    return 1.0 - 0.1 * cand[0] * cand[0] - 0.3 * cand[1] * cand[1];
  };
  const auto out = double_probe_update(probe_state(), 1.0, oracle, kTau);
  EXPECT_TRUE(out.argmin_fallback);
  EXPECT_EQ(out.u, (ControlInput{{0.0, 0.5}}));
}

TEST(DoubleProbeTest, SymmetricProbesWithoutImprovementHold) {
  const ProbeOracle oracle = [](const ControlInput&, double) { return 0.0; };
  const auto out = double_probe_update(probe_state(), 0.0, oracle, kTau);
  EXPECT_FALSE(out.argmin_fallback);
  EXPECT_EQ(out.u, ControlInput::zeros(2));
}

TEST(DoubleProbeTest, GainsAmplifyOnAscentOnly) {
  const ProbeOracle flat = [](const ControlInput&, double) { return 0.5; };
  auto s = double_probe_update(probe_state(), 0.5, flat, kTau).state;
  s = double_probe_update(s, 0.4, flat, kTau).state;
  EXPECT_EQ(s.gains, (std::vector<double>{1.0, 1.0}));
  s = double_probe_update(s, 0.45, flat, kTau).state;
  EXPECT_NEAR(s.gains[0], 1.0 + 0.5 * 0.05, 1e-15);
}

TEST(DispatchTest, RoutesByMode) {
  int calls = 0;
  const ProbeOracle oracle = [&](const ControlInput&, double) {
    ++calls;
    return 0.5;
  };
  controller_update(ControllerState::sign_based({1.0}, {0.5}, 2.0), 0.5, oracle, kTau);
  EXPECT_EQ(calls, 0);
  controller_update(probe_state(), 0.5, oracle, kTau);
  EXPECT_EQ(calls, 4);
}

TEST(ArgminTest, FirstMinimumWinsTies) {
  const std::vector<double> v{0.3, 0.1, 0.2, 0.1};
  EXPECT_EQ(argmin_first(v), 1u);
  EXPECT_THROW(argmin_first(std::vector<double>{}), Error);
}

TEST(ArgminTest, SelectsCandidateWithLowestOracleValue) {
  const std::vector<ControlInput> cands{{{1.0}}, {{-1.0}}, {{0.5}}};
  const ProbeOracle oracle = [](const ControlInput& c, double) { return (c[0] - 0.4) * (c[0] - 0.4); };
  EXPECT_EQ(select_argmin_candidate(oracle, cands, kTau), (ControlInput{{0.5}}));
  EXPECT_THROW(select_argmin_candidate(oracle, std::vector<ControlInput>{}, kTau), Error);
}

TEST(ToStringTest, Names) {
  EXPECT_EQ(to_string(ControllerMode::sign_based), "sign_based");
  EXPECT_EQ(to_string(ControllerMode::double_probe), "double_probe");
  EXPECT_EQ(to_string(ProbeSemantics::sequential), "sequential");
}

}  // namespace
}  // namespace fdlyap
