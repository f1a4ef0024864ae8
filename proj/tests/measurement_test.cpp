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
#include <numeric>
#include <vector>

#include "fdlyap/errors.hpp"
#include "fdlyap/measurement.hpp"

namespace fdlyap {
namespace {

HermitianOperator target() { return ops::basis_projector(2, 0); }

DensityMatrix diagonal_state(double p0) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = p0;
  m(1, 1) = 1.0 - p0;
  return DensityMatrix(m);
}

TEST(PovmTest, BinaryEffectsSumToIdentity) {
  const auto povm = Povm::binary(target());
  ASSERT_EQ(povm.effects().size(), 2u);
  const ComplexMatrix sum = povm.effects()[0].matrix() + povm.effects()[1].matrix();
  EXPECT_LT(max_abs_difference(sum, ComplexMatrix::Identity(2, 2)), 1e-15);
}

TEST(PovmTest, IncompleteEffectsAreRejected) {
  EXPECT_THROW(Povm({target()}), InvariantError);
  EXPECT_THROW(Povm({}), InvariantError);
}

TEST(PovmTest, NegativeEffectIsRejected) {
  const auto neg = ops::sigma_z();
  const auto rest = ops::identity(2) + neg * -1.0;
  EXPECT_THROW(Povm({neg, rest}), InvariantError);
}

TEST(PovmTest, OutcomeProbabilitiesOfPlusState) {
  const auto plus = state_from_bloch({1.0, 0.0, 0.0});
  const auto p = outcome_probabilities(Povm::binary(target()), plus);
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_NEAR(p[1], 0.5, 1e-15);
}

TEST(ObservableTest, RejectsNonProjectorTargets) {
  EXPECT_THROW(LyapunovObservable(ops::identity(2) * 0.5, ExactReadout{}, 0), InvariantError);
  EXPECT_THROW(LyapunovObservable(ops::identity(2), ExactReadout{}, 0), InvariantError);
}

TEST(ObservableTest, ExactReadoutIsOneMinusOverlap) {
  LyapunovObservable obs(target(), ExactReadout{}, 1);
  EXPECT_DOUBLE_EQ(obs.evaluate(diagonal_state(0.3)), 0.7);
  EXPECT_DOUBLE_EQ(obs.exact(diagonal_state(0.3)), 0.7);
  EXPECT_DOUBLE_EQ(obs.evaluate(DensityMatrix(target().matrix())), 0.0);
  EXPECT_DOUBLE_EQ(obs.evaluate(DensityMatrix(ops::basis_projector(2, 1).matrix())), 1.0);
}

TEST(ObservableTest, ProperAtTargetOnly) {
  LyapunovObservable obs(target(), ExactReadout{}, 1);
  EXPECT_TRUE(obs.is_proper_at(DensityMatrix(target().matrix())));
  EXPECT_TRUE(obs.is_proper_at(diagonal_state(0.3)));
  EXPECT_TRUE(obs.is_proper_at(state_from_bloch({0.0, 0.0, 0.99})));
}

// V = 1 - k/M with k ~ Binomial(M, p): mean 1 - p, variance p(1 - p)/M.
TEST(ObservableTest, ShotReadoutFollowsBinomialStatistics) {
  const int shots = 1000;
  const double p = 0.3;
  LyapunovObservable obs(target(), ShotReadout{shots}, 77);
  const auto rho = diagonal_state(p);
  const int n = 4000;
  std::vector<double> v(n);
  for (auto& x : v) {
    x = obs.evaluate(rho);
    const double k = (1.0 - x) * shots;
    EXPECT_NEAR(k, std::round(k), 1e-9);
  }
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double var = 0.0;
  for (double x : v) {
    var += (x - mean) * (x - mean);
  }
  var /= n - 1;
  const double expected_var = p * (1.0 - p) / shots;
  EXPECT_NEAR(mean, 1.0 - p, 5.0 * std::sqrt(expected_var / n));
  EXPECT_NEAR(var, expected_var, 0.15 * expected_var);
}

TEST(ObservableTest, ShotReadoutIsExactOnEigenstates) {
  LyapunovObservable obs(target(), ShotReadout{50}, 3);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(obs.evaluate(DensityMatrix(target().matrix())), 0.0);
  }
}

TEST(ObservableTest, BoundedNoiseStaysInsideBound) {
  const double eta = 0.05;
  LyapunovObservable obs(target(), BoundedNoiseReadout{eta}, 9);
  const auto rho = diagonal_state(0.6);
  double lo = 1.0;
  double hi = -1.0;
  for (int i = 0; i < 5000; ++i) {
    const double err = obs.evaluate(rho) - 0.4;
    EXPECT_LE(std::abs(err), eta + 1e-15);
    lo = std::min(lo, err);
    hi = std::max(hi, err);
  }
  // The draws should cover most of [-eta, eta].
  EXPECT_LT(lo, -0.9 * eta);
  EXPECT_GT(hi, 0.9 * eta);
  EXPECT_DOUBLE_EQ(obs.noise_bound(), eta);
}

TEST(ObservableTest, ZeroNoiseMatchesExactReadout) {
  LyapunovObservable noisy(target(), BoundedNoiseReadout{0.0}, 9);
  const auto rho = diagonal_state(0.25);
  EXPECT_EQ(noisy.evaluate(rho), noisy.exact(rho));
}

TEST(ObservableTest, SeedDeterminesStream) {
  LyapunovObservable a(target(), ShotReadout{100}, 42);
  LyapunovObservable b(target(), ShotReadout{100}, 42);
  const auto rho = diagonal_state(0.5);
  std::vector<double> first;
  for (int i = 0; i < 50; ++i) {
    first.push_back(a.evaluate(rho));
    EXPECT_EQ(first.back(), b.evaluate(rho));
  }
  a.reseed(42);
  for (int i = 0; i < 50; ++i) {
    EXPECT_EQ(a.evaluate(rho), first[static_cast<std::size_t>(i)]);
  }
}

TEST(ObservableTest, InvalidModesAreRejected) {
  EXPECT_THROW(LyapunovObservable(target(), ShotReadout{0}, 1), InvariantError);
  EXPECT_THROW(LyapunovObservable(target(), BoundedNoiseReadout{-0.1}, 1), InvariantError);
}

TEST(ObservableTest, ReadoutNames) {
  EXPECT_EQ(readout_name(ExactReadout{}), "exact");
  EXPECT_EQ(readout_name(ShotReadout{}), "shots");
  EXPECT_EQ(readout_name(BoundedNoiseReadout{}), "bounded_noise");
}

}  // namespace
}  // namespace fdlyap
