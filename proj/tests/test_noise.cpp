// Copyright 2026 The rwrl-suite Authors
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

#include "oracles.hpp"
#include "rwrl/constraints.hpp"
#include "rwrl/envs.hpp"
#include "rwrl/errors.hpp"
#include "rwrl/noise.hpp"

namespace rwrl {
namespace {

std::vector<double> observation_stream(Environment& env, int steps) {
  std::vector<double> out;
  TimeStep ts = env.reset(0);
  out.push_back(ts.observation[0]);
  for (int i = 0; i < steps && !ts.last(); ++i) {
    ts = env.step(0.0);
    out.push_back(ts.observation[0]);
  }
  return out;
}

TEST(GaussianNoise, ObservationNoiseHasConfiguredMoments) {
  auto env = wrap_gaussian(std::make_unique<DiagnosticEnv>(20000), {0.0, 0.5}, 1);
  TimeStep ts = env->reset(0);
  double sum = 0.0, sq = 0.0;
  int n = 0;
  while (!ts.last()) {
    ts = env->step(0.0);
    const double e = ts.observation[0] - (n + 1);
    sum += e;
    sq += e * e;
    ++n;
  }
  const double m = sum / n;
  const double var = sq / n - m * m;
  // 5 standard errors: sd/sqrt(n) for the mean, sd^2 sqrt(2/n) for the variance.
  EXPECT_NEAR(m, 0.0, 5 * 0.5 / std::sqrt(n));
  EXPECT_NEAR(var, 0.25, 5 * 0.25 * std::sqrt(2.0 / n));
}

TEST(GaussianNoise, ActionNoiseIsAddedBeforeClipping) {
  auto base = std::make_unique<DiagnosticEnv>(20000, 1.0);
  auto* raw = base.get();
  auto env = wrap_gaussian(std::move(base), {0.3, 0.0}, 2);
  env->reset(0);
  for (int i = 0; i < 20000; ++i) env->step(1.0);
  int inside = 0;
  for (double a : raw->executed()) {
    EXPECT_LE(a, 1.0);
    inside += a < 1.0 ? 1 : 0;
  }
  // Half of the noisy actions fall below the bound; the rest clip to it.
  EXPECT_NEAR(inside / 20000.0, 0.5, 0.02);
}

TEST(GaussianNoise, ReseedsEveryEpisode) {
  auto env = wrap_gaussian(std::make_unique<CartpoleEnv>(), {0.1, 0.1}, 9);
  const auto first = testing_oracles::trace(*env, 4, 4);
  testing_oracles::trace(*env, 5, 5);
  EXPECT_EQ(testing_oracles::trace(*env, 4, 4), first);
}

TEST(GaussianNoise, ConstraintComponentsAreNeverNoised) {
  SafetySpec safety;
  safety.enable = true;
  auto env = wrap_gaussian(wrap_constraints(std::make_unique<CartpoleEnv>(), safety), {0.0, 1.0}, 3);
  for (const auto& ts : testing_oracles::trace(*env, 1, 1)) {
    for (std::size_t i = 5; i < 8; ++i) {
      EXPECT_TRUE(ts.observation[i] == 0.0 || ts.observation[i] == 1.0);
    }
  }
}

TEST(StuckSensor, HoldsLiveValueAndRetriggersImmediately) {
  HoldNoiseSpec spec{NoiseTarget::kObservations, 1.0, 5};
  auto env = wrap_stuck(std::make_unique<DiagnosticEnv>(20), spec, 0);
  EXPECT_EQ(observation_stream(*env, 6), (std::vector<double>{0, 1, 1, 1, 1, 1, 6}));
}

TEST(DroppedSensor, ReadsZeroWhileDropped) {
  HoldNoiseSpec spec{NoiseTarget::kObservations, 1.0, 2};
  auto env = wrap_dropped(std::make_unique<DiagnosticEnv>(20), spec, 0);
  EXPECT_EQ(observation_stream(*env, 5), (std::vector<double>{0, 0, 0, 0, 0, 0}));
}

TEST(HoldNoise, ZeroStepsOrZeroProbabilityIsInert) {
  for (HoldNoiseSpec spec : {HoldNoiseSpec{NoiseTarget::kObservations, 1.0, 0},
                             HoldNoiseSpec{NoiseTarget::kObservations, 0.0, 5}}) {
    auto env = wrap_stuck(std::make_unique<DiagnosticEnv>(20), spec, 0);
    EXPECT_EQ(observation_stream(*env, 4), (std::vector<double>{0, 1, 2, 3, 4}));
  }
}

TEST(HoldNoise, TriggerRateMatchesProbability) {
  HoldNoiseSpec spec{NoiseTarget::kObservations, 0.1, 1};
  auto env = wrap_dropped(std::make_unique<DiagnosticEnv>(50000), spec, 4);
  const auto obs = observation_stream(*env, 50000);
  int dropped = 0;
  for (std::size_t t = 1; t < obs.size(); ++t) dropped += obs[t] == 0.0 ? 1 : 0;
  const double rate = dropped / 50000.0;
  EXPECT_NEAR(rate, 0.1, 5 * std::sqrt(0.1 * 0.9 / 50000));
}

TEST(HoldNoise, ActionTargetFreezesActuator) {
  HoldNoiseSpec spec{NoiseTarget::kActions, 1.0, 3};
  auto base = std::make_unique<DiagnosticEnv>(6);
  auto* raw = base.get();
  auto env = wrap_stuck(std::move(base), spec, 0);
  env->reset(0);
  for (double a = 1.0; a <= 6.0; a += 1.0) env->step(a);
  EXPECT_EQ(raw->executed(), (std::vector<double>{1, 1, 1, 4, 4, 4}));
}

TEST(HoldNoise, InvalidSpecsAreRejected) {
  EXPECT_THROW(wrap_stuck(std::make_unique<DiagnosticEnv>(), {NoiseTarget::kObservations, 1.5, 1}, 0), ConfigError);
  EXPECT_THROW(wrap_dropped(std::make_unique<DiagnosticEnv>(), {NoiseTarget::kObservations, 0.5, -1}, 0),
               ConfigError);
}

TEST(HoldNoise, SweepGridIsAccepted) {
  for (double p : {0.0, 0.01, 0.05, 0.1, 0.3, 0.5, 0.7}) {
    for (int s : {0, 1, 5, 10, 20, 50}) {
      EXPECT_NO_THROW(wrap_stuck(std::make_unique<DiagnosticEnv>(), {NoiseTarget::kObservations, p, s}, 0));
    }
  }
}

TEST(Dimensionality, AppendsStandardNormalComponents) {
  auto env = wrap_dimensionality(std::make_unique<CartpoleEnv>(), {20}, 6);
  const auto& spec = env->observation_spec();
  ASSERT_EQ(spec.shape(), 25u);
  EXPECT_EQ(spec.names[5], "dummy_0");
  EXPECT_EQ(spec.names[24], "dummy_19");
  double sum = 0.0, sq = 0.0;
  int n = 0;
  for (const auto& ts : testing_oracles::trace(*env, 0, 0)) {
    ASSERT_EQ(ts.observation.size(), 25u);
    for (std::size_t i = 5; i < 25; ++i) {
      sum += ts.observation[i];
      sq += ts.observation[i] * ts.observation[i];
      ++n;
    }
  }
  EXPECT_NEAR(sum / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(sq / n, 1.0, 5.0 * std::sqrt(2.0 / n));
}

TEST(Dimensionality, LeavesTaskComponentsUntouched) {
  CartpoleEnv plain;
  auto env = wrap_dimensionality(std::make_unique<CartpoleEnv>(), {10}, 1);
  const auto a = testing_oracles::trace(plain, 3, 3);
  const auto b = testing_oracles::trace(*env, 3, 3);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t t = 0; t < a.size(); ++t) {
    EXPECT_EQ(a[t].reward, b[t].reward);
    EXPECT_EQ(std::vector<double>(b[t].observation.begin(), b[t].observation.begin() + 5), a[t].observation);
  }
}

}  // namespace
}  // namespace rwrl
