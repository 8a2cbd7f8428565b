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

#pragma once

#include <deque>
#include <utility>

#include "rwrl/environment.hpp"
#include "rwrl/rng.hpp"

namespace rwrl {

/// Delays in environment steps; 0 disables the corresponding buffer.
struct DelaySpec {
  int actions = 0;
  int observations = 0;
  int rewards = 0;

  bool operator==(const DelaySpec&) const = default;
};

enum class RepetitionMode { kFixed, kProbabilistic };

struct RepetitionSpec {
  RepetitionMode mode = RepetitionMode::kFixed;
  int k = 1;                  // fixed mode: one agent decision per k steps
  double actions_prob = 0.0;  // probabilistic mode
  int actions_steps = 1;

  bool neutral() const {
    return mode == RepetitionMode::kFixed ? k == 1 : (actions_prob == 0.0 || actions_steps <= 1);
  }
  bool operator==(const RepetitionSpec&) const = default;
};

/// The inner environment executes the action the agent chose n steps ago.
/// The buffer starts with n zero actions.
class ActionDelayWrapper final : public Wrapper {
 public:
  ActionDelayWrapper(EnvPtr inner, int n);

  TimeStep reset(std::uint64_t seed) override;
  TimeStep step(std::span<const double> action) override;
  using Environment::step;

 private:
  int n_;
  std::deque<std::vector<double>> buffer_;
};

/// The agent sees the observation (and constraint vector) from n steps ago;
/// until n steps have elapsed it keeps seeing the reset observation.
class ObservationDelayWrapper final : public Wrapper {
 public:
  ObservationDelayWrapper(EnvPtr inner, int n);

  TimeStep reset(std::uint64_t seed) override;
  TimeStep step(std::span<const double> action) override;
  using Environment::step;

 private:
  int n_;
  std::deque<std::pair<std::vector<double>, std::vector<bool>>> history_;
};

/// The agent receives the reward from n steps ago (0 for the first n steps).
/// Rewards still in flight are added to the LAST step so the episodic return
/// is unchanged.
class RewardDelayWrapper final : public Wrapper {
 public:
  RewardDelayWrapper(EnvPtr inner, int n);

  TimeStep reset(std::uint64_t seed) override;
  TimeStep step(std::span<const double> action) override;
  using Environment::step;

 private:
  int n_;
  std::deque<std::pair<double, double>> pending_;  // (reward, base_reward)
};

/// Throughput bottleneck. Fixed mode: each agent action is executed for k
/// consecutive inner steps and the discount-weighted reward is delivered at
/// the next agent query. Probabilistic mode: every fresh action starts a
/// hold of `actions_steps` steps with probability `actions_prob`.
class ActionRepetitionWrapper final : public Wrapper {
 public:
  ActionRepetitionWrapper(EnvPtr inner, RepetitionSpec spec, std::uint64_t seed);

  TimeStep reset(std::uint64_t seed) override;
  TimeStep step(std::span<const double> action) override;
  using Environment::step;

 private:
  TimeStep step_fixed(std::span<const double> action);
  TimeStep step_probabilistic(std::span<const double> action);

  RepetitionSpec spec_;
  std::uint64_t seed_;
  Rng rng_;
  std::vector<double> held_;
  int remaining_ = 0;
};

EnvPtr wrap_action_delay(EnvPtr env, int n);
EnvPtr wrap_observation_delay(EnvPtr env, int n);
EnvPtr wrap_reward_delay(EnvPtr env, int n);
EnvPtr wrap_action_repetition(EnvPtr env, const RepetitionSpec& spec, std::uint64_t seed = 0);

}  // namespace rwrl
