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

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rwrl/environment.hpp"
#include "rwrl/rng.hpp"

namespace rwrl {

class Policy {
 public:
  virtual ~Policy() = default;
  /// Called at the start of every episode with that episode's seed.
  virtual void begin_episode(std::uint64_t /*seed*/) {}
  virtual std::vector<double> act(std::span<const double> observation) = 0;
  virtual std::string id() const = 0;
};

/// a = tanh(W obs + b), W stored row-major (action_dim x obs_dim).
class LinearPolicy final : public Policy {
 public:
  LinearPolicy() = default;
  LinearPolicy(std::size_t obs_dim, std::size_t action_dim);
  /// Parameters laid out as [W row 0, b_0, W row 1, b_1, ...].
  LinearPolicy(std::size_t obs_dim, std::size_t action_dim, std::vector<double> params);

  std::vector<double> act(std::span<const double> observation) override;
  std::string id() const override;

  std::size_t obs_dim() const { return obs_dim_; }
  std::size_t action_dim() const { return action_dim_; }
  static std::size_t num_params(std::size_t obs_dim, std::size_t action_dim) { return (obs_dim + 1) * action_dim; }
  const std::vector<double>& params() const { return params_; }
  /// Pre-activation W obs + b.
  std::vector<double> logits(std::span<const double> observation) const;
  bool finite() const;

  nlohmann::json to_json() const;
  static LinearPolicy from_json(const nlohmann::json& j);

 private:
  std::size_t obs_dim_ = 0;
  std::size_t action_dim_ = 0;
  std::vector<double> params_;
};

/// Uniform actions inside the action bounds, reseeded per episode.
class RandomPolicy final : public Policy {
 public:
  RandomPolicy(BoundedSpec action_spec, std::uint64_t seed);

  void begin_episode(std::uint64_t seed) override;
  std::vector<double> act(std::span<const double> observation) override;
  std::string id() const override { return "random"; }

 private:
  BoundedSpec spec_;
  std::uint64_t seed_;
  Rng rng_;
};

/// One step of agent interaction as seen by the agent.
struct StepRecord {
  std::vector<double> observation;  // before acting
  std::vector<double> action;       // emitted by the policy
  std::vector<double> executed_action;
  double reward = 0.0;
  double base_reward = 0.0;
  double discount = 1.0;
  std::vector<bool> constraints;
};

struct EpisodeOutcome {
  double episode_return = 0.0;
  int steps = 0;
  std::vector<std::int64_t> violations;
};

using StepObserver = std::function<void(const StepRecord&)>;

/// Runs one episode from reset(seed) to the last step.
EpisodeOutcome run_episode(Environment& env, Policy& policy, std::uint64_t seed, const StepObserver& observer = {});

/// Returns of `n` episodes with seeds derive_seed(seed, {i}).
std::vector<double> evaluate(Policy& policy, Environment& env, int n, std::uint64_t seed);

double mean(std::span<const double> values);
/// Sample standard deviation (0 for fewer than two values).
double sample_sd(std::span<const double> values);

}  // namespace rwrl
