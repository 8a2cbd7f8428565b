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

#include "rwrl/delay.hpp"

#include "rwrl/errors.hpp"

namespace rwrl {

namespace {

void require_non_negative(int n, const char* what) {
  if (n < 0) throw ConfigError(std::string(what) + " delay must be >= 0, got " + std::to_string(n));
}

}  // namespace

ActionDelayWrapper::ActionDelayWrapper(EnvPtr inner, int n) : Wrapper(std::move(inner)), n_(n) {
  require_non_negative(n, "action");
}

TimeStep ActionDelayWrapper::reset(std::uint64_t seed) {
  buffer_.assign(static_cast<std::size_t>(n_), std::vector<double>(action_spec().shape(), 0.0));
  return Wrapper::reset(seed);
}

TimeStep ActionDelayWrapper::step(std::span<const double> action) {
  if (n_ == 0) return Wrapper::step(action);
  buffer_.emplace_back(action.begin(), action.end());
  std::vector<double> executed = std::move(buffer_.front());
  buffer_.pop_front();
  return Wrapper::step(executed);
}

ObservationDelayWrapper::ObservationDelayWrapper(EnvPtr inner, int n) : Wrapper(std::move(inner)), n_(n) {
  require_non_negative(n, "observation");
}

TimeStep ObservationDelayWrapper::reset(std::uint64_t seed) {
  TimeStep ts = Wrapper::reset(seed);
  history_.clear();
  history_.emplace_back(ts.observation, ts.constraints);
  return ts;
}

TimeStep ObservationDelayWrapper::step(std::span<const double> action) {
  TimeStep ts = Wrapper::step(action);
  if (n_ == 0) return ts;
  history_.emplace_back(std::move(ts.observation), std::move(ts.constraints));
  if (history_.size() > static_cast<std::size_t>(n_) + 1) history_.pop_front();
  // Until n steps have passed, the front is still the reset observation.
  ts.observation = history_.front().first;
  ts.constraints = history_.front().second;
  return ts;
}

RewardDelayWrapper::RewardDelayWrapper(EnvPtr inner, int n) : Wrapper(std::move(inner)), n_(n) {
  require_non_negative(n, "reward");
}

TimeStep RewardDelayWrapper::reset(std::uint64_t seed) {
  pending_.clear();
  return Wrapper::reset(seed);
}

TimeStep RewardDelayWrapper::step(std::span<const double> action) {
  TimeStep ts = Wrapper::step(action);
  if (n_ == 0) return ts;
  pending_.emplace_back(ts.reward, ts.base_reward);
  double reward = 0.0;
  double base = 0.0;
  if (pending_.size() > static_cast<std::size_t>(n_)) {
    std::tie(reward, base) = pending_.front();
    pending_.pop_front();
  }
  if (ts.last()) {
    for (const auto& [r, b] : pending_) {
      reward += r;
      base += b;
    }
    pending_.clear();
  }
  ts.reward = reward;
  ts.base_reward = base;
  return ts;
}

ActionRepetitionWrapper::ActionRepetitionWrapper(EnvPtr inner, RepetitionSpec spec, std::uint64_t seed)
    : Wrapper(std::move(inner)), spec_(spec), seed_(seed) {
  std::vector<std::string> problems;
  if (spec.k < 1) problems.push_back("repetition.k must be >= 1");
  if (!(spec.actions_prob >= 0.0 && spec.actions_prob <= 1.0)) problems.push_back("repetition.prob must be in [0, 1]");
  if (spec.actions_steps < 1) problems.push_back("repetition.steps must be >= 1");
  if (!problems.empty()) throw ConfigError(problems);
}

TimeStep ActionRepetitionWrapper::reset(std::uint64_t seed) {
  rng_.seed(derive_seed(seed_, {seed}));
  held_.clear();
  remaining_ = 0;
  return Wrapper::reset(seed);
}

TimeStep ActionRepetitionWrapper::step(std::span<const double> action) {
  if (spec_.neutral()) return Wrapper::step(action);
  return spec_.mode == RepetitionMode::kFixed ? step_fixed(action) : step_probabilistic(action);
}

TimeStep ActionRepetitionWrapper::step_fixed(std::span<const double> action) {
  TimeStep out = Wrapper::step(action);
  double weight = out.discount;
  std::vector<bool> all_satisfied = out.constraints;
  for (int i = 1; i < spec_.k && !out.last(); ++i) {
    TimeStep next = Wrapper::step(action);
    out.reward += weight * next.reward;
    out.base_reward += weight * next.base_reward;
    weight *= next.discount;
    for (std::size_t c = 0; c < all_satisfied.size() && c < next.constraints.size(); ++c) {
      all_satisfied[c] = all_satisfied[c] && next.constraints[c];
    }
    out.kind = next.kind;
    out.observation = std::move(next.observation);
  }
  out.discount = weight;
  out.constraints = std::move(all_satisfied);
  return out;
}

TimeStep ActionRepetitionWrapper::step_probabilistic(std::span<const double> action) {
  if (remaining_ > 0) {
    --remaining_;
    return Wrapper::step(held_);
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (unif(rng_) < spec_.actions_prob) {
    held_.assign(action.begin(), action.end());
    remaining_ = spec_.actions_steps - 1;
  }
  return Wrapper::step(action);
}

EnvPtr wrap_action_delay(EnvPtr env, int n) { return std::make_unique<ActionDelayWrapper>(std::move(env), n); }

EnvPtr wrap_observation_delay(EnvPtr env, int n) {
  return std::make_unique<ObservationDelayWrapper>(std::move(env), n);
}

EnvPtr wrap_reward_delay(EnvPtr env, int n) { return std::make_unique<RewardDelayWrapper>(std::move(env), n); }

EnvPtr wrap_action_repetition(EnvPtr env, const RepetitionSpec& spec, std::uint64_t seed) {
  return std::make_unique<ActionRepetitionWrapper>(std::move(env), spec, seed);
}

}  // namespace rwrl
