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

#include "rwrl/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rwrl/config.hpp"
#include "rwrl/errors.hpp"

namespace rwrl {

LinearPolicy::LinearPolicy(std::size_t obs_dim, std::size_t action_dim)
    : obs_dim_(obs_dim), action_dim_(action_dim), params_(num_params(obs_dim, action_dim), 0.0) {}

LinearPolicy::LinearPolicy(std::size_t obs_dim, std::size_t action_dim, std::vector<double> params)
    : obs_dim_(obs_dim), action_dim_(action_dim), params_(std::move(params)) {
  if (params_.size() != num_params(obs_dim, action_dim)) {
    throw ConfigError("linear policy expects " + std::to_string(num_params(obs_dim, action_dim)) +
                      " parameters, got " + std::to_string(params_.size()));
  }
}

std::vector<double> LinearPolicy::logits(std::span<const double> observation) const {
  if (observation.size() != obs_dim_) {
    throw ContractError("linear policy built for " + std::to_string(obs_dim_) + " inputs, got " +
                        std::to_string(observation.size()));
  }
  std::vector<double> z(action_dim_);
  const std::size_t stride = obs_dim_ + 1;
  for (std::size_t a = 0; a < action_dim_; ++a) {
    const double* row = params_.data() + a * stride;
    double acc = row[obs_dim_];
    for (std::size_t i = 0; i < obs_dim_; ++i) acc += row[i] * observation[i];
    z[a] = acc;
  }
  return z;
}

std::vector<double> LinearPolicy::act(std::span<const double> observation) {
  auto z = logits(observation);
  for (double& v : z) v = std::tanh(v);
  return z;
}

std::string LinearPolicy::id() const {
  std::string bytes(reinterpret_cast<const char*>(params_.data()), params_.size() * sizeof(double));
  return "linear-" + sha256_hex(bytes).substr(0, 12);
}

bool LinearPolicy::finite() const {
  return std::all_of(params_.begin(), params_.end(), [](double v) { return std::isfinite(v); });
}

nlohmann::json LinearPolicy::to_json() const {
  return {{"kind", "linear_tanh"}, {"obs_dim", obs_dim_}, {"action_dim", action_dim_}, {"params", params_}};
}

LinearPolicy LinearPolicy::from_json(const nlohmann::json& j) {
  try {
    return LinearPolicy(j.at("obs_dim").get<std::size_t>(), j.at("action_dim").get<std::size_t>(),
                        j.at("params").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed policy: ") + e.what());
  }
}

RandomPolicy::RandomPolicy(BoundedSpec action_spec, std::uint64_t seed)
    : spec_(std::move(action_spec)), seed_(seed), rng_(seed) {
  for (std::size_t i = 0; i < spec_.shape(); ++i) {
    if (!std::isfinite(spec_.minimum[i]) || !std::isfinite(spec_.maximum[i])) {
      throw ConfigError("random policy needs finite action bounds");
    }
  }
}

void RandomPolicy::begin_episode(std::uint64_t seed) { rng_.seed(derive_seed(seed_, {seed})); }

std::vector<double> RandomPolicy::act(std::span<const double> /*observation*/) {
  std::vector<double> a(spec_.shape());
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = std::uniform_real_distribution<double>(spec_.minimum[i], spec_.maximum[i])(rng_);
  }
  return a;
}

EpisodeOutcome run_episode(Environment& env, Policy& policy, std::uint64_t seed, const StepObserver& observer) {
  policy.begin_episode(seed);
  TimeStep ts = env.reset(seed);
  EpisodeOutcome out;
  StepRecord rec;
  while (!ts.last()) {
    std::vector<double> action = policy.act(ts.observation);
    if (observer) rec.observation = ts.observation;
    ts = env.step(action);
    out.episode_return += ts.reward;
    ++out.steps;
    if (observer) {
      rec.action = std::move(action);
      rec.executed_action = env.last_transition().action;
      rec.reward = ts.reward;
      rec.base_reward = ts.base_reward;
      rec.discount = ts.discount;
      rec.constraints = ts.constraints;
      observer(rec);
    }
  }
  out.violations = env.episode_violations();
  return out;
}

std::vector<double> evaluate(Policy& policy, Environment& env, int n, std::uint64_t seed) {
  std::vector<double> returns;
  returns.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    returns.push_back(run_episode(env, policy, derive_seed(seed, {static_cast<std::uint64_t>(i)})).episode_return);
  }
  return returns;
}

double mean(std::span<const double> values) {
  if (values.empty()) return std::nan("");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

}  // namespace rwrl
