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

#include "rwrl/noise.hpp"

#include <limits>

#include "rwrl/errors.hpp"

namespace rwrl {

namespace {

std::vector<bool> exempt_mask(const BoundedSpec& spec) {
  std::vector<bool> mask(spec.shape());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = is_exempt_from_sensor_noise(spec.names[i]);
  return mask;
}

}  // namespace

GaussianNoiseWrapper::GaussianNoiseWrapper(EnvPtr inner, GaussianNoiseSpec spec, std::uint64_t seed)
    : Wrapper(std::move(inner)), spec_(spec), seed_(seed) {
  std::vector<std::string> problems;
  if (!(spec.actions_std >= 0.0)) problems.push_back("noise.gaussian.actions must be >= 0");
  if (!(spec.observations_std >= 0.0)) problems.push_back("noise.gaussian.observations must be >= 0");
  if (!problems.empty()) throw ConfigError(problems);
  exempt_ = exempt_mask(Wrapper::observation_spec());
}

void GaussianNoiseWrapper::corrupt(std::vector<double>& observation) {
  if (spec_.observations_std == 0.0) return;
  std::normal_distribution<double> noise(0.0, spec_.observations_std);
  for (std::size_t i = 0; i < observation.size(); ++i) {
    if (!exempt_[i]) observation[i] += noise(rng_);
  }
}

TimeStep GaussianNoiseWrapper::reset(std::uint64_t seed) {
  rng_.seed(derive_seed(seed_, {seed}));
  TimeStep ts = Wrapper::reset(seed);
  corrupt(ts.observation);
  return ts;
}

TimeStep GaussianNoiseWrapper::step(std::span<const double> action) {
  TimeStep ts;
  if (spec_.actions_std == 0.0) {
    ts = Wrapper::step(action);
  } else {
    std::normal_distribution<double> noise(0.0, spec_.actions_std);
    noisy_action_.assign(action.begin(), action.end());
    for (double& a : noisy_action_) a += noise(rng_);
    ts = Wrapper::step(noisy_action_);
  }
  corrupt(ts.observation);
  return ts;
}

HoldNoiseWrapper::HoldNoiseWrapper(EnvPtr inner, HoldKind kind, HoldNoiseSpec spec, std::uint64_t seed)
    : Wrapper(std::move(inner)), kind_(kind), spec_(spec), seed_(seed) {
  const char* label = kind == HoldKind::kStuck ? "noise.stuck" : "noise.dropped";
  std::vector<std::string> problems;
  if (!(spec.prob >= 0.0 && spec.prob <= 1.0)) problems.push_back(std::string(label) + ".prob must be in [0, 1]");
  if (spec.steps < 0) problems.push_back(std::string(label) + ".steps must be >= 0");
  if (!problems.empty()) throw ConfigError(problems);

  if (spec.target == NoiseTarget::kObservations) {
    exempt_ = exempt_mask(Wrapper::observation_spec());
  } else {
    exempt_.assign(Wrapper::action_spec().shape(), false);
  }
}

void HoldNoiseWrapper::apply(std::vector<double>& values, const std::vector<bool>& exempt) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (exempt[i]) continue;
    if (remaining_[i] == 0 && unif(rng_) < spec_.prob) {
      remaining_[i] = spec_.steps;
      held_[i] = kind_ == HoldKind::kStuck ? values[i] : 0.0;
    }
    if (remaining_[i] > 0) {
      values[i] = held_[i];
      --remaining_[i];
    }
  }
}

TimeStep HoldNoiseWrapper::reset(std::uint64_t seed) {
  rng_.seed(derive_seed(seed_, {seed}));
  remaining_.assign(exempt_.size(), 0);
  held_.assign(exempt_.size(), 0.0);
  return Wrapper::reset(seed);
}

TimeStep HoldNoiseWrapper::step(std::span<const double> action) {
  if (spec_.neutral()) return Wrapper::step(action);
  if (spec_.target == NoiseTarget::kActions) {
    std::vector<double> a(action.begin(), action.end());
    apply(a, exempt_);
    return Wrapper::step(a);
  }
  TimeStep ts = Wrapper::step(action);
  apply(ts.observation, exempt_);
  return ts;
}

DimensionalityWrapper::DimensionalityWrapper(EnvPtr inner, DimensionalitySpec spec, std::uint64_t seed)
    : Wrapper(std::move(inner)), count_(spec.num_random_state_observations), seed_(seed) {
  if (count_ < 0) throw ConfigError("dimensionality.num_random_state_observations must be >= 0");
  spec_out_ = Wrapper::observation_spec();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count_; ++i) spec_out_.append("dummy_" + std::to_string(i), -kInf, kInf);
}

void DimensionalityWrapper::extend(std::vector<double>& observation) {
  std::normal_distribution<double> standard(0.0, 1.0);
  for (int i = 0; i < count_; ++i) observation.push_back(standard(rng_));
}

TimeStep DimensionalityWrapper::reset(std::uint64_t seed) {
  rng_.seed(derive_seed(seed_, {seed}));
  TimeStep ts = Wrapper::reset(seed);
  extend(ts.observation);
  return ts;
}

TimeStep DimensionalityWrapper::step(std::span<const double> action) {
  TimeStep ts = Wrapper::step(action);
  extend(ts.observation);
  return ts;
}

EnvPtr wrap_gaussian(EnvPtr env, const GaussianNoiseSpec& spec, std::uint64_t seed) {
  return std::make_unique<GaussianNoiseWrapper>(std::move(env), spec, seed);
}

EnvPtr wrap_stuck(EnvPtr env, const HoldNoiseSpec& spec, std::uint64_t seed) {
  return std::make_unique<HoldNoiseWrapper>(std::move(env), HoldKind::kStuck, spec, seed);
}

EnvPtr wrap_dropped(EnvPtr env, const HoldNoiseSpec& spec, std::uint64_t seed) {
  return std::make_unique<HoldNoiseWrapper>(std::move(env), HoldKind::kDropped, spec, seed);
}

EnvPtr wrap_dimensionality(EnvPtr env, const DimensionalitySpec& spec, std::uint64_t seed) {
  return std::make_unique<DimensionalityWrapper>(std::move(env), spec, seed);
}

}  // namespace rwrl
