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

#include "rwrl/constraints.hpp"

#include <algorithm>
#include <string>

#include "rwrl/errors.hpp"

namespace rwrl {

ConstraintWrapper::ConstraintWrapper(EnvPtr inner, SafetySpec spec) : Wrapper(std::move(inner)), spec_(spec) {
  if (!(spec.safety_coeff >= 0.0 && spec.safety_coeff <= 1.0)) {
    throw ConfigError("safety.coeff must be in [0, 1]");
  }
  constraints_ = Wrapper::constraint_catalogue(spec.safety_coeff);
  if (constraints_.empty()) {
    throw ConfigError("environment '" + Wrapper::name() + "' registers no constraints");
  }
  spec_out_ = Wrapper::observation_spec();
  if (spec.observed) {
    for (const auto& c : constraints_) spec_out_.append(std::string(kConstraintPrefix) + c.name, 0.0, 1.0);
  }
  episode_violations_.assign(constraints_.size(), 0);
  total_violations_.assign(constraints_.size(), 0);
}

std::vector<std::string> ConstraintWrapper::constraint_names() const {
  std::vector<std::string> names;
  for (const auto& c : constraints_) names.push_back(c.name);
  return names;
}

std::vector<bool> ConstraintWrapper::evaluate() const {
  const StateTransition& t = Wrapper::last_transition();
  std::vector<bool> bits(constraints_.size());
  for (std::size_t i = 0; i < constraints_.size(); ++i) bits[i] = constraints_[i].satisfied(t);
  return bits;
}

TimeStep ConstraintWrapper::reset(std::uint64_t seed) {
  TimeStep ts = Wrapper::reset(seed);
  std::fill(episode_violations_.begin(), episode_violations_.end(), 0);
  ts.constraints = evaluate();
  if (spec_.observed) {
    for (bool b : ts.constraints) ts.observation.push_back(b ? 1.0 : 0.0);
  }
  return ts;
}

TimeStep ConstraintWrapper::step(std::span<const double> action) {
  TimeStep ts = Wrapper::step(action);
  ts.constraints = evaluate();
  for (std::size_t i = 0; i < ts.constraints.size(); ++i) {
    if (!ts.constraints[i]) {
      ++episode_violations_[i];
      ++total_violations_[i];
    }
  }
  if (spec_.observed) {
    for (bool b : ts.constraints) ts.observation.push_back(b ? 1.0 : 0.0);
  }
  return ts;
}

double mixed_reward(double base_reward, std::size_t satisfied, std::size_t num_constraints, double alpha) {
  if (num_constraints == 0) throw ConfigError("multi-objective reward needs at least one constraint");
  if (satisfied > num_constraints) throw ContractError("satisfied count exceeds number of constraints");
  const double constraint_reward = static_cast<double>(satisfied) / static_cast<double>(num_constraints);
  return (1.0 - alpha) * base_reward + alpha * constraint_reward;
}

MultiObjectiveWrapper::MultiObjectiveWrapper(EnvPtr inner, MultiObjSpec spec) : Wrapper(std::move(inner)), spec_(spec) {
  if (!(spec.coeff >= 0.0 && spec.coeff <= 1.0)) throw ConfigError("multiobj.coeff must be in [0, 1]");
  num_constraints_ = Wrapper::constraint_names().size();
  if (num_constraints_ == 0) {
    throw ConfigError("multiobj requires active constraints (enable safety)");
  }
  spec_out_ = Wrapper::observation_spec();
  if (spec.observed) spec_out_.append(std::string(kObjectivePrefix) + "constraint_fraction", 0.0, 1.0);
}

TimeStep MultiObjectiveWrapper::reset(std::uint64_t seed) {
  TimeStep ts = Wrapper::reset(seed);
  if (spec_.observed) {
    const auto satisfied = static_cast<double>(std::count(ts.constraints.begin(), ts.constraints.end(), true));
    ts.observation.push_back(satisfied / static_cast<double>(num_constraints_));
  }
  return ts;
}

TimeStep MultiObjectiveWrapper::step(std::span<const double> action) {
  TimeStep ts = Wrapper::step(action);
  const auto satisfied = static_cast<std::size_t>(std::count(ts.constraints.begin(), ts.constraints.end(), true));
  if (spec_.reward_mixing) ts.reward = mixed_reward(ts.base_reward, satisfied, num_constraints_, spec_.coeff);
  if (spec_.observed) {
    ts.observation.push_back(static_cast<double>(satisfied) / static_cast<double>(num_constraints_));
  }
  return ts;
}

std::vector<double> multiobj_return_vector(std::span<const double> base_rewards,
                                           const std::vector<std::vector<bool>>& constraint_bits) {
  if (base_rewards.size() != constraint_bits.size()) {
    throw ContractError("multiobj_return_vector: rewards and constraint bits differ in length");
  }
  const std::size_t k = constraint_bits.empty() ? 0 : constraint_bits.front().size();
  std::vector<double> out(k + 1, 0.0);
  for (std::size_t t = 0; t < base_rewards.size(); ++t) {
    out[0] += base_rewards[t];
    if (constraint_bits[t].size() != k) throw ContractError("multiobj_return_vector: ragged constraint bits");
    for (std::size_t c = 0; c < k; ++c) out[c + 1] += constraint_bits[t][c] ? 1.0 : 0.0;
  }
  return out;
}

double combine_multiobj_returns(std::span<const double> returns, double alpha) {
  if (returns.size() < 2) throw ContractError("combine_multiobj_returns: need at least one constraint component");
  double constraint_sum = 0.0;
  for (std::size_t c = 1; c < returns.size(); ++c) constraint_sum += returns[c];
  return (1.0 - alpha) * returns[0] + alpha * constraint_sum / static_cast<double>(returns.size() - 1);
}

EnvPtr wrap_constraints(EnvPtr env, const SafetySpec& spec) {
  return std::make_unique<ConstraintWrapper>(std::move(env), spec);
}

EnvPtr wrap_multiobj(EnvPtr env, const MultiObjSpec& spec) {
  return std::make_unique<MultiObjectiveWrapper>(std::move(env), spec);
}

}  // namespace rwrl
