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

#include "rwrl/environment.hpp"

namespace rwrl {

struct SafetySpec {
  bool enable = false;
  double safety_coeff = 1.0;  // 1 = default limits, 0 = zero-width bands
  bool observed = true;

  bool operator==(const SafetySpec&) const = default;
};

struct MultiObjSpec {
  bool enable = false;
  double coeff = 0.0;  // alpha
  bool observed = false;
  bool reward_mixing = true;

  bool operator==(const MultiObjSpec&) const = default;
};

/// Evaluates the task's constraint catalogue on the true physical transition
/// after every step. Constraints are observed, never enforced.
class ConstraintWrapper final : public Wrapper {
 public:
  ConstraintWrapper(EnvPtr inner, SafetySpec spec);

  TimeStep reset(std::uint64_t seed) override;
  TimeStep step(std::span<const double> action) override;
  using Environment::step;

  const BoundedSpec& observation_spec() const override { return spec_out_; }
  std::vector<std::string> constraint_names() const override;

  /// Violations per constraint in the current episode (reset excluded).
  std::vector<std::int64_t> episode_violations() const override { return episode_violations_; }
  /// Violations per constraint since construction.
  const std::vector<std::int64_t>& total_violations() const { return total_violations_; }

 private:
  std::vector<bool> evaluate() const;

  SafetySpec spec_;
  std::vector<Constraint> constraints_;
  BoundedSpec spec_out_;
  std::vector<std::int64_t> episode_violations_;
  std::vector<std::int64_t> total_violations_;
};

/// r_m = (1 - alpha) r_b + alpha r_c with r_c = satisfied / K.
double mixed_reward(double base_reward, std::size_t satisfied, std::size_t num_constraints, double alpha);

/// Replaces the reward with the constraint-mixed reward and optionally
/// exposes r_c as an extra observation component.
class MultiObjectiveWrapper final : public Wrapper {
 public:
  MultiObjectiveWrapper(EnvPtr inner, MultiObjSpec spec);

  TimeStep reset(std::uint64_t seed) override;
  TimeStep step(std::span<const double> action) override;
  using Environment::step;
  const BoundedSpec& observation_spec() const override { return spec_out_; }

 private:
  MultiObjSpec spec_;
  std::size_t num_constraints_;
  BoundedSpec spec_out_;
};

/// [sum r_b, sum 1(c_1 satisfied), ..., sum 1(c_K satisfied)] over one
/// episode; `constraint_bits[t]` belongs to the step that earned
/// `base_rewards[t]`.
std::vector<double> multiobj_return_vector(std::span<const double> base_rewards,
                                           const std::vector<std::vector<bool>>& constraint_bits);

/// Recombines a return vector: (1 - alpha) J_b + alpha mean_k J_k.
double combine_multiobj_returns(std::span<const double> returns, double alpha);

EnvPtr wrap_constraints(EnvPtr env, const SafetySpec& spec);
EnvPtr wrap_multiobj(EnvPtr env, const MultiObjSpec& spec);

}  // namespace rwrl
