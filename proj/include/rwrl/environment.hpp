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
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rwrl {

/// Box-shaped space: one [minimum, maximum] interval and label per component.
struct BoundedSpec {
  std::vector<double> minimum;
  std::vector<double> maximum;
  std::vector<std::string> names;

  std::size_t shape() const { return names.size(); }
  void append(std::string name, double lo, double hi);
  /// Throws ConfigError when bounds and names disagree or min > max.
  void validate() const;
  std::vector<double> clip(std::span<const double> values) const;
};

/// Observation components whose names carry one of these prefixes are
/// ground-truth signals and are never corrupted by sensor-noise wrappers.
inline constexpr std::string_view kConstraintPrefix = "constraint_";
inline constexpr std::string_view kObjectivePrefix = "objective_";
bool is_exempt_from_sensor_noise(std::string_view component_name);

enum class StepKind { kFirst, kMid, kLast };

struct TimeStep {
  StepKind kind = StepKind::kFirst;
  double reward = 0.0;
  // Task reward before any objective mixing; travels with `reward` through
  // every reward-shifting wrapper.
  double base_reward = 0.0;
  double discount = 1.0;
  std::vector<double> observation;
  // true = constraint satisfied. Empty when no constraints are active.
  std::vector<bool> constraints;

  bool first() const { return kind == StepKind::kFirst; }
  bool mid() const { return kind == StepKind::kMid; }
  bool last() const { return kind == StepKind::kLast; }

  bool operator==(const TimeStep&) const = default;
};

/// Physical view of the most recent environment transition.
struct StateTransition {
  std::vector<double> before;
  std::vector<double> action;  // as executed (after clipping)
  std::vector<double> after;
  double dt = 0.0;
};

/// A named safety predicate over one transition. Pure and deterministic.
struct Constraint {
  std::string name;
  std::function<bool(const StateTransition&)> predicate;
  std::map<std::string, double> limits;

  bool satisfied(const StateTransition& t) const { return predicate(t); }
};

/// Episodic environment. Instances are single-threaded and own their RNGs.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual TimeStep reset(std::uint64_t seed) = 0;
  virtual TimeStep step(std::span<const double> action) = 0;

  virtual const BoundedSpec& observation_spec() const = 0;
  virtual const BoundedSpec& action_spec() const = 0;
  /// Names of the constraints reported in TimeStep::constraints.
  virtual std::vector<std::string> constraint_names() const { return {}; }

  virtual std::string name() const = 0;
  /// Maximum number of steps in one episode of the underlying task.
  virtual int episode_steps() const = 0;

  // Physical parameter registry. Changes take effect at the next reset.
  virtual std::vector<std::string> parameter_names() const { return {}; }
  virtual double parameter(std::string_view name) const;
  virtual void set_parameter(std::string_view name, double value);

  /// Constraint catalogue of the task at the given safety coefficient.
  virtual std::vector<Constraint> constraint_catalogue(double safety_coeff) const;
  virtual const StateTransition& last_transition() const;
  /// Online violation count per active constraint for the running episode.
  virtual std::vector<std::int64_t> episode_violations() const { return {}; }

  // Convenience overload for scalar-action environments.
  TimeStep step(double action) { return step(std::span<const double>(&action, 1)); }
};

using EnvPtr = std::unique_ptr<Environment>;

/// Forwards everything to an inner environment; challenge wrappers override
/// only the parts they perturb.
class Wrapper : public Environment {
 public:
  explicit Wrapper(EnvPtr inner);

  TimeStep reset(std::uint64_t seed) override { return inner_->reset(seed); }
  TimeStep step(std::span<const double> action) override { return inner_->step(action); }
  using Environment::step;

  const BoundedSpec& observation_spec() const override { return inner_->observation_spec(); }
  const BoundedSpec& action_spec() const override { return inner_->action_spec(); }
  std::vector<std::string> constraint_names() const override { return inner_->constraint_names(); }
  std::string name() const override { return inner_->name(); }
  int episode_steps() const override { return inner_->episode_steps(); }

  std::vector<std::string> parameter_names() const override { return inner_->parameter_names(); }
  double parameter(std::string_view n) const override { return inner_->parameter(n); }
  void set_parameter(std::string_view n, double v) override { inner_->set_parameter(n, v); }
  std::vector<Constraint> constraint_catalogue(double c) const override {
    return inner_->constraint_catalogue(c);
  }
  const StateTransition& last_transition() const override { return inner_->last_transition(); }
  std::vector<std::int64_t> episode_violations() const override { return inner_->episode_violations(); }

  Environment& inner() { return *inner_; }
  const Environment& inner() const { return *inner_; }

 private:
  EnvPtr inner_;
};

}  // namespace rwrl
