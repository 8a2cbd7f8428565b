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

#include <array>
#include <limits>

#include "rwrl/environment.hpp"
#include "rwrl/rng.hpp"

namespace rwrl {

/// Cart position/velocity and pole angle from upright (0 = up, pi = down).
/// The angle is stored unwrapped.
struct CartpoleState {
  double x = 0.0;
  double x_dot = 0.0;
  double theta = 0.0;
  double theta_dot = 0.0;

  std::array<double, 4> as_array() const { return {x, x_dot, theta, theta_dot}; }
  static CartpoleState from_array(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }
};

struct CartpoleParams {
  double pole_length = 1.0;     // m, full length; pivot-to-centre is half
  double pole_mass = 0.1;       // kg
  double cart_mass = 1.0;       // kg
  double joint_damping = 0.0;   // N m s / rad
  double slider_damping = 0.0;  // N s / m
  double gravity = 9.81;        // m / s^2
  double dt = 0.01;             // s
  double force_scale = 10.0;    // N per unit action
  int episode_steps = 1000;

  void validate() const;
};

/// Safety limits of the cartpole constraint catalogue at safety_coeff = 1.
struct CartpoleConstraintLimits {
  double slider_pos = 2.5;        // |x| bound, m
  double slider_accel = 60.0;     // |x_ddot| bound, m/s^2
  double balance_angle = 0.25;    // rad; velocity limit applies inside this cone
  double balance_velocity = 2.0;  // |theta_dot| bound, rad/s
};

namespace cartpole {

/// Time derivative of [x, x_dot, theta, theta_dot] under a horizontal force.
std::array<double, 4> derivatives(const CartpoleParams& p, const std::array<double, 4>& s, double force);
std::array<double, 4> rk4_step(const CartpoleParams& p, const std::array<double, 4>& s, double force, double dt);
/// Total mechanical energy (kinetic + potential, zero at pivot height).
double energy(const CartpoleParams& p, const CartpoleState& s);
double wrap_angle(double theta);  // into (-pi, pi]
double swingup_reward(const CartpoleState& s);
std::vector<Constraint> constraints(double safety_coeff, const CartpoleConstraintLimits& limits = {});

}  // namespace cartpole

/// Swing-up task: the pole starts hanging down and must be balanced upright
/// with the cart near the origin. Observation is [x, cos, sin, x_dot, theta_dot].
class CartpoleEnv final : public Environment {
 public:
  explicit CartpoleEnv(CartpoleParams params = {});

  TimeStep reset(std::uint64_t seed) override;
  TimeStep step(std::span<const double> action) override;
  using Environment::step;

  const BoundedSpec& observation_spec() const override { return observation_spec_; }
  const BoundedSpec& action_spec() const override { return action_spec_; }
  std::string name() const override { return "cartpole"; }
  int episode_steps() const override { return active_.episode_steps; }

  std::vector<std::string> parameter_names() const override;
  double parameter(std::string_view name) const override;
  void set_parameter(std::string_view name, double value) override;
  std::vector<Constraint> constraint_catalogue(double safety_coeff) const override;
  const StateTransition& last_transition() const override { return transition_; }

  const CartpoleState& state() const { return state_; }
  /// Overrides the physical state mid-episode (tests and diagnostics).
  void set_state(const CartpoleState& s) { state_ = s; }
  /// Parameters used by the running episode.
  const CartpoleParams& active_params() const { return active_; }

  std::vector<double> observe() const;

 private:
  CartpoleParams pending_;
  CartpoleParams active_;
  CartpoleState state_;
  BoundedSpec observation_spec_;
  BoundedSpec action_spec_;
  StateTransition transition_;
  Rng rng_;
  int t_ = 0;
  bool started_ = false;
};

/// Oracle environment: observation is the step index, reward is the action
/// value actually executed, and the episode ends after `length` steps.
class DiagnosticEnv final : public Environment {
 public:
  explicit DiagnosticEnv(int length = 100, double action_bound = std::numeric_limits<double>::infinity());

  TimeStep reset(std::uint64_t seed) override;
  TimeStep step(std::span<const double> action) override;
  using Environment::step;

  const BoundedSpec& observation_spec() const override { return observation_spec_; }
  const BoundedSpec& action_spec() const override { return action_spec_; }
  std::string name() const override { return "diagnostic"; }
  int episode_steps() const override { return length_; }
  const StateTransition& last_transition() const override { return transition_; }

  /// Every action executed in the current episode, in order.
  const std::vector<double>& executed() const { return executed_; }

 private:
  int length_;
  int t_ = 0;
  bool started_ = false;
  BoundedSpec observation_spec_;
  BoundedSpec action_spec_;
  StateTransition transition_;
  std::vector<double> executed_;
};

/// Constructs a base environment by registry name ("cartpole", "diagnostic").
EnvPtr make_base_env(std::string_view name);

}  // namespace rwrl
