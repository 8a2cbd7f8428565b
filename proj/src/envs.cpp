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

#include "rwrl/envs.hpp"

#include <cmath>
#include <numbers>

#include "rwrl/errors.hpp"

namespace rwrl {

void CartpoleParams::validate() const {
  std::vector<std::string> problems;
  if (!(pole_length > 0.0)) problems.push_back("pole_length must be positive");
  if (!(pole_mass > 0.0)) problems.push_back("pole_mass must be positive");
  if (!(cart_mass > 0.0)) problems.push_back("cart_mass must be positive");
  if (!(joint_damping >= 0.0)) problems.push_back("joint_damping must be non-negative");
  if (!(slider_damping >= 0.0)) problems.push_back("slider_damping must be non-negative");
  if (!(dt > 0.0)) problems.push_back("dt must be positive");
  if (!(force_scale > 0.0)) problems.push_back("force_scale must be positive");
  if (episode_steps < 1) problems.push_back("episode_steps must be >= 1");
  if (!problems.empty()) throw ConfigError(problems);
}

namespace cartpole {

std::array<double, 4> derivatives(const CartpoleParams& p, const std::array<double, 4>& s, double force) {
  const double half = 0.5 * p.pole_length;
  const double total_mass = p.cart_mass + p.pole_mass;
  const double ml = p.pole_mass * half;
  const double inertia = (4.0 / 3.0) * p.pole_mass * half * half;
  const double c = std::cos(s[2]);
  const double sn = std::sin(s[2]);
  const double x_dot = s[1];
  const double theta_dot = s[3];

  // [M+m, ml cos; ml cos, 4/3 m l^2] [x_dd; th_dd] = [rhs_x; rhs_th]
  const double rhs_x = force + ml * theta_dot * theta_dot * sn - p.slider_damping * x_dot;
  const double rhs_th = ml * p.gravity * sn - p.joint_damping * theta_dot;
  const double coupling = ml * c;
  const double det = total_mass * inertia - coupling * coupling;
  const double x_dd = (rhs_x * inertia - coupling * rhs_th) / det;
  const double th_dd = (total_mass * rhs_th - coupling * rhs_x) / det;
  return {x_dot, x_dd, theta_dot, th_dd};
}

std::array<double, 4> rk4_step(const CartpoleParams& p, const std::array<double, 4>& s, double force, double dt) {
  auto axpy = [](const std::array<double, 4>& a, double h, const std::array<double, 4>& b) {
    return std::array<double, 4>{a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2], a[3] + h * b[3]};
  };
  const auto k1 = derivatives(p, s, force);
  const auto k2 = derivatives(p, axpy(s, 0.5 * dt, k1), force);
  const auto k3 = derivatives(p, axpy(s, 0.5 * dt, k2), force);
  const auto k4 = derivatives(p, axpy(s, dt, k3), force);
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) out[i] = s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

double energy(const CartpoleParams& p, const CartpoleState& s) {
  const double half = 0.5 * p.pole_length;
  const double m = p.pole_mass;
  const double kinetic = 0.5 * (p.cart_mass + m) * s.x_dot * s.x_dot +
                         m * half * std::cos(s.theta) * s.x_dot * s.theta_dot +
                         0.5 * (4.0 / 3.0) * m * half * half * s.theta_dot * s.theta_dot;
  const double potential = m * p.gravity * half * std::cos(s.theta);
  return kinetic + potential;
}

double wrap_angle(double theta) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double w = std::fmod(theta, kTwoPi);
  if (w > std::numbers::pi) w -= kTwoPi;
  if (w <= -std::numbers::pi) w += kTwoPi;
  return w;
}

double swingup_reward(const CartpoleState& s) {
  const double upright = 0.5 * (1.0 + std::cos(s.theta));
  const double centered = std::max(0.0, 1.0 - (s.x / 2.0) * (s.x / 2.0));
  return upright * centered;
}

std::vector<Constraint> constraints(double safety_coeff, const CartpoleConstraintLimits& limits) {
  // State layout in StateTransition: [x, x_dot, theta, theta_dot].
  const double pos_limit = safety_coeff * limits.slider_pos;
  const double accel_limit = safety_coeff * limits.slider_accel;
  const double cone = limits.balance_angle;
  const double vel_limit = safety_coeff * limits.balance_velocity;

  std::vector<Constraint> out;
  out.push_back({"slider_pos",
                 [pos_limit](const StateTransition& t) { return std::abs(t.after[0]) < pos_limit; },
                 {{"x_max", limits.slider_pos}}});
  out.push_back({"slider_accel",
                 [accel_limit](const StateTransition& t) {
                   const double accel = t.dt > 0.0 ? (t.after[1] - t.before[1]) / t.dt : 0.0;
                   return std::abs(accel) < accel_limit;
                 },
                 {{"a_max", limits.slider_accel}}});
  out.push_back({"balance_velocity",
                 [cone, vel_limit](const StateTransition& t) {
                   return std::abs(wrap_angle(t.after[2])) > cone || std::abs(t.after[3]) < vel_limit;
                 },
                 {{"theta_l", limits.balance_angle}, {"theta_dot_v", limits.balance_velocity}}});
  return out;
}

}  // namespace cartpole

CartpoleEnv::CartpoleEnv(CartpoleParams params) : pending_(params), active_(params) {
  params.validate();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  observation_spec_.append("x", -kInf, kInf);
  observation_spec_.append("cos_theta", -1.0, 1.0);
  observation_spec_.append("sin_theta", -1.0, 1.0);
  observation_spec_.append("x_dot", -kInf, kInf);
  observation_spec_.append("theta_dot", -kInf, kInf);
  action_spec_.append("force", -1.0, 1.0);
}

std::vector<double> CartpoleEnv::observe() const {
  // cos/sin make the wrap of theta implicit.
  return {state_.x, std::cos(state_.theta), std::sin(state_.theta), state_.x_dot, state_.theta_dot};
}

TimeStep CartpoleEnv::reset(std::uint64_t seed) {
  active_ = pending_;
  rng_.seed(seed);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  state_ = {};
  state_.x = jitter(rng_);
  state_.theta = std::numbers::pi + jitter(rng_);
  t_ = 0;
  started_ = true;

  const auto s = state_.as_array();
  transition_ = {{s.begin(), s.end()}, {0.0}, {s.begin(), s.end()}, active_.dt};

  TimeStep ts;
  ts.kind = StepKind::kFirst;
  ts.observation = observe();
  return ts;
}

TimeStep CartpoleEnv::step(std::span<const double> action) {
  if (!started_) throw ContractError("cartpole: step() called before reset()");
  if (t_ >= active_.episode_steps) throw ContractError("cartpole: step() called on a finished episode");

  const double a = action_spec_.clip(action)[0];
  const auto before = state_.as_array();
  const auto after = cartpole::rk4_step(active_, before, active_.force_scale * a, active_.dt);
  state_ = CartpoleState::from_array(after);
  ++t_;

  transition_.before.assign(before.begin(), before.end());
  transition_.action.assign(1, a);
  transition_.after.assign(after.begin(), after.end());
  transition_.dt = active_.dt;

  TimeStep ts;
  ts.kind = t_ >= active_.episode_steps ? StepKind::kLast : StepKind::kMid;
  ts.reward = cartpole::swingup_reward(state_);
  ts.base_reward = ts.reward;
  ts.discount = 1.0;  // episodes end by time limit only
  ts.observation = observe();
  return ts;
}

std::vector<std::string> CartpoleEnv::parameter_names() const {
  return {"pole_length", "pole_mass", "joint_damping", "slider_damping"};
}

double CartpoleEnv::parameter(std::string_view name) const {
  if (name == "pole_length") return pending_.pole_length;
  if (name == "pole_mass") return pending_.pole_mass;
  if (name == "joint_damping") return pending_.joint_damping;
  if (name == "slider_damping") return pending_.slider_damping;
  return Environment::parameter(name);
}

void CartpoleEnv::set_parameter(std::string_view name, double value) {
  CartpoleParams next = pending_;
  if (name == "pole_length") {
    next.pole_length = value;
  } else if (name == "pole_mass") {
    next.pole_mass = value;
  } else if (name == "joint_damping") {
    next.joint_damping = value;
  } else if (name == "slider_damping") {
    next.slider_damping = value;
  } else {
    Environment::set_parameter(name, value);
  }
  next.validate();
  pending_ = next;
}

std::vector<Constraint> CartpoleEnv::constraint_catalogue(double safety_coeff) const {
  return cartpole::constraints(safety_coeff);
}

DiagnosticEnv::DiagnosticEnv(int length, double action_bound) : length_(length) {
  if (length < 1) throw ConfigError("diagnostic: length must be >= 1");
  if (!(action_bound > 0.0)) throw ConfigError("diagnostic: action bound must be positive");
  observation_spec_.append("t", 0.0, static_cast<double>(length));
  action_spec_.append("a", -action_bound, action_bound);
}

TimeStep DiagnosticEnv::reset(std::uint64_t) {
  t_ = 0;
  started_ = true;
  executed_.clear();
  transition_ = {{0.0}, {0.0}, {0.0}, 1.0};
  TimeStep ts;
  ts.observation = {0.0};
  return ts;
}

TimeStep DiagnosticEnv::step(std::span<const double> action) {
  if (!started_) throw ContractError("diagnostic: step() called before reset()");
  if (t_ >= length_) throw ContractError("diagnostic: step() called on a finished episode");
  const double a = action_spec_.clip(action)[0];
  executed_.push_back(a);
  ++t_;
  transition_ = {{static_cast<double>(t_ - 1)}, {a}, {static_cast<double>(t_)}, 1.0};

  TimeStep ts;
  ts.kind = t_ >= length_ ? StepKind::kLast : StepKind::kMid;
  ts.reward = a;
  ts.base_reward = a;
  ts.discount = 1.0;
  ts.observation = {static_cast<double>(t_)};
  return ts;
}

EnvPtr make_base_env(std::string_view name) {
  if (name == "cartpole") return std::make_unique<CartpoleEnv>();
  if (name == "diagnostic") return std::make_unique<DiagnosticEnv>();
  throw ConfigError("unknown environment '" + std::string(name) + "'");
}

}  // namespace rwrl
