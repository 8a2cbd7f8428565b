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

#include "rwrl/perturb.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "rwrl/errors.hpp"

namespace rwrl {

namespace {

constexpr std::array<std::pair<std::string_view, SchedulerKind>, 8> kSchedulers{{
    {"constant", SchedulerKind::kConstant},
    {"random_walk", SchedulerKind::kRandomWalk},
    {"drift_pos", SchedulerKind::kDriftPos},
    {"drift_neg", SchedulerKind::kDriftNeg},
    {"cyclic_pos", SchedulerKind::kCyclicPos},
    {"cyclic_neg", SchedulerKind::kCyclicNeg},
    {"uniform", SchedulerKind::kUniform},
    {"saw_wave", SchedulerKind::kSawWave},
}};

}  // namespace

SchedulerKind parse_scheduler(std::string_view name) {
  for (const auto& [key, kind] : kSchedulers) {
    if (key == name) return kind;
  }
  throw ConfigError("unknown perturbation scheduler '" + std::string(name) + "'");
}

std::string_view scheduler_name(SchedulerKind kind) {
  for (const auto& [key, k] : kSchedulers) {
    if (k == kind) return key;
  }
  return "unknown";
}

std::vector<std::string> PerturbSpec::problems() const {
  std::vector<std::string> out;
  if (param.empty()) out.push_back("perturb.param must name a parameter");
  if (frequency < 1) out.push_back("perturb.frequency must be >= 1");
  if (!(min <= max)) out.push_back("perturb.min must be <= perturb.max");
  if (!(min <= start && start <= max)) out.push_back("perturb.start must lie in [min, max]");
  if (!(std >= 0.0)) out.push_back("perturb.std must be >= 0");
  return out;
}

void PerturbSpec::validate() const {
  auto p = problems();
  if (!p.empty()) throw ConfigError(p);
}

SchedulerState initial_scheduler_state(const PerturbSpec& spec, std::uint64_t seed) {
  SchedulerState s;
  s.current_value = spec.start;
  s.rng.seed(seed);
  return s;
}

SchedulerState advance(SchedulerState state, const PerturbSpec& spec) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto step_size = [&] { return std::abs(gauss(state.rng)) * spec.std; };
  double& v = state.current_value;

  switch (spec.scheduler) {
    case SchedulerKind::kConstant:
      v = spec.start;
      break;
    case SchedulerKind::kRandomWalk:
      v = std::clamp(v + spec.std * gauss(state.rng), spec.min, spec.max);
      break;
    case SchedulerKind::kDriftPos:
      v = std::min(v + step_size(), spec.max);
      break;
    case SchedulerKind::kDriftNeg:
      v = std::max(v - step_size(), spec.min);
      break;
    case SchedulerKind::kCyclicPos:
      v += step_size();
      if (v >= spec.max) v = spec.min;
      break;
    case SchedulerKind::kCyclicNeg:
      v -= step_size();
      if (v <= spec.min) v = spec.max;
      break;
    case SchedulerKind::kUniform:
      v = std::uniform_real_distribution<double>(spec.min, spec.max)(state.rng);
      break;
    case SchedulerKind::kSawWave:
      if (state.direction == Direction::kUp) {
        v += step_size();
        if (v >= spec.max) {
          v = spec.max;
          state.direction = Direction::kDown;
        }
      } else {
        v -= step_size();
        if (v <= spec.min) {
          v = spec.min;
          state.direction = Direction::kUp;
        }
      }
      break;
  }
  // uniform_real_distribution may round up to max; keep the range closed.
  v = std::clamp(v, spec.min, spec.max);
  state.episodes_since_update = 0;
  return state;
}

void apply(Environment& env, std::string_view param, double value) { env.set_parameter(param, value); }

PerturbSpec difficulty_preset(std::string_view name) {
  struct Band {
    std::string_view name;
    double min, max, std;
  };
  static constexpr std::array<Band, 4> kBands{{
      {"diff1", 0.9, 1.1, 0.02},
      {"diff2", 0.7, 1.7, 0.1},
      {"diff3", 0.5, 2.3, 0.15},
      {"diff4", 0.3, 3.0, 0.2},
  }};
  for (const auto& b : kBands) {
    if (b.name == name) {
      PerturbSpec spec;
      spec.param = "pole_length";
      spec.scheduler = SchedulerKind::kUniform;
      spec.frequency = 1;
      spec.start = 1.0;
      spec.min = b.min;
      spec.max = b.max;
      spec.std = b.std;
      return spec;
    }
  }
  throw ConfigError("unknown difficulty preset '" + std::string(name) + "' (expected diff1..diff4)");
}

PerturbWrapper::PerturbWrapper(EnvPtr inner, PerturbSpec spec, std::uint64_t seed)
    : Wrapper(std::move(inner)), spec_(std::move(spec)), state_(initial_scheduler_state(spec_, seed)) {
  spec_.validate();
  const auto names = Wrapper::parameter_names();
  if (std::find(names.begin(), names.end(), spec_.param) == names.end()) {
    throw ConfigError("environment '" + Wrapper::name() + "' has no perturbable parameter '" + spec_.param + "'");
  }
}

TimeStep PerturbWrapper::reset(std::uint64_t seed) {
  if (first_episode_) {
    first_episode_ = false;
  } else if (++state_.episodes_since_update >= spec_.frequency) {
    state_ = advance(std::move(state_), spec_);
  }
  apply(inner(), spec_.param, state_.current_value);
  return Wrapper::reset(seed);
}

EnvPtr wrap_perturbation(EnvPtr env, const PerturbSpec& spec, std::uint64_t seed) {
  return std::make_unique<PerturbWrapper>(std::move(env), spec, seed);
}

}  // namespace rwrl
