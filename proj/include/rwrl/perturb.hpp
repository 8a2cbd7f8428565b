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

#include <string>
#include <string_view>

#include "rwrl/environment.hpp"
#include "rwrl/rng.hpp"

namespace rwrl {

enum class SchedulerKind {
  kConstant,
  kRandomWalk,
  kDriftPos,
  kDriftNeg,
  kCyclicPos,
  kCyclicNeg,
  kUniform,
  kSawWave,
};

/// Accepts the lower-case names used in config files ("cyclic_pos", ...).
SchedulerKind parse_scheduler(std::string_view name);
std::string_view scheduler_name(SchedulerKind kind);

struct PerturbSpec {
  std::string param = "pole_length";
  SchedulerKind scheduler = SchedulerKind::kConstant;
  int frequency = 1;  // episodes between updates
  double start = 1.0;
  double min = 1.0;
  double max = 1.0;
  double std = 0.0;

  std::vector<std::string> problems() const;
  void validate() const;
  bool operator==(const PerturbSpec&) const = default;
};

enum class Direction { kUp, kDown };

struct SchedulerState {
  double current_value = 0.0;
  Direction direction = Direction::kUp;  // saw wave only
  int episodes_since_update = 0;
  Rng rng;
};

SchedulerState initial_scheduler_state(const PerturbSpec& spec, std::uint64_t seed);

/// One scheduler update. The returned value always lies in [min, max].
SchedulerState advance(SchedulerState state, const PerturbSpec& spec);

/// Sets a registered physical parameter; effective from the next reset.
void apply(Environment& env, std::string_view param, double value);

/// Cartpole pole-length bands of increasing difficulty ("diff1" .. "diff4").
PerturbSpec difficulty_preset(std::string_view name);

/// Evolves one physical parameter between episodes. The first episode runs
/// with `start`; afterwards the scheduler advances every `frequency` resets.
class PerturbWrapper final : public Wrapper {
 public:
  PerturbWrapper(EnvPtr inner, PerturbSpec spec, std::uint64_t seed);

  TimeStep reset(std::uint64_t seed) override;

  /// Value applied to the current episode.
  double current_value() const { return state_.current_value; }
  const PerturbSpec& spec() const { return spec_; }

 private:
  PerturbSpec spec_;
  SchedulerState state_;
  bool first_episode_ = true;
};

EnvPtr wrap_perturbation(EnvPtr env, const PerturbSpec& spec, std::uint64_t seed);

}  // namespace rwrl
