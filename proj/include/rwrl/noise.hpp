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

#include "rwrl/environment.hpp"
#include "rwrl/rng.hpp"

namespace rwrl {

// Every noise wrapper owns its RNG. At each reset the stream is re-seeded from
// (wrapper seed, episode seed), so an episode is a pure function of the two.

struct GaussianNoiseSpec {
  double actions_std = 0.0;
  double observations_std = 0.0;

  bool neutral() const { return actions_std == 0.0 && observations_std == 0.0; }
  bool operator==(const GaussianNoiseSpec&) const = default;
};

enum class NoiseTarget { kObservations, kActions };

/// Shared by stuck and dropped sensors. steps == 0 disables the effect.
struct HoldNoiseSpec {
  NoiseTarget target = NoiseTarget::kObservations;
  double prob = 0.0;
  int steps = 1;

  bool neutral() const { return prob == 0.0 || steps == 0; }
  bool operator==(const HoldNoiseSpec&) const = default;
};

struct DimensionalitySpec {
  int num_random_state_observations = 0;

  bool operator==(const DimensionalitySpec&) const = default;
};

/// Adds white Gaussian noise to actions (before the inner env clips them) and
/// to observation components. Constraint/objective components are left clean.
class GaussianNoiseWrapper final : public Wrapper {
 public:
  GaussianNoiseWrapper(EnvPtr inner, GaussianNoiseSpec spec, std::uint64_t seed);

  TimeStep reset(std::uint64_t seed) override;
  TimeStep step(std::span<const double> action) override;
  using Environment::step;

 private:
  void corrupt(std::vector<double>& observation);

  GaussianNoiseSpec spec_;
  std::uint64_t seed_;
  Rng rng_;
  std::vector<bool> exempt_;
  std::vector<double> noisy_action_;
};

enum class HoldKind {
  kStuck,   // component freezes at the value it had when triggered
  kDropped  // component reads 0.0
};

/// Per-component stuck or dropped sensor/actuator process. A free component
/// triggers with probability `prob` on each step and then holds for `steps`
/// steps, the triggering step included; it may re-trigger immediately.
class HoldNoiseWrapper final : public Wrapper {
 public:
  HoldNoiseWrapper(EnvPtr inner, HoldKind kind, HoldNoiseSpec spec, std::uint64_t seed);

  TimeStep reset(std::uint64_t seed) override;
  TimeStep step(std::span<const double> action) override;
  using Environment::step;

 private:
  void apply(std::vector<double>& values, const std::vector<bool>& exempt);

  HoldKind kind_;
  HoldNoiseSpec spec_;
  std::uint64_t seed_;
  Rng rng_;
  std::vector<int> remaining_;
  std::vector<double> held_;
  std::vector<bool> exempt_;
};

/// Appends k fresh N(0, 1) components ("dummy_i") to every observation.
class DimensionalityWrapper final : public Wrapper {
 public:
  DimensionalityWrapper(EnvPtr inner, DimensionalitySpec spec, std::uint64_t seed);

  TimeStep reset(std::uint64_t seed) override;
  TimeStep step(std::span<const double> action) override;
  using Environment::step;
  const BoundedSpec& observation_spec() const override { return spec_out_; }

 private:
  void extend(std::vector<double>& observation);

  int count_;
  std::uint64_t seed_;
  Rng rng_;
  BoundedSpec spec_out_;
};

EnvPtr wrap_gaussian(EnvPtr env, const GaussianNoiseSpec& spec, std::uint64_t seed);
EnvPtr wrap_stuck(EnvPtr env, const HoldNoiseSpec& spec, std::uint64_t seed);
EnvPtr wrap_dropped(EnvPtr env, const HoldNoiseSpec& spec, std::uint64_t seed);
EnvPtr wrap_dimensionality(EnvPtr env, const DimensionalitySpec& spec, std::uint64_t seed);

}  // namespace rwrl
