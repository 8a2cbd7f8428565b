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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rwrl/constraints.hpp"
#include "rwrl/delay.hpp"
#include "rwrl/noise.hpp"
#include "rwrl/perturb.hpp"

namespace rwrl {

enum class CombinedTier { kEasy, kMedium, kHard };

CombinedTier parse_tier(std::string_view name);
std::string_view tier_name(CombinedTier tier);

struct NoiseConfig {
  GaussianNoiseSpec gaussian;
  HoldNoiseSpec stuck;
  HoldNoiseSpec dropped;

  bool operator==(const NoiseConfig&) const = default;
};

struct PerturbConfig {
  bool enable = false;
  PerturbSpec spec;

  bool operator==(const PerturbConfig&) const = default;
};

/// Declarative description of every challenge applied to one environment.
struct ChallengeConfig {
  std::string env_name = "cartpole";
  DelaySpec delay;
  RepetitionSpec repetition;
  NoiseConfig noise;
  DimensionalitySpec dimensionality;
  PerturbConfig perturb;
  SafetySpec safety;
  MultiObjSpec multiobj;
  std::optional<CombinedTier> combined_challenge;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
  int episodes = 2000;

  /// Every violated field constraint, empty when valid.
  std::vector<std::string> problems() const;
  /// Throws an aggregated ConfigError listing all problems.
  void validate() const;

  bool operator==(const ChallengeConfig&) const = default;
};

/// Cartpole combined-challenge preset (safety and multi-objective disabled).
ChallengeConfig combined_preset(CombinedTier tier);
ChallengeConfig combined_preset(std::string_view tier);

/// Complete, defaults-filled JSON tree; object keys are sorted.
nlohmann::json to_json(const ChallengeConfig& config);

/// Parses a config tree. Unknown keys, type mismatches and out-of-range values
/// are collected and reported together. When `combined_challenge` is set the
/// preset supplies every challenge field and explicit values that disagree
/// with it are rejected.
ChallengeConfig config_from_json(const nlohmann::json& tree);
ChallengeConfig load_config(const std::string& path);

/// Hash of the canonical serialisation; independent of key order in the file.
std::string config_hash(const ChallengeConfig& config);

/// SHA-256 hex digest of arbitrary bytes.
std::string sha256_hex(std::string_view bytes);

/// Wraps the base environment in the fixed canonical order, innermost first:
/// perturbation, constraints, multi-objective reward, action noise (gaussian,
/// stuck, dropped), action delay, repetition, observation noise (gaussian,
/// stuck, dropped), dimensionality, observation delay, reward delay.
/// Wrappers at neutral settings are omitted. `seed` keys every noise stream.
EnvPtr build_env(const ChallengeConfig& config, std::uint64_t seed);

}  // namespace rwrl
