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

// Offline datasets live in a directory holding two files:
//
//   episodes.jsonl  one EpisodeRecord per line, keys in this order:
//                   episode_index, env_name, env_seed, noise_seed,
//                   config_hash, perturbed_param_value (null when no
//                   perturbation is active), episode_return, violations,
//                   steps. `steps` is columnar: observations, actions,
//                   executed_actions, rewards, base_rewards, discounts and
//                   constraint_bits (one "0"/"1" string per step, '1' meaning
//                   satisfied). Step t pairs the observation seen before
//                   acting with the reward of the resulting time step.
//                   Doubles are written in shortest round-trip form.
//   manifest.json   written last; carries the SHA-256 of episodes.jsonl.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rwrl/agents.hpp"
#include "rwrl/config.hpp"
#include "rwrl/policy.hpp"

namespace rwrl {

enum class DatasetTier { kSmall, kMedium, kLarge, kCustom };

DatasetTier parse_dataset_tier(std::string_view name);
std::string_view dataset_tier_name(DatasetTier tier);
/// Episode count of a size tier for an environment (cartpole: 100/200/500).
int tier_episode_count(DatasetTier tier, std::string_view env_name);
/// Tier implied by an episode count; kCustom when none matches.
DatasetTier tier_for_count(int episodes, std::string_view env_name);

struct EpisodeRecord {
  int episode_index = 0;
  std::string env_name;
  std::uint64_t env_seed = 0;
  std::uint64_t noise_seed = 0;
  std::string config_hash;
  std::optional<double> perturbed_param_value;
  std::vector<StepRecord> steps;
  double episode_return = 0.0;
  std::vector<std::int64_t> violations;  // online counts from the constraint wrapper

  /// Summed rewards of the steps.
  double recomputed_return() const;
  /// Violations per constraint counted from the logged bits.
  std::vector<std::int64_t> recomputed_violations() const;
};

bool operator==(const StepRecord& a, const StepRecord& b);
bool operator==(const EpisodeRecord& a, const EpisodeRecord& b);

nlohmann::ordered_json to_json(const EpisodeRecord& record);
EpisodeRecord episode_from_json(const nlohmann::ordered_json& j);

struct DatasetManifest {
  int format_version = 1;
  DatasetTier tier = DatasetTier::kCustom;
  int episode_count = 0;
  std::string env_name;
  std::string behavior_policy_id;
  std::string config_hash;
  std::string checksum_algorithm = "sha256";
  std::string checksum;
  nlohmann::json config;  // the full ChallengeConfig tree

  bool operator==(const DatasetManifest&) const = default;
};

nlohmann::ordered_json to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::ordered_json& j);

inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kEpisodesFile = "episodes.jsonl";

struct RecordOptions {
  std::uint64_t seed = 0;        // episode i resets with derive_seed(seed, {i})
  std::uint64_t noise_seed = 0;  // passed to build_env
  std::optional<DatasetTier> tier;  // inferred from the count when absent
};

/// Rolls out `policy` for `n_episodes` in build_env(config, noise_seed) and
/// writes the dataset directory. Throws DatasetError on I/O failure.
DatasetManifest record(const ChallengeConfig& config, Policy& policy, int n_episodes,
                       const std::filesystem::path& dir, const RecordOptions& options = {});

/// Mixture of behaviour policies: episode i is collected by policies[i % k],
/// and the manifest lists every policy id joined by '+'.
DatasetManifest record(const ChallengeConfig& config, std::span<Policy* const> policies, int n_episodes,
                       const std::filesystem::path& dir, const RecordOptions& options = {});

struct Transition {
  std::span<const double> observation;
  std::span<const double> action;
  double reward = 0.0;
  std::span<const double> next_observation;
  double discount = 1.0;
};

/// Immutable loaded dataset.
class Dataset {
 public:
  Dataset(DatasetManifest manifest, std::vector<EpisodeRecord> episodes);

  const DatasetManifest& manifest() const { return manifest_; }
  const std::vector<EpisodeRecord>& episodes() const { return episodes_; }

  /// Sum over episodes of (steps - 1).
  std::size_t num_transitions() const { return index_.size(); }
  /// Transition i in episode-major order.
  Transition transition(std::size_t i) const;
  /// A permutation of [0, num_transitions) fixed by `seed`.
  std::vector<std::size_t> shuffled_order(std::uint64_t seed) const;

  /// Mean logged episode return.
  double mean_return() const;

 private:
  DatasetManifest manifest_;
  std::vector<EpisodeRecord> episodes_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> index_;  // (episode, step)
};

/// Reads a dataset directory; a checksum mismatch raises DatasetError.
Dataset load(const std::filesystem::path& dir);
/// Checks the manifest checksum without parsing the episodes.
bool verify(const std::filesystem::path& dir, std::string* detail = nullptr);

/// Fits a linear tanh policy to the logged (observation, action) pairs.
LinearPolicy bc_train(const Dataset& dataset, std::string* warning = nullptr);

/// Multi-objective return vector from a logged episode.
std::vector<double> multiobj_return_vector(const EpisodeRecord& record);

inline constexpr double kMinBehaviorReturn = 300.0;

struct ReferenceDatasetsOptions {
  std::uint64_t seed = 0;
  std::uint64_t noise_seed = 0;
  int quality_episodes = 20;  // episodes used to score the behaviour policy
};

/// Writes `<root>/nochallenge_<tier>` for the requested tier (every tier when
/// `tier` is absent) and, when `combined` is set, `<root>/<combined>_large`
/// rolled out with `combined_behavior`, which must accept the combined
/// environment's observations. Refuses when `behavior` averages below
/// kMinBehaviorReturn on the no-challenge task.
std::vector<DatasetManifest> generate_reference_datasets(Policy& behavior, const std::filesystem::path& root,
                                                         std::optional<DatasetTier> tier,
                                                         std::optional<CombinedTier> combined = std::nullopt,
                                                         Policy* combined_behavior = nullptr,
                                                         const ReferenceDatasetsOptions& options = {});

/// Replays the logged actions of `record` in build_env(config, noise_seed)
/// with the logged perturbed parameter value applied directly, returning the
/// episode's online violation counts.
std::vector<std::int64_t> replay_violations(const ChallengeConfig& config, const EpisodeRecord& record);

}  // namespace rwrl
