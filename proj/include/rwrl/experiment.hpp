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
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rwrl/agents.hpp"
#include "rwrl/config.hpp"
#include "rwrl/metrics.hpp"

namespace rwrl {

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // nothing is written when empty
  int final_eval_episodes = 100;
  // BC agents clone this dataset; ignored otherwise.
  std::optional<std::filesystem::path> dataset_dir;
};

/// Per training episode summary, as logged to seed_<s>/episodes.jsonl.
struct EpisodeSummary {
  int episode = 0;
  std::uint64_t env_seed = 0;
  double episode_return = 0.0;
  std::vector<std::int64_t> violations;
  std::optional<double> perturbed_value;
};

struct SeedResult {
  std::uint64_t seed = 0;
  bool failed = false;
  std::string failure;
  ReturnSeries training;
  std::vector<EpisodeSummary> episodes;
  std::vector<double> final_returns;  // evaluation of the returned policy
  double final_mean = 0.0;
  double final_sd = 0.0;
  MetricsReport metrics;
  std::optional<LinearPolicy> policy;
};

struct ExperimentResult {
  std::string config_hash;
  std::vector<std::string> constraint_names;
  std::vector<SeedResult> seeds;
  std::optional<std::size_t> reference_seed;  // index into seeds
  double mean_final = 0.0;                     // across successful seeds
  double sd_final = 0.0;
};

/// Trains (or evaluates) one agent per seed in build_env(config, seed) and
/// computes metrics against the seed with the best final training window.
/// A seed whose agent diverges is marked failed; the others still run.
ExperimentResult run_experiment(const ChallengeConfig& config, const AgentConfig& agent, const RunOptions& options);

/// Writes results.csv, metrics.json, config.json and per-seed logs.
void write_experiment(const ExperimentResult& result, const ChallengeConfig& config,
                      const std::filesystem::path& dir);

/// Recomputes the metrics of a written experiment from its episode logs.
ExperimentResult recompute_metrics(const std::filesystem::path& dir);

struct SweepAxis {
  std::string challenge;  // radar column name, or "safety" / "multiobj"
  std::string parameter;  // label of the x value
  std::vector<double> values;
  std::function<void(ChallengeConfig&, double)> apply;
};

/// Sweep grids, one per challenge, in radar column order followed by the
/// safety and multi-objective axes.
const std::vector<SweepAxis>& sweep_axes();
const SweepAxis& sweep_axis(std::string_view challenge);

struct SweepPoint {
  double x = 0.0;
  double mean = 0.0;  // mean over seeds of the final evaluation mean
  double sd = 0.0;
  int ok_seeds = 0;
};

/// Runs `base` with every value of the axis; `values` overrides the grid.
/// Writes sweep_<challenge>.csv (x, mean, sd, ok_seeds) to options.out_dir.
std::vector<SweepPoint> run_sweep(const ChallengeConfig& base, const SweepAxis& axis, const AgentConfig& agent,
                                  const RunOptions& options, std::optional<std::vector<double>> values = {});

/// Runs the no-challenge baseline and the second to fourth grid values of
/// every radar challenge, returning the normalised table.
RadarTable run_radar(const ChallengeConfig& base, const AgentConfig& agent, const RunOptions& options);

struct BehaviorPolicy {
  LinearPolicy policy;
  double converged_mean = 0.0;
  double snapshot_mean = 0.0;
  int snapshot_iteration = 0;
};

/// Trains CEM in build_env(config, seed) and returns the snapshot nearest to
/// three quarters of the converged performance.
BehaviorPolicy train_behavior_policy(const ChallengeConfig& config, const AgentConfig& agent, std::uint64_t seed);

}  // namespace rwrl
