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
#include <optional>
#include <string>
#include <vector>

#include "rwrl/metrics.hpp"
#include "rwrl/policy.hpp"

namespace rwrl {

enum class AgentKind { kRandom, kCem, kBc };

AgentKind parse_agent_kind(std::string_view name);
std::string_view agent_kind_name(AgentKind kind);

struct AgentConfig {
  AgentKind kind = AgentKind::kCem;
  int population = 64;
  double elite_fraction = 0.125;
  int iterations = 300;
  double init_std = 1.0;
  // Added to the refit elite std each iteration and decayed geometrically,
  // which keeps the search distribution from collapsing early.
  double extra_std = 0.2;
  double extra_std_decay = 0.995;
  int episodes_per_candidate = 1;
  // The mean policy is scored on fixed validation seeds every
  // `checkpoint_every` iterations; the best scoring mean is returned.
  int checkpoint_every = 10;
  int validation_episodes = 10;

  int elites() const;
  std::vector<std::string> problems() const;
  void validate() const;
};

struct CemSnapshot {
  int iteration = 0;
  std::vector<double> params;
  double validation_mean = 0.0;
  std::optional<double> eval_mean;  // set by select_behavior_snapshot
};

/// Called once per training episode with its index, seed and outcome; the
/// environment is still positioned at the episode's last step.
using EpisodeCallback = std::function<void(int, std::uint64_t, const EpisodeOutcome&, Environment&)>;

struct CemResult {
  LinearPolicy policy;
  ReturnSeries training;  // one entry per candidate episode
  std::vector<CemSnapshot> snapshots;
  int iterations_run = 0;
  bool failed = false;
  std::string failure;
};

/// Cross-entropy search over a linear tanh policy. `max_episodes` caps the
/// training budget (whole iterations only). Candidates within one iteration
/// share the episode seed.
CemResult cem_train(Environment& env, const AgentConfig& config, std::uint64_t seed,
                    std::optional<int> max_episodes = std::nullopt, const EpisodeCallback& on_episode = {});

/// Least-squares fit of atanh(action) on [observation, 1]. Samples whose
/// action saturates the tanh are skipped. Falls back to ridge (1e-6) when the
/// design is rank deficient and reports that through `warning`.
LinearPolicy bc_fit(std::span<const std::vector<double>> observations, std::span<const std::vector<double>> actions,
                    std::string* warning = nullptr);

/// Earliest snapshot whose evaluation mean lies in [0.70, 0.80] of
/// `converged_mean`, else the one closest to 0.75 of it. Snapshots are scored
/// on `eval_episodes` episodes seeded from `seed` into `eval_mean`.
std::size_t select_behavior_snapshot(std::vector<CemSnapshot>& snapshots, Environment& env, std::size_t obs_dim,
                                     std::size_t action_dim, double converged_mean, std::uint64_t seed,
                                     int eval_episodes = 20);

}  // namespace rwrl
