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

#include "rwrl/agents.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rwrl/errors.hpp"

namespace rwrl {

AgentKind parse_agent_kind(std::string_view name) {
  if (name == "random") return AgentKind::kRandom;
  if (name == "cem") return AgentKind::kCem;
  if (name == "bc") return AgentKind::kBc;
  throw ConfigError("unknown agent kind '" + std::string(name) + "' (expected random|cem|bc)");
}

std::string_view agent_kind_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::kRandom:
      return "random";
    case AgentKind::kCem:
      return "cem";
    case AgentKind::kBc:
      return "bc";
  }
  return "cem";
}

int AgentConfig::elites() const {
  return static_cast<int>(std::lround(elite_fraction * static_cast<double>(population)));
}

std::vector<std::string> AgentConfig::problems() const {
  std::vector<std::string> out;
  if (population < 2) out.push_back("agent.population must be >= 2");
  if (!(elite_fraction > 0.0 && elite_fraction < 1.0)) out.push_back("agent.elite_fraction must be in (0, 1)");
  if (population >= 2 && (elites() < 1 || elites() >= population)) {
    out.push_back("agent: population > elites >= 1 is required");
  }
  if (iterations < 1) out.push_back("agent.iterations must be >= 1");
  if (!(init_std > 0.0)) out.push_back("agent.init_std must be > 0");
  if (!(extra_std >= 0.0)) out.push_back("agent.extra_std must be >= 0");
  if (!(extra_std_decay > 0.0 && extra_std_decay <= 1.0)) out.push_back("agent.extra_std_decay must be in (0, 1]");
  if (episodes_per_candidate < 1) out.push_back("agent.episodes_per_candidate must be >= 1");
  if (checkpoint_every < 1) out.push_back("agent.checkpoint_every must be >= 1");
  if (validation_episodes < 1) out.push_back("agent.validation_episodes must be >= 1");
  return out;
}

void AgentConfig::validate() const {
  auto p = problems();
  if (!p.empty()) throw ConfigError(p);
}

namespace {

enum SeedStream : std::uint64_t { kSampling = 1, kEpisodes, kValidation };

double validation_score(Environment& env, LinearPolicy& policy, std::uint64_t seed, int n) {
  double total = 0.0;
  for (int j = 0; j < n; ++j) {
    total += run_episode(env, policy, derive_seed(seed, {kValidation, static_cast<std::uint64_t>(j)})).episode_return;
  }
  return total / n;
}

}  // namespace

CemResult cem_train(Environment& env, const AgentConfig& config, std::uint64_t seed, std::optional<int> max_episodes,
                    const EpisodeCallback& on_episode) {
  config.validate();
  const std::size_t obs_dim = env.observation_spec().shape();
  const std::size_t act_dim = env.action_spec().shape();
  const std::size_t dim = LinearPolicy::num_params(obs_dim, act_dim);
  const int pop = config.population;
  const int elites = config.elites();
  const int per_iteration = pop * config.episodes_per_candidate;

  int iterations = config.iterations;
  if (max_episodes) {
    if (*max_episodes < per_iteration) {
      throw ConfigError("episode budget " + std::to_string(*max_episodes) + " is below one CEM iteration (" +
                        std::to_string(per_iteration) + " episodes)");
    }
    iterations = std::min(iterations, *max_episodes / per_iteration);
  }

  Rng rng(derive_seed(seed, {kSampling}));
  std::normal_distribution<double> normal;
  std::vector<double> mu(dim, 0.0), sd(dim, config.init_std);
  double extra = config.extra_std;

  CemResult result;
  result.training.returns.reserve(static_cast<std::size_t>(iterations * per_iteration));
  double best_score = -std::numeric_limits<double>::infinity();
  std::vector<double> best = mu;

  auto checkpoint = [&](int iteration) {
    LinearPolicy candidate(obs_dim, act_dim, mu);
    const double score = validation_score(env, candidate, seed, config.validation_episodes);
    result.snapshots.push_back({iteration, mu, score, std::nullopt});
    if (score > best_score) {
      best_score = score;
      best = mu;
    }
  };
  checkpoint(0);

  std::vector<std::vector<double>> candidates(pop, std::vector<double>(dim));
  std::vector<double> scores(pop);
  std::vector<int> order(pop);
  int episode_index = 0;

  for (int it = 0; it < iterations; ++it) {
    for (int k = 0; k < pop; ++k) {
      for (std::size_t d = 0; d < dim; ++d) candidates[k][d] = mu[d] + sd[d] * normal(rng);
    }
    for (int e = 0; e < config.episodes_per_candidate; ++e) {
      // Common random numbers: every candidate faces the same episode.
      const std::uint64_t ep_seed = derive_seed(seed, {kEpisodes, static_cast<std::uint64_t>(it),
                                                       static_cast<std::uint64_t>(e)});
      for (int k = 0; k < pop; ++k) {
        LinearPolicy policy(obs_dim, act_dim, candidates[k]);
        EpisodeOutcome out = run_episode(env, policy, ep_seed);
        result.training.returns.push_back(out.episode_return);
        if (on_episode) on_episode(episode_index, ep_seed, out, env);
        ++episode_index;
        scores[k] = e == 0 ? out.episode_return : scores[k] + out.episode_return;
      }
    }

    std::iota(order.begin(), order.end(), 0);
    const auto valid_end = std::partition(order.begin(), order.end(), [&](int k) { return std::isfinite(scores[k]); });
    const int n_valid = static_cast<int>(valid_end - order.begin());
    if (n_valid == 0) {
      result.failed = true;
      result.failure = "every candidate return was non-finite at iteration " + std::to_string(it);
      break;
    }
    const int n_elite = std::min(elites, n_valid);
    std::partial_sort(order.begin(), order.begin() + n_elite, valid_end,
                      [&](int a, int b) { return scores[a] > scores[b]; });

    for (std::size_t d = 0; d < dim; ++d) {
      double m = 0.0;
      for (int e = 0; e < n_elite; ++e) m += candidates[order[e]][d];
      m /= n_elite;
      double v = 0.0;
      for (int e = 0; e < n_elite; ++e) v += (candidates[order[e]][d] - m) * (candidates[order[e]][d] - m);
      mu[d] = m;
      sd[d] = std::sqrt(v / n_elite) + extra;
    }
    extra *= config.extra_std_decay;
    result.iterations_run = it + 1;

    if (!std::all_of(mu.begin(), mu.end(), [](double v) { return std::isfinite(v); })) {
      result.failed = true;
      result.failure = "policy parameters diverged at iteration " + std::to_string(it);
      break;
    }
    if ((it + 1) % config.checkpoint_every == 0 || it + 1 == iterations) checkpoint(it + 1);
  }

  result.policy = LinearPolicy(obs_dim, act_dim, best);
  return result;
}

LinearPolicy bc_fit(std::span<const std::vector<double>> observations, std::span<const std::vector<double>> actions,
                    std::string* warning) {
  if (observations.size() != actions.size()) throw ContractError("bc_fit: observation/action count mismatch");
  if (observations.empty()) throw DatasetError("behaviour cloning needs a non-empty dataset");
  const std::size_t obs_dim = observations.front().size();
  const std::size_t act_dim = actions.front().size();
  constexpr double kSaturation = 1.0 - 1e-6;

  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (observations[i].size() != obs_dim || actions[i].size() != act_dim) {
      throw DatasetError("bc_fit: inconsistent observation or action width at sample " + std::to_string(i));
    }
    if (std::all_of(actions[i].begin(), actions[i].end(), [](double a) { return std::abs(a) < kSaturation; })) {
      rows.push_back(i);
    }
  }
  if (rows.empty()) throw DatasetError("behaviour cloning: every logged action saturates the tanh");

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto cols = static_cast<Eigen::Index>(obs_dim + 1);
  Eigen::MatrixXd x(n, cols);
  Eigen::MatrixXd y(n, static_cast<Eigen::Index>(act_dim));
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& o = observations[rows[r]];
    const auto& a = actions[rows[r]];
    for (std::size_t c = 0; c < obs_dim; ++c) x(r, c) = o[c];
    x(r, cols - 1) = 1.0;
    for (std::size_t c = 0; c < act_dim; ++c) y(r, c) = std::atanh(a[c]);
  }

  Eigen::MatrixXd coef;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  if (qr.rank() == cols) {
    coef = qr.solve(y);
  } else {
    constexpr double kRidge = 1e-6;
    if (warning) {
      *warning = "design matrix rank " + std::to_string(qr.rank()) + " < " + std::to_string(cols) +
                 "; using ridge regression with lambda 1e-6";
    }
    Eigen::MatrixXd gram = x.transpose() * x;
    gram.diagonal().array() += kRidge;
    coef = gram.ldlt().solve(x.transpose() * y);
  }

  std::vector<double> params(LinearPolicy::num_params(obs_dim, act_dim));
  for (std::size_t a = 0; a < act_dim; ++a) {
    for (Eigen::Index c = 0; c < cols; ++c) params[a * (obs_dim + 1) + c] = coef(c, a);
  }
  return LinearPolicy(obs_dim, act_dim, std::move(params));
}

std::size_t select_behavior_snapshot(std::vector<CemSnapshot>& snapshots, Environment& env, std::size_t obs_dim,
                                     std::size_t action_dim, double converged_mean, std::uint64_t seed,
                                     int eval_episodes) {
  if (snapshots.empty()) throw ContractError("no CEM snapshots to choose a behaviour policy from");
  std::optional<std::size_t> in_band;
  std::size_t closest = 0;
  double closest_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    LinearPolicy p(obs_dim, action_dim, snapshots[i].params);
    const auto returns = evaluate(p, env, eval_episodes, seed);
    const double m = mean(returns);
    snapshots[i].eval_mean = m;
    const double ratio = m / converged_mean;
    if (!in_band && ratio >= 0.70 && ratio <= 0.80) in_band = i;
    if (std::abs(ratio - 0.75) < closest_gap) {
      closest_gap = std::abs(ratio - 0.75);
      closest = i;
    }
  }
  return in_band.value_or(closest);
}

}  // namespace rwrl
