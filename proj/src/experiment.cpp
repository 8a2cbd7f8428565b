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

#include "rwrl/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rwrl/constraints.hpp"
#include "rwrl/dataset.hpp"
#include "rwrl/errors.hpp"

namespace rwrl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum SeedStream : std::uint64_t { kFinalEval = 0xe7a1, kRandomEpisodes, kBehaviorEval };

std::string seed_dir_name(std::uint64_t seed) { return "seed_" + std::to_string(seed); }

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

json to_json(const EpisodeSummary& e) {
  return {{"episode", e.episode},
          {"env_seed", e.env_seed},
          {"return", e.episode_return},
          {"violations", e.violations},
          {"perturbed_value", e.perturbed_value ? json(*e.perturbed_value) : json(nullptr)}};
}

EpisodeSummary summary_from_json(const json& j) {
  EpisodeSummary e;
  e.episode = j.at("episode").get<int>();
  e.env_seed = j.at("env_seed").get<std::uint64_t>();
  e.episode_return = j.at("return").get<double>();
  e.violations = j.at("violations").get<std::vector<std::int64_t>>();
  if (!j.at("perturbed_value").is_null()) e.perturbed_value = j.at("perturbed_value").get<double>();
  return e;
}

/// Final evaluation that also accumulates the multi-objective return vector.
void final_evaluation(Environment& env, Policy& policy, int n, std::uint64_t seed, SeedResult& out,
                      bool constraints_active) {
  std::vector<double> base;
  std::vector<std::vector<bool>> bits;
  std::vector<double> multi_sum;
  for (int i = 0; i < n; ++i) {
    base.clear();
    bits.clear();
    StepObserver observer;
    if (constraints_active) {
      observer = [&](const StepRecord& s) {
        base.push_back(s.base_reward);
        bits.push_back(s.constraints);
      };
    }
    const auto outcome = run_episode(env, policy, derive_seed(seed, {kFinalEval, static_cast<std::uint64_t>(i)}),
                                     observer);
    out.final_returns.push_back(outcome.episode_return);
    if (constraints_active) {
      const auto v = multiobj_return_vector(base, bits);
      if (multi_sum.empty()) multi_sum.assign(v.size(), 0.0);
      for (std::size_t k = 0; k < v.size(); ++k) multi_sum[k] += v[k];
    }
  }
  for (double& v : multi_sum) v /= n;
  out.metrics.multiobj_returns = multi_sum;
  out.final_mean = mean(out.final_returns);
  out.final_sd = sample_sd(out.final_returns);
}

void finalize_metrics(ExperimentResult& result) {
  std::optional<std::size_t> ref;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < result.seeds.size(); ++i) {
    auto& s = result.seeds[i];
    if (s.failed) continue;
    s.training.window_size = std::min<int>(kDefaultWindowSize, static_cast<int>(s.training.size()));
    if (s.training.window_size < 2) {
      s.failed = true;
      s.failure = "fewer than two training episodes; metrics are undefined";
      continue;
    }
    const double m = reference_stats(s.training).mean;
    if (m > best) {
      best = m;
      ref = i;
    }
  }
  result.reference_seed = ref;

  std::vector<double> finals;
  for (auto& s : result.seeds) {
    if (s.failed) continue;
    auto multi = std::move(s.metrics.multiobj_returns);
    ReturnSeries reference = result.seeds[*ref].training;
    reference.window_size = std::min(reference.window_size, static_cast<int>(s.training.size()));
    s.metrics = compute_metrics(s.training, &reference);
    s.metrics.multiobj_returns = std::move(multi);
    std::vector<std::int64_t> totals(result.constraint_names.size(), 0);
    for (const auto& e : s.episodes) {
      for (std::size_t k = 0; k < e.violations.size() && k < totals.size(); ++k) totals[k] += e.violations[k];
    }
    for (std::size_t k = 0; k < totals.size(); ++k) {
      s.metrics.per_constraint_violations[result.constraint_names[k]] = totals[k];
    }
    finals.push_back(s.final_mean);
  }
  result.mean_final = finals.empty() ? std::nan("") : mean(finals);
  result.sd_final = sample_sd(finals);
}

}  // namespace

ExperimentResult run_experiment(const ChallengeConfig& config, const AgentConfig& agent, const RunOptions& options) {
  config.validate();
  agent.validate();
  if (options.final_eval_episodes < 1) throw ConfigError("final_eval_episodes must be >= 1");
  std::optional<Dataset> dataset;
  if (agent.kind == AgentKind::kBc) {
    if (!options.dataset_dir) throw ConfigError("the bc agent needs a dataset directory");
    dataset.emplace(load(*options.dataset_dir));
  }

  ExperimentResult result;
  result.config_hash = config_hash(config);
  const bool constraints_active = config.safety.enable;

  for (std::uint64_t seed : config.seeds) {
    SeedResult sr;
    sr.seed = seed;
    EnvPtr env = build_env(config, seed);
    if (result.constraint_names.empty()) result.constraint_names = env->constraint_names();

    auto log_episode = [&](int index, std::uint64_t ep_seed, const EpisodeOutcome& out, Environment& e) {
      EpisodeSummary s{index, ep_seed, out.episode_return, out.violations, std::nullopt};
      if (config.perturb.enable) s.perturbed_value = e.parameter(config.perturb.spec.param);
      sr.episodes.push_back(std::move(s));
    };
    auto run_fixed = [&](Policy& policy) {
      for (int i = 0; i < config.episodes; ++i) {
        const std::uint64_t ep_seed = derive_seed(seed, {kRandomEpisodes, static_cast<std::uint64_t>(i)});
        const auto out = run_episode(*env, policy, ep_seed);
        sr.training.returns.push_back(out.episode_return);
        log_episode(i, ep_seed, out, *env);
      }
    };

    try {
      switch (agent.kind) {
        case AgentKind::kCem: {
          CemResult cem = cem_train(*env, agent, seed, config.episodes, log_episode);
          sr.training = std::move(cem.training);
          if (cem.failed) {
            sr.failed = true;
            sr.failure = cem.failure;
          } else {
            sr.policy = std::move(cem.policy);
          }
          break;
        }
        case AgentKind::kRandom: {
          RandomPolicy policy(env->action_spec(), seed);
          run_fixed(policy);
          break;
        }
        case AgentKind::kBc: {
          LinearPolicy policy = bc_train(*dataset);
          if (policy.obs_dim() != env->observation_spec().shape()) {
            throw ConfigError("dataset observations have " + std::to_string(policy.obs_dim()) +
                              " components, the configured environment emits " +
                              std::to_string(env->observation_spec().shape()));
          }
          run_fixed(policy);
          sr.policy = std::move(policy);
          break;
        }
      }
      if (!sr.failed) {
        if (sr.policy) {
          final_evaluation(*env, *sr.policy, options.final_eval_episodes, seed, sr, constraints_active);
        } else {
          RandomPolicy policy(env->action_spec(), derive_seed(seed, {kFinalEval}));
          final_evaluation(*env, policy, options.final_eval_episodes, seed, sr, constraints_active);
        }
        if (!std::isfinite(sr.final_mean)) {
          sr.failed = true;
          sr.failure = "non-finite evaluation return";
        }
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      sr.failed = true;
      sr.failure = e.what();
    }
    result.seeds.push_back(std::move(sr));
  }

  finalize_metrics(result);
  if (options.out_dir) write_experiment(result, config, *options.out_dir);
  return result;
}

void write_experiment(const ExperimentResult& result, const ChallengeConfig& config, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());

  {
    std::ofstream cfg(dir / "config.json");
    cfg << to_json(config).dump(2) << '\n';
  }

  std::ofstream csv(dir / "results.csv");
  csv << "config_hash,seed,status,episodes,final_mean,final_sd,ref_mean,ref_lower,ref_upper,convergence_episode,"
         "regret,instability_pct";
  for (const auto& n : result.constraint_names) csv << ",violations_" << n;
  csv << '\n';

  json metrics;
  metrics["config_hash"] = result.config_hash;
  metrics["constraint_names"] = result.constraint_names;
  metrics["reference_seed"] =
      result.reference_seed ? json(result.seeds[*result.reference_seed].seed) : json(nullptr);
  metrics["mean_final"] = result.mean_final;
  metrics["sd_final"] = result.sd_final;
  metrics["seeds"] = json::array();

  for (const auto& s : result.seeds) {
    const auto& m = s.metrics;
    csv << result.config_hash << ',' << s.seed << ',' << (s.failed ? "failed" : "ok") << ',' << s.training.size();
    if (s.failed) {
      for (int i = 0; i < 8; ++i) csv << ',';
      for (std::size_t k = 0; k < result.constraint_names.size(); ++k) csv << ',';
    } else {
      csv << ',' << format_double(s.final_mean) << ',' << format_double(s.final_sd) << ','
          << format_double(m.reference.mean) << ',' << format_double(m.reference.lower) << ','
          << format_double(m.reference.upper) << ',' << m.convergence_episode << ',' << format_double(m.regret) << ','
          << format_double(m.instability_pct);
      for (const auto& n : result.constraint_names) csv << ',' << m.per_constraint_violations.at(n);
    }
    csv << '\n';

    json js{{"seed", s.seed}, {"status", s.failed ? "failed" : "ok"}, {"failure", s.failure}};
    if (!s.failed) {
      js["final_mean"] = s.final_mean;
      js["final_sd"] = s.final_sd;
      js["reference"] = {{"mean", m.reference.mean}, {"lower", m.reference.lower}, {"upper", m.reference.upper}};
      js["convergence_episode"] = m.convergence_episode;
      js["regret"] = std::isfinite(m.regret) ? json(m.regret) : json(nullptr);
      js["instability_pct"] = m.instability_pct;
      js["per_constraint_violations"] = m.per_constraint_violations;
      js["multiobj_returns"] = m.multiobj_returns;
    }
    metrics["seeds"].push_back(js);

    const fs::path sd = dir / seed_dir_name(s.seed);
    fs::create_directories(sd, ec);
    std::ofstream ep(sd / "episodes.jsonl");
    for (const auto& e : s.episodes) ep << to_json(e).dump() << '\n';
    std::ofstream fr(sd / "final_returns.json");
    fr << json(s.final_returns).dump() << '\n';
    if (s.policy) {
      std::ofstream pol(sd / "policy.json");
      pol << s.policy->to_json().dump(2) << '\n';
    }
  }
  std::ofstream mj(dir / "metrics.json");
  mj << metrics.dump(2) << '\n';
  if (!csv || !mj) throw std::runtime_error("failed writing results to '" + dir.string() + "'");
}

ExperimentResult recompute_metrics(const fs::path& dir) {
  std::ifstream cfg_in(dir / "config.json");
  if (!cfg_in) throw ConfigError("no config.json in '" + dir.string() + "'");
  const ChallengeConfig config = config_from_json(json::parse(cfg_in));
  std::ifstream metrics_in(dir / "metrics.json");
  if (!metrics_in) throw ConfigError("no metrics.json in '" + dir.string() + "'");
  const json logged = json::parse(metrics_in);

  ExperimentResult result;
  result.config_hash = config_hash(config);
  result.constraint_names = logged.at("constraint_names").get<std::vector<std::string>>();
  for (const auto& js : logged.at("seeds")) {
    SeedResult s;
    s.seed = js.at("seed").get<std::uint64_t>();
    s.failed = js.at("status").get<std::string>() != "ok";
    s.failure = js.at("failure").get<std::string>();
    const fs::path sd = dir / seed_dir_name(s.seed);
    std::ifstream ep(sd / "episodes.jsonl");
    std::string line;
    while (std::getline(ep, line)) {
      if (line.empty()) continue;
      s.episodes.push_back(summary_from_json(json::parse(line)));
      s.training.returns.push_back(s.episodes.back().episode_return);
    }
    std::ifstream fr(sd / "final_returns.json");
    if (fr) s.final_returns = json::parse(fr).get<std::vector<double>>();
    if (!s.failed) {
      s.final_mean = mean(s.final_returns);
      s.final_sd = sample_sd(s.final_returns);
      if (js.contains("multiobj_returns")) s.metrics.multiobj_returns = js.at("multiobj_returns").get<std::vector<double>>();
    }
    result.seeds.push_back(std::move(s));
  }
  finalize_metrics(result);
  return result;
}

const std::vector<SweepAxis>& sweep_axes() {
  // Stuck/dropped probabilities pair index-wise with the steps grid; the
  // longest duration is reused once the steps grid runs out.
  static const auto hold = [](HoldNoiseSpec& spec, double prob) {
    static const std::vector<std::pair<double, int>> kPairs = {{0.0, 0},  {0.01, 1}, {0.05, 5}, {0.1, 10},
                                                               {0.3, 20}, {0.5, 50}, {0.7, 50}};
    int steps = 50;
    for (const auto& [p, s] : kPairs) {
      if (p == prob) steps = s;
    }
    spec = {NoiseTarget::kObservations, prob, steps};
  };
  static const std::vector<SweepAxis> kAxes = {
      {"action_delay", "delay", {0, 3, 6, 9, 12, 15, 18, 20},
       [](ChallengeConfig& c, double x) { c.delay.actions = static_cast<int>(x); }},
      {"observation_delay", "delay", {0, 3, 6, 9, 12, 15, 18, 20},
       [](ChallengeConfig& c, double x) { c.delay.observations = static_cast<int>(x); }},
      {"reward_delay", "delay", {10, 20, 40, 50, 75, 100},
       [](ChallengeConfig& c, double x) { c.delay.rewards = static_cast<int>(x); }},
      {"gaussian_action_noise", "std", {0.0, 0.1, 0.3, 1.0, 1.3, 2.0, 2.3},
       [](ChallengeConfig& c, double x) { c.noise.gaussian.actions_std = x; }},
      {"gaussian_observation_noise", "std", {0.0, 0.1, 0.3, 1.0, 1.3, 2.0, 2.3},
       [](ChallengeConfig& c, double x) { c.noise.gaussian.observations_std = x; }},
      {"action_repetition", "k", {1, 2, 3, 5, 7, 10, 13, 16, 20},
       [](ChallengeConfig& c, double x) {
         c.repetition.mode = RepetitionMode::kFixed;
         c.repetition.k = static_cast<int>(x);
       }},
      {"stuck_sensor", "prob", {0.0, 0.01, 0.05, 0.1, 0.3, 0.5, 0.7},
       [](ChallengeConfig& c, double x) { hold(c.noise.stuck, x); }},
      {"dropped_sensor", "prob", {0.0, 0.01, 0.05, 0.1, 0.3, 0.5, 0.7},
       [](ChallengeConfig& c, double x) { hold(c.noise.dropped, x); }},
      {"perturbation", "frequency", {1, 2, 5, 10, 50, 100},
       [](ChallengeConfig& c, double x) {
         c.perturb.enable = true;
         c.perturb.spec = difficulty_preset("diff3");
         c.perturb.spec.frequency = static_cast<int>(x);
       }},
      {"high_dimensionality", "extra_dims", {0, 10, 20, 50, 100},
       [](ChallengeConfig& c, double x) { c.dimensionality.num_random_state_observations = static_cast<int>(x); }},
      {"safety", "safety_coeff", {1.0, 0.8, 0.5, 0.2, 0.1},
       [](ChallengeConfig& c, double x) {
         c.safety.enable = true;
         c.safety.safety_coeff = x;
       }},
      {"multiobj", "alpha", {1.0, 0.8, 0.5, 0.2, 0.1, 0.0},
       [](ChallengeConfig& c, double x) {
         c.safety.enable = true;
         c.safety.safety_coeff = 0.5;
         c.multiobj.enable = true;
         c.multiobj.coeff = x;
       }},
  };
  return kAxes;
}

const SweepAxis& sweep_axis(std::string_view challenge) {
  for (const auto& a : sweep_axes()) {
    if (a.challenge == challenge) return a;
  }
  std::string known;
  for (const auto& a : sweep_axes()) known += (known.empty() ? "" : ", ") + a.challenge;
  throw ConfigError("unknown sweep challenge '" + std::string(challenge) + "' (known: " + known + ")");
}

std::vector<SweepPoint> run_sweep(const ChallengeConfig& base, const SweepAxis& axis, const AgentConfig& agent,
                                  const RunOptions& options, std::optional<std::vector<double>> values) {
  const std::vector<double> grid = values.value_or(axis.values);
  std::vector<SweepPoint> points;
  for (double x : grid) {
    ChallengeConfig cfg = base;
    cfg.combined_challenge.reset();
    axis.apply(cfg, x);
    RunOptions cell = options;
    if (options.out_dir) {
      cell.out_dir = *options.out_dir / (axis.challenge + "_" + format_double(x));
    }
    const ExperimentResult r = run_experiment(cfg, agent, cell);
    SweepPoint p{x, r.mean_final, r.sd_final, 0};
    for (const auto& s : r.seeds) p.ok_seeds += s.failed ? 0 : 1;
    points.push_back(p);
  }
  if (options.out_dir) {
    std::ofstream csv(*options.out_dir / ("sweep_" + axis.challenge + ".csv"));
    csv << axis.parameter << ",mean_final_return,sd,ok_seeds\n";
    for (const auto& p : points) {
      csv << format_double(p.x) << ',' << format_double(p.mean) << ',' << format_double(p.sd) << ',' << p.ok_seeds
          << '\n';
    }
  }
  return points;
}

RadarTable run_radar(const ChallengeConfig& base, const AgentConfig& agent, const RunOptions& options) {
  ChallengeConfig plain = base;
  plain.combined_challenge.reset();
  RunOptions cell = options;
  if (options.out_dir) cell.out_dir = *options.out_dir / "none";
  const double baseline = run_experiment(plain, agent, cell).mean_final;

  std::map<std::string, std::vector<double>> results;
  for (const auto& name : radar_challenges()) {
    const SweepAxis& axis = sweep_axis(name);
    const std::vector<double> tiers(axis.values.begin() + 1, axis.values.begin() + 4);
    for (const auto& p : run_sweep(plain, axis, agent, options, tiers)) results[name].push_back(p.mean);
  }
  RadarTable table = radar_summary(results, baseline);
  if (options.out_dir) {
    std::ofstream out(*options.out_dir / "radar.csv");
    out << table.to_delimited(',');
  }
  return table;
}

BehaviorPolicy train_behavior_policy(const ChallengeConfig& config, const AgentConfig& agent, std::uint64_t seed) {
  EnvPtr env = build_env(config, seed);
  CemResult cem = cem_train(*env, agent, seed, config.episodes);
  if (cem.failed) throw std::runtime_error("behaviour policy training failed: " + cem.failure);
  const std::uint64_t eval_seed = derive_seed(seed, {kBehaviorEval});
  const double converged = mean(evaluate(cem.policy, *env, 20, eval_seed));
  const std::size_t obs_dim = env->observation_spec().shape();
  const std::size_t act_dim = env->action_spec().shape();
  const std::size_t idx = select_behavior_snapshot(cem.snapshots, *env, obs_dim, act_dim, converged, eval_seed, 20);
  const CemSnapshot& snap = cem.snapshots[idx];
  return {LinearPolicy(obs_dim, act_dim, snap.params), converged, *snap.eval_mean, snap.iteration};
}

}  // namespace rwrl
