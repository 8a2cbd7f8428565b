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

// rwrl: command line front end for experiments, sweeps, presets, datasets
// and metrics. Exit codes: 0 success, 1 validation error, 2 runtime failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "rwrl/dataset.hpp"
#include "rwrl/errors.hpp"
#include "rwrl/experiment.hpp"

namespace {

using namespace rwrl;

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kRuntime = 2;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> episodes;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool out_required) {
  cmd->add_option("--config", f.config, "challenge config (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "run a single seed");
  cmd->add_option("--episodes", f.episodes, "training episode budget")->check(CLI::PositiveNumber);
  auto* out = cmd->add_option("--out", f.out, "output directory");
  if (out_required) out->required();
}

ChallengeConfig resolve(const CommonFlags& f) {
  ChallengeConfig c = f.config.empty() ? ChallengeConfig{} : load_config(f.config);
  if (f.seed) c.seeds = {*f.seed};
  if (f.episodes) c.episodes = *f.episodes;
  c.validate();
  return c;
}

struct AgentFlags {
  std::string kind = "cem";
  int iterations = AgentConfig{}.iterations;
  int eval_episodes = RunOptions{}.final_eval_episodes;
  std::string dataset;
};

void add_agent(CLI::App* cmd, AgentFlags& f) {
  cmd->add_option("--agent", f.kind, "random|cem|bc")->check(CLI::IsMember({"random", "cem", "bc"}));
  cmd->add_option("--iterations", f.iterations, "CEM iteration cap")->check(CLI::PositiveNumber);
  cmd->add_option("--eval-episodes", f.eval_episodes, "final evaluation episodes")->check(CLI::PositiveNumber);
  cmd->add_option("--dataset", f.dataset, "dataset directory for the bc agent");
}

AgentConfig agent_config(const AgentFlags& f) {
  AgentConfig a;
  a.kind = parse_agent_kind(f.kind);
  a.iterations = f.iterations;
  return a;
}

RunOptions run_options(const AgentFlags& a, const CommonFlags& c) {
  RunOptions o;
  if (!c.out.empty()) o.out_dir = c.out;
  o.final_eval_episodes = a.eval_episodes;
  if (!a.dataset.empty()) o.dataset_dir = a.dataset;
  return o;
}

void print_summary(const ExperimentResult& r) {
  std::cout << "config " << r.config_hash << "\n";
  for (const auto& s : r.seeds) {
    std::cout << "  seed " << s.seed << ": ";
    if (s.failed) {
      std::cout << "FAILED (" << s.failure << ")\n";
      continue;
    }
    std::cout << "final " << s.final_mean << " +- " << s.final_sd << ", K " << s.metrics.convergence_episode
              << ", regret " << s.metrics.regret << ", instability " << s.metrics.instability_pct << "%\n";
  }
  std::cout << "mean final return " << r.mean_final << " (sd " << r.sd_final << ")\n";
}

int failed_seeds(const ExperimentResult& r) {
  int n = 0;
  for (const auto& s : r.seeds) n += s.failed ? 1 : 0;
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Real-world RL challenge suite"};
  app.require_subcommand(1);

  CommonFlags run_f;
  AgentFlags run_a;
  auto* run = app.add_subcommand("run", "train and evaluate one config");
  add_common(run, run_f, false);
  add_agent(run, run_a);

  CommonFlags sweep_f;
  AgentFlags sweep_a;
  std::string challenge;
  auto* sweep = app.add_subcommand("sweep", "sweep one challenge over its grid");
  add_common(sweep, sweep_f, true);
  add_agent(sweep, sweep_a);
  sweep->add_option("--challenge", challenge, "challenge axis (e.g. action_delay, safety)")->required();

  CommonFlags preset_f;
  AgentFlags preset_a;
  std::string tier;
  bool preset_run = false;
  auto* preset = app.add_subcommand("preset", "print, or run, a combined-challenge preset");
  preset->add_option("tier", tier, "easy|medium|hard")->required();
  preset->add_flag("--run", preset_run, "train and evaluate the preset");
  add_common(preset, preset_f, false);
  add_agent(preset, preset_a);

  auto* dataset = app.add_subcommand("dataset", "record, load or verify offline datasets");
  dataset->require_subcommand(1);
  CommonFlags rec_f;
  std::string rec_tier, rec_policy;
  std::optional<int> rec_count;
  std::uint64_t noise_seed = 0;
  auto* rec = dataset->add_subcommand("record", "roll out a behaviour policy into a dataset");
  add_common(rec, rec_f, true);
  rec->add_option("--tier", rec_tier, "small|medium|large")->check(CLI::IsMember({"small", "medium", "large"}));
  rec->add_option("--count", rec_count, "episode count (custom tier)")->check(CLI::PositiveNumber);
  rec->add_option("--policy", rec_policy, "policy.json; trains a 75% CEM snapshot when omitted")
      ->check(CLI::ExistingFile);
  rec->add_option("--noise-seed", noise_seed, "seed for the challenge wrappers");
  std::string ds_dir;
  auto* ds_load = dataset->add_subcommand("load", "load a dataset and print its summary");
  ds_load->add_option("dir", ds_dir)->required()->check(CLI::ExistingDirectory);
  auto* ds_verify = dataset->add_subcommand("verify", "check a dataset's checksum");
  ds_verify->add_option("dir", ds_dir)->required()->check(CLI::ExistingDirectory);

  std::string metrics_dir;
  auto* metrics = app.add_subcommand("metrics", "recompute metrics from an experiment's logs");
  metrics->add_option("dir", metrics_dir, "experiment output directory")->required()->check(CLI::ExistingDirectory);

  CommonFlags radar_f;
  AgentFlags radar_a;
  auto* radar = app.add_subcommand("radar", "run the radar sweep and export the summary table");
  add_common(radar, radar_f, true);
  add_agent(radar, radar_a);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*run) {
      const ExperimentResult r = run_experiment(resolve(run_f), agent_config(run_a), run_options(run_a, run_f));
      print_summary(r);
      return failed_seeds(r) == static_cast<int>(r.seeds.size()) ? kRuntime : kOk;
    }
    if (*sweep) {
      const auto points = run_sweep(resolve(sweep_f), sweep_axis(challenge), agent_config(sweep_a),
                                    run_options(sweep_a, sweep_f));
      for (const auto& p : points) {
        std::cout << challenge << " " << p.x << ": " << p.mean << " +- " << p.sd << " (" << p.ok_seeds << " seeds)\n";
      }
      return kOk;
    }
    if (*preset) {
      ChallengeConfig c = combined_preset(tier);
      if (!preset_f.config.empty()) throw ConfigError("preset takes no --config; the tier fixes the challenges");
      if (preset_f.seed) c.seeds = {*preset_f.seed};
      if (preset_f.episodes) c.episodes = *preset_f.episodes;
      if (!preset_run) {
        std::cout << to_json(c).dump(2) << "\n";
        return kOk;
      }
      const ExperimentResult r = run_experiment(c, agent_config(preset_a), run_options(preset_a, preset_f));
      print_summary(r);
      return failed_seeds(r) == static_cast<int>(r.seeds.size()) ? kRuntime : kOk;
    }
    if (*rec) {
      const ChallengeConfig c = resolve(rec_f);
      int count = 0;
      std::optional<DatasetTier> t;
      if (!rec_tier.empty()) {
        t = parse_dataset_tier(rec_tier);
        count = tier_episode_count(*t, c.env_name);
        if (rec_count && *rec_count != count) throw ConfigError("--count disagrees with --tier");
      } else if (rec_count) {
        count = *rec_count;
      } else {
        throw ConfigError("dataset record needs --tier or --count");
      }
      const std::uint64_t seed = c.seeds.front();
      LinearPolicy behavior;
      if (!rec_policy.empty()) {
        std::ifstream in(rec_policy);
        behavior = LinearPolicy::from_json(nlohmann::json::parse(in));
      } else {
        const BehaviorPolicy b = train_behavior_policy(c, AgentConfig{}, seed);
        std::cout << "behaviour snapshot at iteration " << b.snapshot_iteration << ": " << b.snapshot_mean
                  << " (converged " << b.converged_mean << ")\n";
        behavior = b.policy;
      }
      const DatasetManifest m = record(c, behavior, count, rec_f.out, {seed, noise_seed, t});
      std::cout << "wrote " << m.episode_count << " episodes (" << dataset_tier_name(m.tier) << ") to " << rec_f.out
                << ", sha256 " << m.checksum << "\n";
      return kOk;
    }
    if (*ds_load) {
      const Dataset d = load(ds_dir);
      std::cout << "episodes " << d.episodes().size() << "\ntransitions " << d.num_transitions()
                << "\nmean return " << d.mean_return() << "\nbehavior policy " << d.manifest().behavior_policy_id
                << "\nconfig hash " << d.manifest().config_hash << "\n";
      return kOk;
    }
    if (*ds_verify) {
      std::string detail;
      const bool ok = verify(ds_dir, &detail);
      std::cout << detail << "\n";
      return ok ? kOk : kRuntime;
    }
    if (*metrics) {
      const ExperimentResult r = recompute_metrics(metrics_dir);
      print_summary(r);
      return kOk;
    }
    if (*radar) {
      const RadarTable t = run_radar(resolve(radar_f), agent_config(radar_a), run_options(radar_a, radar_f));
      std::cout << t.to_delimited(',');
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kRuntime;
  }
  return kOk;
}
