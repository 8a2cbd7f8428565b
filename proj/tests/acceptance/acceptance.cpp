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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails. `--only 3,5` runs a subset.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "rwrl/config.hpp"
#include "rwrl/constraints.hpp"
#include "rwrl/dataset.hpp"
#include "rwrl/delay.hpp"
#include "rwrl/envs.hpp"
#include "rwrl/experiment.hpp"
#include "rwrl/metrics.hpp"
#include "rwrl/noise.hpp"
#include "rwrl/perturb.hpp"

namespace fs = std::filesystem;
using namespace rwrl;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Accumulates sub-check failures into one verdict.
class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (!failures_.empty()) failures_ += "; ";
      failures_ += what;
    }
  }
  Verdict done(const std::string& summary) const {
    return {pass_, pass_ ? summary : summary + " | failed: " + failures_};
  }

 private:
  bool pass_ = true;
  std::string failures_;
};

std::string fmt(double v, int precision = 1) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

// Fields of a time step the agent and the reward consumer see.
bool same_visible(const TimeStep& a, const TimeStep& b) {
  return a.kind == b.kind && a.reward == b.reward && a.base_reward == b.base_reward && a.discount == b.discount &&
         a.observation == b.observation;
}

// ---------------------------------------------------------------------------
// 1. Neutral wrappers are the identity.

Verdict identity_suite() {
  using Factory = std::function<EnvPtr()>;
  auto base = [] { return std::make_unique<CartpoleEnv>(); };
  PerturbSpec constant;  // pole_length held at its default 1.0
  constant.scheduler = SchedulerKind::kConstant;
  RepetitionSpec rep_fixed;
  RepetitionSpec rep_prob{RepetitionMode::kProbabilistic, 1, 0.0, 5};
  const std::vector<std::pair<std::string, Factory>> full = {
      {"action_delay", [&] { return wrap_action_delay(base(), 0); }},
      {"observation_delay", [&] { return wrap_observation_delay(base(), 0); }},
      {"reward_delay", [&] { return wrap_reward_delay(base(), 0); }},
      {"repetition_fixed", [&] { return wrap_action_repetition(base(), rep_fixed, 1); }},
      {"repetition_prob", [&] { return wrap_action_repetition(base(), rep_prob, 1); }},
      {"gaussian", [&] { return wrap_gaussian(base(), {0.0, 0.0}, 1); }},
      {"stuck", [&] { return wrap_stuck(base(), {NoiseTarget::kObservations, 0.0, 5}, 1); }},
      {"stuck_actions", [&] { return wrap_stuck(base(), {NoiseTarget::kActions, 0.5, 0}, 1); }},
      {"dropped", [&] { return wrap_dropped(base(), {NoiseTarget::kObservations, 0.0, 5}, 1); }},
      {"dimensionality", [&] { return wrap_dimensionality(base(), {0}, 1); }},
      {"perturbation", [&] { return wrap_perturbation(base(), constant, 1); }},
      {"build_env", [&] { return build_env(ChallengeConfig{}, 1); }},
  };
  Checks c;
  int compared = 0;
  for (const auto& [name, make] : full) {
    auto env = make();
    CartpoleEnv plain;
    for (std::uint64_t e = 0; e < 10; ++e) {
      const auto a = testing_oracles::trace(*env, e, 1000 + e);
      const auto b = testing_oracles::trace(plain, e, 1000 + e);
      c.expect(a == b, name + " episode " + std::to_string(e));
      ++compared;
    }
  }
  // Unobserved constraints only add the bit vector; multiobj at alpha 0 with
  // no observation is the identity on top of the constraint wrapper.
  SafetySpec hidden{true, 1.0, false};
  MultiObjSpec alpha0{true, 0.0, false, true};
  for (std::uint64_t e = 0; e < 10; ++e) {
    auto safe = wrap_constraints(base(), hidden);
    auto multi = wrap_multiobj(wrap_constraints(base(), hidden), alpha0);
    CartpoleEnv plain;
    const auto a = testing_oracles::trace(*safe, e, e);
    const auto m = testing_oracles::trace(*multi, e, e);
    const auto b = testing_oracles::trace(plain, e, e);
    bool ok = a.size() == b.size();
    for (std::size_t t = 0; ok && t < a.size(); ++t) ok = same_visible(a[t], b[t]);
    c.expect(ok, "unobserved constraints episode " + std::to_string(e));
    c.expect(m == a, "multiobj alpha 0 episode " + std::to_string(e));
    compared += 2;
  }
  return c.done(std::to_string(compared) + " wrapper-episodes compared exactly");
}

// ---------------------------------------------------------------------------
// 2. Delays measured on the diagnostic env.

Verdict delay_oracle() {
  Checks c;
  std::ostringstream lags;
  for (int n : {0, 3, 6, 9}) {
    auto env = wrap_action_delay(std::make_unique<DiagnosticEnv>(1000, 1.0), n);
    std::mt19937_64 gen(17 + n);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> actions, rewards;
    TimeStep ts = env->reset(0);
    while (!ts.last()) {
      actions.push_back(u(gen));
      ts = env->step(actions.back());
      rewards.push_back(ts.reward);
    }
    const int lag = testing_oracles::cross_correlation_lag(actions, rewards, 30);
    lags << (n ? " " : "") << n << "->" << lag;
    c.expect(lag == n, "action delay " + std::to_string(n) + " measured " + std::to_string(lag));

    // Observation stream against the clean stream shifted by n, with the
    // reset observation repeated in front.
    auto delayed = wrap_observation_delay(std::make_unique<DiagnosticEnv>(200), n);
    DiagnosticEnv clean(200);
    const auto d = testing_oracles::trace(*delayed, 0, 3);
    const auto cl = testing_oracles::trace(clean, 0, 3);
    bool same = d.size() == cl.size();
    for (std::size_t t = 0; same && t < d.size(); ++t) {
      const std::size_t src = t >= static_cast<std::size_t>(n) ? t - n : 0;
      same = d[t].observation == cl[src].observation;
    }
    c.expect(same, "observation delay " + std::to_string(n));
  }
  return c.done("action->reward lags " + lags.str() + "; observation streams shifted exactly");
}

// ---------------------------------------------------------------------------
// 3. Metrics against hand-computed values.

Verdict metrics_oracle() {
  Checks c;
  const double tol = 1e-12;
  const ReturnSeries s{{0, 0, 10, 10, 10, 10}, 2};
  const auto m = compute_metrics(s);
  c.expect(m.convergence_episode == 2, "K=" + std::to_string(m.convergence_episode));
  // Inclusive sum up to K: (2*10 - (0 + 0 + 10)) / 10.
  c.expect(std::abs(m.regret - 1.0) < tol, "regret " + fmt(m.regret, 15));
  c.expect(std::abs(m.instability_pct - 0.0) < tol, "instability " + fmt(m.instability_pct, 15));

  const ReturnSeries fallback{{0, 0, 0, 0, 0, 0}, 2};
  c.expect(convergence_episode(fallback, 10.0) == 4, "fallback K");

  auto instab = [](std::vector<double> post, double thr) {
    return post_convergence_instability({post, 2}, 0, thr);
  };
  c.expect(std::abs(instab({10, 10, 10, 10}, 10) - 0.0) < tol, "instability 0%");
  c.expect(std::abs(instab({10, 10, 5, 10}, 8) - 25.0) < tol, "instability 25%");
  c.expect(std::abs(instab({1, 2, 3, 4}, 8) - 100.0) < tol, "instability 100%");

  const auto ref = reference_stats({{8, 12}, 2});
  const double half = 1.96 * std::sqrt(8.0) / std::sqrt(2.0);
  c.expect(std::abs(ref.mean - 10.0) < tol && std::abs(ref.lower - (10.0 - half)) < tol &&
               std::abs(ref.upper - (10.0 + half)) < tol,
           "reference CI");
  c.expect(global_normalized_regret(s, 0, 10.0) == 0.0, "regret floor at K=0");
  ReturnSeries doubled = s;
  for (double& r : doubled.returns) r *= 2.0;
  c.expect(std::abs(global_normalized_regret(doubled, 2, 20.0) - 1.0) < tol, "regret homogeneity");
  return c.done("K=2, regret=" + fmt(m.regret, 12) + ", instability 0/25/100% to 1e-12");
}

// ---------------------------------------------------------------------------
// 4. Scheduler statistics.

Verdict scheduler_statistics() {
  Checks c;
  const PerturbSpec uniform = difficulty_preset("diff1");
  SchedulerState s = initial_scheduler_state(uniform, 12345);
  double sum = 0.0, lo = 1e9, hi = -1e9;
  for (int i = 0; i < 10000; ++i) {
    s = advance(std::move(s), uniform);
    sum += s.current_value;
    lo = std::min(lo, s.current_value);
    hi = std::max(hi, s.current_value);
  }
  const double mean = sum / 10000.0;
  c.expect(lo >= 0.9 && hi <= 1.1, "uniform range [" + fmt(lo, 4) + ", " + fmt(hi, 4) + "]");
  c.expect(std::abs(mean - 1.0) <= 0.01, "uniform mean " + fmt(mean, 4));

  PerturbSpec cyc = difficulty_preset("diff3");
  cyc.scheduler = SchedulerKind::kCyclicPos;
  s = initial_scheduler_state(cyc, 7);
  int resets = 0;
  for (int i = 0; i < 2000; ++i) {
    const double before = s.current_value;
    s = advance(std::move(s), cyc);
    if (s.current_value < before) {
      ++resets;
      c.expect(s.current_value == cyc.min, "cyclic reset to " + fmt(s.current_value, 17));
    }
  }
  c.expect(resets > 0, "cyclic never wrapped");

  PerturbSpec saw = cyc;
  saw.scheduler = SchedulerKind::kSawWave;
  s = initial_scheduler_state(saw, 7);
  int flips = 0, boundary_hits = 0;
  Direction dir = s.direction;
  for (int i = 0; i < 2000; ++i) {
    s = advance(std::move(s), saw);
    const bool at_max = s.current_value == saw.max, at_min = s.current_value == saw.min;
    if (at_max || at_min) {
      ++boundary_hits;
      c.expect(s.direction == (at_max ? Direction::kDown : Direction::kUp), "saw direction at boundary");
    }
    if (s.direction != dir) {
      ++flips;
      c.expect(at_max || at_min, "saw flipped away from a boundary");
      dir = s.direction;
    }
  }
  c.expect(flips > 2 && flips == boundary_hits, "saw flips " + std::to_string(flips));
  return c.done("uniform diff1 mean " + fmt(mean, 4) + " in [" + fmt(lo, 3) + ", " + fmt(hi, 3) + "], " +
                std::to_string(resets) + " cyclic resets to min, " + std::to_string(flips) + " saw flips");
}

// ---------------------------------------------------------------------------
// 5. Physics.

Verdict physics() {
  Checks c;
  const CartpoleParams p;
  CartpoleState s{0.0, 0.3, std::numbers::pi - 1.0, 0.5};
  const double e0 = cartpole::energy(p, s);
  auto a = s.as_array();
  for (int i = 0; i < 1000; ++i) a = cartpole::rk4_step(p, a, 0.0, p.dt);
  const double drift = std::abs(cartpole::energy(p, CartpoleState::from_array(a)) - e0) / std::abs(e0);
  c.expect(drift < 1e-4, "energy drift " + fmt(drift * 1e6, 3) + "e-6");
  const double ratio = testing_oracles::rk4_error_ratio(p, 2.0, 0.02);
  c.expect(ratio >= 12.0 && ratio <= 20.0, "rk4 ratio " + fmt(ratio, 2));
  std::ostringstream d;
  d << std::scientific << std::setprecision(2) << drift;
  return c.done("relative energy drift " + d.str() + ", dt-halving error ratio " + fmt(ratio, 2));
}

// ---------------------------------------------------------------------------
// Shared CEM runs for criteria 6-8.

constexpr int kFullBudget = 300 * 64;

struct TierRuns {
  std::map<std::string, ExperimentResult> results;

  const ExperimentResult& get(const std::string& tier, std::vector<std::uint64_t> seeds) {
    auto it = results.find(tier);
    if (it != results.end()) return it->second;
    ChallengeConfig c = tier == "none" ? ChallengeConfig{} : combined_preset(tier);
    c.seeds = std::move(seeds);
    c.episodes = kFullBudget;
    RunOptions o;
    o.final_eval_episodes = 100;
    return results.emplace(tier, run_experiment(c, AgentConfig{}, o)).first->second;
  }
};

TierRuns& tier_runs() {
  static TierRuns runs;
  return runs;
}

Verdict learning_sanity() {
  const auto& r = tier_runs().get("none", {0, 1, 2, 3, 4});
  int passing = 0;
  std::ostringstream per_seed;
  for (const auto& s : r.seeds) {
    const double v = s.failed ? std::nan("") : s.final_mean;
    passing += v >= 600.0 ? 1 : 0;
    per_seed << (per_seed.tellp() ? ", " : "") << fmt(v);
  }
  Checks c;
  c.expect(passing >= 3, std::to_string(passing) + "/5 seeds >= 600");
  return c.done(std::to_string(passing) + "/5 seeds >= 600 (" + per_seed.str() + ")");
}

double tier_mean(const ExperimentResult& r, std::size_t n_seeds) {
  std::vector<double> v;
  for (std::size_t i = 0; i < std::min(n_seeds, r.seeds.size()); ++i) {
    if (!r.seeds[i].failed) v.push_back(r.seeds[i].final_mean);
  }
  return v.empty() ? std::nan("") : mean(v);
}

Verdict degradation_trend() {
  auto& runs = tier_runs();
  // The no-challenge row reuses seeds 0-2 of the learning-sanity runs.
  const double none = tier_mean(runs.get("none", {0, 1, 2, 3, 4}), 3);
  const double easy = tier_mean(runs.get("easy", {0, 1, 2}), 3);
  const double medium = tier_mean(runs.get("medium", {0, 1, 2}), 3);
  const double hard = tier_mean(runs.get("hard", {0, 1, 2}), 3);
  Checks c;
  c.expect(none > easy && easy > medium && medium >= hard, "ordering");
  c.expect(none - easy >= 0.1 * none, "none/easy gap " + fmt(none - easy));
  c.expect(easy - medium >= 0.1 * none, "easy/medium gap " + fmt(easy - medium));
  return c.done("none " + fmt(none) + " > easy " + fmt(easy) + " > medium " + fmt(medium) + " >= hard " + fmt(hard) +
                " (10% gap = " + fmt(0.1 * none) + ")");
}

// ---------------------------------------------------------------------------
// 8. Constraint accounting.

LinearPolicy trained_policy() {
  const auto& r = tier_runs().get("none", {0, 1, 2, 3, 4});
  for (const auto& s : r.seeds) {
    if (!s.failed && s.policy) return *s.policy;
  }
  throw std::runtime_error("no trained no-challenge policy available");
}

Verdict constraint_accounting(const fs::path& work) {
  Checks c;
  ChallengeConfig config;
  config.safety = {true, 1.0, false};
  config.seeds = {0};
  LinearPolicy policy = trained_policy();
  const fs::path dir = work / "constraints";
  fs::remove_all(dir);
  record(config, policy, 20, dir, {21, 22, std::nullopt});
  const Dataset d = load(dir);

  std::int64_t online_total = 0;
  for (const auto& e : d.episodes()) {
    c.expect(e.recomputed_violations() == e.violations, "logged bits vs online counts, episode " +
                                                            std::to_string(e.episode_index));
    for (auto v : e.violations) online_total += v;
  }

  // Online experiment counts against counts recomputed from its written logs.
  ChallengeConfig small = config;
  small.episodes = 128;
  small.seeds = {5};
  RunOptions o;
  o.final_eval_episodes = 5;
  o.out_dir = work / "constraints_run";
  fs::remove_all(*o.out_dir);
  const auto online = run_experiment(small, AgentConfig{}, o);
  const auto offline = recompute_metrics(*o.out_dir);
  c.expect(!online.seeds[0].failed &&
               online.seeds[0].metrics.per_constraint_violations == offline.seeds[0].metrics.per_constraint_violations,
           "experiment log recount");

  // The same trajectories replayed under tighter or looser bands.
  std::vector<std::int64_t> totals;
  std::ostringstream shown;
  for (double coeff : {0.1, 0.2, 0.5, 0.8, 1.0}) {
    ChallengeConfig replay = config;
    replay.safety.safety_coeff = coeff;
    std::int64_t total = 0;
    for (const auto& e : d.episodes()) {
      for (auto v : replay_violations(replay, e)) total += v;
    }
    totals.push_back(total);
    shown << (shown.tellp() ? ", " : "") << coeff << ":" << total;
  }
  for (std::size_t i = 1; i < totals.size(); ++i) c.expect(totals[i] <= totals[i - 1], "monotone in safety_coeff");
  c.expect(totals.back() == online_total, "replay at coeff 1.0 reproduces online counts");
  return c.done("logs == online counts on 20 episodes; replayed totals " + shown.str());
}

// ---------------------------------------------------------------------------
// 9. Multi-objective linearity.

Verdict multiobj_linearity() {
  Checks c;
  LinearPolicy policy(8, 1, {0.3, -0.2, 0.8, 0.05, 0.4, 0.2, 0.1, 0.3, 0.1});
  double worst = 0.0;
  for (double alpha : {0.0, 0.1, 0.2, 0.5, 0.8, 1.0}) {
    ChallengeConfig config;
    config.safety = {true, 0.5, true};
    config.multiobj = {true, alpha, false, true};
    auto env = build_env(config, 0);
    for (std::uint64_t e = 0; e < 5; ++e) {
      std::vector<double> base;
      std::vector<std::vector<bool>> bits;
      const auto out = run_episode(*env, policy, e, [&](const StepRecord& s) {
        base.push_back(s.base_reward);
        bits.push_back(s.constraints);
      });
      const double combined = combine_multiobj_returns(multiobj_return_vector(base, bits), alpha);
      worst = std::max(worst, std::abs(out.episode_return - combined));
    }
  }
  c.expect(worst <= 1e-9, "max deviation " + fmt(worst, 12));

  // alpha = 0 against a run with the safety observer only.
  ChallengeConfig safety_only;
  safety_only.safety = {true, 0.5, true};
  ChallengeConfig alpha0 = safety_only;
  alpha0.multiobj = {true, 0.0, false, true};
  auto a = build_env(safety_only, 3);
  auto b = build_env(alpha0, 3);
  bool identical = true;
  for (std::uint64_t e = 0; e < 5; ++e) {
    std::vector<StepRecord> ra, rb;
    run_episode(*a, policy, e, [&](const StepRecord& s) { ra.push_back(s); });
    run_episode(*b, policy, e, [&](const StepRecord& s) { rb.push_back(s); });
    identical = identical && ra.size() == rb.size();
    for (std::size_t t = 0; identical && t < ra.size(); ++t) identical = ra[t] == rb[t];
  }
  c.expect(identical, "alpha 0 differs from safety-only");
  std::ostringstream w;
  w << std::scientific << std::setprecision(1) << worst;
  return c.done("max |mixed - combined| = " + w.str() + " over 6 alphas x 5 episodes; alpha 0 bit-identical");
}

// ---------------------------------------------------------------------------
// 10. Offline round trip and behaviour cloning.

Verdict offline_round_trip(const fs::path& work) {
  Checks c;
  ChallengeConfig config;
  config.seeds = {0};
  config.episodes = kFullBudget;
  const BehaviorPolicy behavior = train_behavior_policy(config, AgentConfig{}, 0);
  LinearPolicy policy = behavior.policy;

  const fs::path dir = work / "nochallenge_large";
  fs::remove_all(dir);
  const DatasetManifest m = record(config, policy, 500, dir, {0, 0, DatasetTier::kLarge});
  const Dataset d = load(dir);
  c.expect(d.manifest() == m, "manifest round trip");
  c.expect(d.episodes().size() == 500 && d.num_transitions() == 500u * 999u, "LARGE size");

  // Re-serialising the loaded records must reproduce the file byte for byte,
  // and an independent rollout must reproduce a sample of episodes exactly.
  std::ifstream in(dir / kEpisodesFile, std::ios::binary);
  std::string line;
  std::size_t i = 0;
  bool bytes_equal = true;
  while (std::getline(in, line)) bytes_equal = bytes_equal && i < d.episodes().size() && to_json(d.episodes()[i++]).dump() == line;
  c.expect(bytes_equal && i == 500, "re-serialised bytes");
  auto env = build_env(config, 0);
  bool rollout_equal = true;
  for (std::size_t e = 0; e < 3; ++e) {
    std::vector<StepRecord> steps;
    run_episode(*env, policy, d.episodes()[e].env_seed, [&](const StepRecord& s) { steps.push_back(s); });
    rollout_equal = rollout_equal && steps.size() == d.episodes()[e].steps.size();
    for (std::size_t t = 0; rollout_equal && t < steps.size(); ++t) rollout_equal = steps[t] == d.episodes()[e].steps[t];
  }
  c.expect(rollout_equal, "independent rollout");

  std::string warning;
  LinearPolicy clone = bc_train(d, &warning);
  auto eval_env = build_env(config, 1);
  const double bc_mean = mean(evaluate(clone, *eval_env, 100, 999));
  const double logged = d.mean_return();
  c.expect(bc_mean >= 0.8 * logged, "BC " + fmt(bc_mean) + " < 0.8 x " + fmt(logged));
  return c.done("500 episodes bit-exact; behaviour snapshot it " + std::to_string(behavior.snapshot_iteration) +
                " (" + fmt(behavior.snapshot_mean) + " of converged " + fmt(behavior.converged_mean) +
                "); BC mean " + fmt(bc_mean) + " vs logged " + fmt(logged) + " (ratio " + fmt(bc_mean / logged, 3) +
                ")");
}

// ---------------------------------------------------------------------------
// 11. Combined presets against the published table.

Verdict preset_fidelity() {
  struct Row {
    const char* tier;
    int delay_a, delay_o, delay_r, repetition;
    double stds, prob;
    int steps;
    double lo, hi, std;
    int dims;
  };
  static constexpr Row kTable[] = {
      {"easy", 3, 3, 10, 1, 0.1, 0.01, 1, 0.9, 1.1, 0.02, 10},
      {"medium", 6, 6, 20, 2, 0.3, 0.05, 5, 0.7, 1.7, 0.1, 20},
      {"hard", 9, 9, 40, 3, 1.0, 0.1, 10, 0.5, 2.3, 0.15, 50},
  };
  Checks c;
  int fields = 0;
  for (const auto& row : kTable) {
    const ChallengeConfig p = combined_preset(row.tier);
    const std::string t = row.tier;
    auto eq = [&](auto got, auto want, const char* field) {
      ++fields;
      c.expect(got == want, t + "." + field);
    };
    eq(p.delay.actions, row.delay_a, "action_delay");
    eq(p.delay.observations, row.delay_o, "observation_delay");
    eq(p.delay.rewards, row.delay_r, "reward_delay");
    eq(p.repetition.mode == RepetitionMode::kFixed, true, "repetition_mode");
    eq(p.repetition.k, row.repetition, "repetition");
    eq(p.noise.gaussian.actions_std, row.stds, "gaussian_actions");
    eq(p.noise.gaussian.observations_std, row.stds, "gaussian_observations");
    eq(p.noise.stuck.prob, row.prob, "stuck_prob");
    eq(p.noise.stuck.steps, row.steps, "stuck_steps");
    eq(p.noise.dropped.prob, row.prob, "dropped_prob");
    eq(p.noise.dropped.steps, row.steps, "dropped_steps");
    eq(p.perturb.enable, true, "perturb_enable");
    eq(p.perturb.spec.param, std::string("pole_length"), "perturb_param");
    eq(p.perturb.spec.min, row.lo, "perturb_min");
    eq(p.perturb.spec.max, row.hi, "perturb_max");
    eq(p.perturb.spec.std, row.std, "perturb_std");
    eq(p.dimensionality.num_random_state_observations, row.dims, "dims");
    eq(p.safety.enable, false, "safety_off");
    eq(p.multiobj.enable, false, "multiobj_off");
  }
  return c.done(std::to_string(fields) + " preset fields match exactly");
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string work_dir = (fs::temp_directory_path() / "rwrl_acceptance").string();
  std::vector<int> only;
  app.add_option("--work-dir", work_dir, "scratch directory for datasets and run logs");
  app.add_option("--only", only, "criterion ids to run")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  const fs::path work(work_dir);
  fs::create_directories(work);

  const std::vector<Criterion> criteria = {
      {1, "identity suite", 10, identity_suite},
      {2, "delay oracle", 5, delay_oracle},
      {3, "metrics oracle", 1, metrics_oracle},
      {4, "scheduler statistics", 5, scheduler_statistics},
      {5, "physics", 5, physics},
      {6, "learning sanity", 20 * 60, learning_sanity},
      {7, "degradation trend", 2 * 3600, degradation_trend},
      {8, "constraint accounting", 5 * 60, [&] { return constraint_accounting(work); }},
      {9, "multi-objective linearity", 60, multiobj_linearity},
      {10, "offline round trip", 10 * 60, [&] { return offline_round_trip(work); }},
      {11, "preset fidelity", 1, preset_fidelity},
  };

  const std::set<int> selected(only.begin(), only.end());
  int failures = 0;
  for (const auto& crit : criteria) {
    if (!selected.empty() && !selected.contains(crit.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = crit.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > crit.budget_s) {
      v.pass = false;
      v.detail += " | runtime " + fmt(secs) + " s exceeds " + fmt(crit.budget_s, 0) + " s";
    }
    failures += v.pass ? 0 : 1;
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << std::setw(2) << crit.id << " " << crit.name << ": " << v.detail
              << " (" << fmt(secs, 2) << " s)" << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
