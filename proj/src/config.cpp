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

#include "rwrl/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "rwrl/envs.hpp"
#include "rwrl/errors.hpp"

namespace rwrl {

using nlohmann::json;

CombinedTier parse_tier(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "easy") return CombinedTier::kEasy;
  if (lower == "medium") return CombinedTier::kMedium;
  if (lower == "hard") return CombinedTier::kHard;
  throw ConfigError("unknown combined challenge tier '" + std::string(name) + "' (expected easy|medium|hard)");
}

std::string_view tier_name(CombinedTier tier) {
  switch (tier) {
    case CombinedTier::kEasy:
      return "easy";
    case CombinedTier::kMedium:
      return "medium";
    case CombinedTier::kHard:
      return "hard";
  }
  return "easy";
}

namespace {

std::string_view target_name(NoiseTarget t) { return t == NoiseTarget::kActions ? "actions" : "observations"; }
std::string_view mode_name(RepetitionMode m) { return m == RepetitionMode::kFixed ? "fixed" : "probabilistic"; }

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

void hold_problems(const HoldNoiseSpec& s, const std::string& path, std::vector<std::string>& out) {
  if (!in_unit(s.prob)) out.push_back(path + ".prob must be in [0, 1]");
  if (s.steps < 0) out.push_back(path + ".steps must be >= 0");
}

// Walks a JSON object against a fixed key set, recording every problem
// instead of stopping at the first one.
class Reader {
 public:
  Reader(const json& node, std::string path, std::vector<std::string>& problems)
      : node_(node), path_(std::move(path)), problems_(problems) {
    if (!node_.is_object()) problems_.push_back(label("") + " must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!node_.is_object() || !node_.contains(key)) return;
    const json& v = node_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw std::invalid_argument("expected a boolean");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw std::invalid_argument("expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw std::invalid_argument("expected a string");
      }
      out = v.get<T>();
    } catch (const std::exception& e) {
      problems_.push_back(label(key) + ": " + e.what());
    }
  }

  /// Reads a string and maps it through `parse`; parse errors are recorded.
  template <typename T, typename Parse>
  void read_enum(const char* key, T& out, Parse parse) {
    std::string raw;
    bool present = node_.is_object() && node_.contains(key);
    read(key, raw);
    if (!present || !node_.at(key).is_string()) return;
    try {
      out = parse(raw);
    } catch (const std::exception& e) {
      problems_.push_back(label(key) + ": " + e.what());
    }
  }

  void skip(const char* key) { seen_.insert(key); }

  /// Child object reader; absent children read as empty objects.
  Reader child(const char* key) {
    seen_.insert(key);
    static const json kEmpty = json::object();
    const json& sub = node_.is_object() && node_.contains(key) ? node_.at(key) : kEmpty;
    return Reader(sub, label(key), problems_);
  }

  void reject_unknown() const {
    if (!node_.is_object()) return;
    for (const auto& [k, _] : node_.items()) {
      if (!seen_.contains(k)) problems_.push_back("unknown key '" + label(k) + "'");
    }
  }

 private:
  std::string label(const std::string& key) const {
    if (key.empty()) return path_.empty() ? "config" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& node_;
  std::string path_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
};

void read_hold(Reader r, HoldNoiseSpec& s) {
  r.read_enum("target", s.target, [](const std::string& v) {
    if (v == "observations") return NoiseTarget::kObservations;
    if (v == "actions") return NoiseTarget::kActions;
    throw ConfigError("expected 'observations' or 'actions'");
  });
  r.read("prob", s.prob);
  r.read("steps", s.steps);
  r.reject_unknown();
}

void overlay(const json& tree, ChallengeConfig& c, std::vector<std::string>& problems) {
  Reader root(tree, "", problems);
  root.read("env_name", c.env_name);
  root.read("episodes", c.episodes);
  root.read("seeds", c.seeds);
  root.skip("combined_challenge");  // consumed by config_from_json

  Reader delay = root.child("delay");
  delay.read("actions", c.delay.actions);
  delay.read("observations", c.delay.observations);
  delay.read("rewards", c.delay.rewards);
  delay.reject_unknown();

  Reader rep = root.child("repetition");
  rep.read_enum("mode", c.repetition.mode, [](const std::string& v) {
    if (v == "fixed") return RepetitionMode::kFixed;
    if (v == "probabilistic") return RepetitionMode::kProbabilistic;
    throw ConfigError("expected 'fixed' or 'probabilistic'");
  });
  rep.read("k", c.repetition.k);
  rep.read("prob", c.repetition.actions_prob);
  rep.read("steps", c.repetition.actions_steps);
  rep.reject_unknown();

  Reader noise = root.child("noise");
  Reader gauss = noise.child("gaussian");
  gauss.read("actions", c.noise.gaussian.actions_std);
  gauss.read("observations", c.noise.gaussian.observations_std);
  gauss.reject_unknown();
  read_hold(noise.child("stuck"), c.noise.stuck);
  read_hold(noise.child("dropped"), c.noise.dropped);
  noise.reject_unknown();

  Reader dims = root.child("dimensionality");
  dims.read("num_random_state_observations", c.dimensionality.num_random_state_observations);
  dims.reject_unknown();

  Reader perturb = root.child("perturb");
  perturb.read("enable", c.perturb.enable);
  perturb.read("param", c.perturb.spec.param);
  perturb.read_enum("scheduler", c.perturb.spec.scheduler, [](const std::string& v) { return parse_scheduler(v); });
  perturb.read("frequency", c.perturb.spec.frequency);
  perturb.read("start", c.perturb.spec.start);
  perturb.read("min", c.perturb.spec.min);
  perturb.read("max", c.perturb.spec.max);
  perturb.read("std", c.perturb.spec.std);
  perturb.reject_unknown();

  Reader safety = root.child("safety");
  safety.read("enable", c.safety.enable);
  safety.read("coeff", c.safety.safety_coeff);
  safety.read("observed", c.safety.observed);
  safety.reject_unknown();

  Reader multi = root.child("multiobj");
  multi.read("enable", c.multiobj.enable);
  multi.read("coeff", c.multiobj.coeff);
  multi.read("observed", c.multiobj.observed);
  multi.read("reward", c.multiobj.reward_mixing);
  multi.reject_unknown();

  root.reject_unknown();
}

// Leaf paths present in `user` under the challenge sections.
void collect_leaves(const json& node, const std::string& path, std::vector<std::string>& out) {
  if (node.is_object()) {
    for (const auto& [k, v] : node.items()) collect_leaves(v, path + "/" + k, out);
  } else {
    out.push_back(path);
  }
}

}  // namespace

std::vector<std::string> ChallengeConfig::problems() const {
  std::vector<std::string> out;
  EnvPtr base;
  try {
    base = make_base_env(env_name);
  } catch (const ConfigError& e) {
    out.push_back(e.what());
  }
  if (episodes < 1) out.push_back("episodes must be >= 1");
  if (seeds.empty()) out.push_back("seeds must list at least one seed");

  if (delay.actions < 0) out.push_back("delay.actions must be >= 0");
  if (delay.observations < 0) out.push_back("delay.observations must be >= 0");
  if (delay.rewards < 0) out.push_back("delay.rewards must be >= 0");

  if (repetition.k < 1) out.push_back("repetition.k must be >= 1");
  if (!in_unit(repetition.actions_prob)) out.push_back("repetition.prob must be in [0, 1]");
  if (repetition.actions_steps < 1) out.push_back("repetition.steps must be >= 1");

  if (!(noise.gaussian.actions_std >= 0.0)) out.push_back("noise.gaussian.actions must be >= 0");
  if (!(noise.gaussian.observations_std >= 0.0)) out.push_back("noise.gaussian.observations must be >= 0");
  hold_problems(noise.stuck, "noise.stuck", out);
  hold_problems(noise.dropped, "noise.dropped", out);

  if (dimensionality.num_random_state_observations < 0) {
    out.push_back("dimensionality.num_random_state_observations must be >= 0");
  }

  if (perturb.enable) {
    for (auto& p : perturb.spec.problems()) out.push_back(p);
    if (base) {
      const auto names = base->parameter_names();
      if (std::find(names.begin(), names.end(), perturb.spec.param) == names.end()) {
        out.push_back("perturb.param '" + perturb.spec.param + "' is not a parameter of '" + env_name + "'");
      }
    }
  }

  if (!in_unit(safety.safety_coeff)) out.push_back("safety.coeff must be in [0, 1]");
  if (safety.enable && base && base->constraint_catalogue(safety.safety_coeff).empty()) {
    out.push_back("safety.enable: environment '" + env_name + "' registers no constraints");
  }
  if (!in_unit(multiobj.coeff)) out.push_back("multiobj.coeff must be in [0, 1]");
  if (multiobj.enable && !safety.enable) out.push_back("multiobj.enable requires safety.enable");
  return out;
}

void ChallengeConfig::validate() const {
  auto p = problems();
  if (!p.empty()) throw ConfigError(p);
}

ChallengeConfig combined_preset(CombinedTier tier) {
  struct Row {
    int action_delay, observation_delay, reward_delay, repetition;
    double noise_std, hold_prob;
    int hold_steps;
    double perturb_min, perturb_max, perturb_std;
    int extra_dims;
  };
  static constexpr std::array<Row, 3> kRows{{
      {3, 3, 10, 1, 0.1, 0.01, 1, 0.9, 1.1, 0.02, 10},
      {6, 6, 20, 2, 0.3, 0.05, 5, 0.7, 1.7, 0.1, 20},
      {9, 9, 40, 3, 1.0, 0.1, 10, 0.5, 2.3, 0.15, 50},
  }};
  const Row& row = kRows[static_cast<std::size_t>(tier)];

  ChallengeConfig c;
  c.env_name = "cartpole";
  c.combined_challenge = tier;
  c.delay = {row.action_delay, row.observation_delay, row.reward_delay};
  c.repetition.mode = RepetitionMode::kFixed;
  c.repetition.k = row.repetition;
  c.noise.gaussian = {row.noise_std, row.noise_std};
  c.noise.stuck = {NoiseTarget::kObservations, row.hold_prob, row.hold_steps};
  c.noise.dropped = {NoiseTarget::kObservations, row.hold_prob, row.hold_steps};
  c.dimensionality.num_random_state_observations = row.extra_dims;
  c.perturb.enable = true;
  c.perturb.spec.param = "pole_length";
  c.perturb.spec.scheduler = SchedulerKind::kUniform;
  c.perturb.spec.frequency = 1;
  c.perturb.spec.start = 1.0;
  c.perturb.spec.min = row.perturb_min;
  c.perturb.spec.max = row.perturb_max;
  c.perturb.spec.std = row.perturb_std;
  c.safety.enable = false;
  c.multiobj.enable = false;
  return c;
}

ChallengeConfig combined_preset(std::string_view tier) { return combined_preset(parse_tier(tier)); }

json to_json(const ChallengeConfig& c) {
  json j;
  j["env_name"] = c.env_name;
  j["episodes"] = c.episodes;
  j["seeds"] = c.seeds;
  j["combined_challenge"] = c.combined_challenge ? json(tier_name(*c.combined_challenge)) : json(nullptr);
  j["delay"] = {{"actions", c.delay.actions}, {"observations", c.delay.observations}, {"rewards", c.delay.rewards}};
  j["repetition"] = {{"mode", mode_name(c.repetition.mode)},
                     {"k", c.repetition.k},
                     {"prob", c.repetition.actions_prob},
                     {"steps", c.repetition.actions_steps}};
  auto hold = [](const HoldNoiseSpec& s) {
    return json{{"target", target_name(s.target)}, {"prob", s.prob}, {"steps", s.steps}};
  };
  j["noise"] = {{"gaussian",
                 {{"actions", c.noise.gaussian.actions_std}, {"observations", c.noise.gaussian.observations_std}}},
                {"stuck", hold(c.noise.stuck)},
                {"dropped", hold(c.noise.dropped)}};
  j["dimensionality"] = {{"num_random_state_observations", c.dimensionality.num_random_state_observations}};
  const auto& p = c.perturb.spec;
  j["perturb"] = {{"enable", c.perturb.enable}, {"param", p.param},   {"scheduler", scheduler_name(p.scheduler)},
                  {"frequency", p.frequency},   {"start", p.start},   {"min", p.min},
                  {"max", p.max},               {"std", p.std}};
  j["safety"] = {{"enable", c.safety.enable}, {"coeff", c.safety.safety_coeff}, {"observed", c.safety.observed}};
  j["multiobj"] = {{"enable", c.multiobj.enable},
                   {"coeff", c.multiobj.coeff},
                   {"observed", c.multiobj.observed},
                   {"reward", c.multiobj.reward_mixing}};
  return j;
}

ChallengeConfig config_from_json(const json& tree) {
  std::vector<std::string> problems;
  ChallengeConfig c;

  if (tree.is_object() && tree.contains("combined_challenge") && !tree.at("combined_challenge").is_null()) {
    const json& tier = tree.at("combined_challenge");
    if (!tier.is_string()) {
      problems.push_back("combined_challenge: expected a string");
    } else {
      try {
        c = combined_preset(tier.get<std::string>());
      } catch (const ConfigError& e) {
        problems.push_back(std::string("combined_challenge: ") + e.what());
      }
    }
  }

  overlay(tree, c, problems);

  if (c.combined_challenge && tree.is_object()) {
    const json preset = to_json(combined_preset(*c.combined_challenge));
    static constexpr std::array<const char*, 7> kSections = {"delay",  "repetition", "noise",   "dimensionality",
                                                             "perturb", "safety",     "multiobj"};
    for (const char* section : kSections) {
      if (!tree.contains(section)) continue;
      std::vector<std::string> leaves;
      collect_leaves(tree.at(section), std::string("/") + section, leaves);
      for (const auto& leaf : leaves) {
        const json::json_pointer ptr(leaf);
        if (preset.contains(ptr) && preset.at(ptr) != tree.at(ptr)) {
          problems.push_back("'" + leaf.substr(1) + "' conflicts with combined_challenge '" +
                             std::string(tier_name(*c.combined_challenge)) + "' (preset value " +
                             preset.at(ptr).dump() + ")");
        }
      }
    }
  }

  for (auto& p : c.problems()) problems.push_back(std::move(p));
  if (!problems.empty()) throw ConfigError(problems);
  return c;
}

ChallengeConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json tree;
  try {
    tree = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(tree);
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string config_hash(const ChallengeConfig& config) {
  // nlohmann::json objects are key-sorted, so dump() is canonical.
  return sha256_hex(to_json(config).dump()).substr(0, 16);
}

EnvPtr build_env(const ChallengeConfig& config, std::uint64_t seed) {
  config.validate();
  enum Stream : std::uint64_t { kPerturb = 1, kActGauss, kActStuck, kActDropped, kRepeat, kObsGauss, kObsStuck,
                                kObsDropped, kDims };
  auto stream = [seed](Stream s) { return derive_seed(seed, {s}); };
  const auto& n = config.noise;

  EnvPtr env = make_base_env(config.env_name);
  if (config.perturb.enable) env = wrap_perturbation(std::move(env), config.perturb.spec, stream(kPerturb));
  if (config.safety.enable) env = wrap_constraints(std::move(env), config.safety);
  if (config.multiobj.enable) env = wrap_multiobj(std::move(env), config.multiobj);

  if (n.gaussian.actions_std > 0.0) {
    env = wrap_gaussian(std::move(env), {n.gaussian.actions_std, 0.0}, stream(kActGauss));
  }
  if (n.stuck.target == NoiseTarget::kActions && !n.stuck.neutral()) {
    env = wrap_stuck(std::move(env), n.stuck, stream(kActStuck));
  }
  if (n.dropped.target == NoiseTarget::kActions && !n.dropped.neutral()) {
    env = wrap_dropped(std::move(env), n.dropped, stream(kActDropped));
  }
  if (config.delay.actions > 0) env = wrap_action_delay(std::move(env), config.delay.actions);
  if (!config.repetition.neutral()) env = wrap_action_repetition(std::move(env), config.repetition, stream(kRepeat));

  if (n.gaussian.observations_std > 0.0) {
    env = wrap_gaussian(std::move(env), {0.0, n.gaussian.observations_std}, stream(kObsGauss));
  }
  if (n.stuck.target == NoiseTarget::kObservations && !n.stuck.neutral()) {
    env = wrap_stuck(std::move(env), n.stuck, stream(kObsStuck));
  }
  if (n.dropped.target == NoiseTarget::kObservations && !n.dropped.neutral()) {
    env = wrap_dropped(std::move(env), n.dropped, stream(kObsDropped));
  }
  if (config.dimensionality.num_random_state_observations > 0) {
    env = wrap_dimensionality(std::move(env), config.dimensionality, stream(kDims));
  }
  if (config.delay.observations > 0) env = wrap_observation_delay(std::move(env), config.delay.observations);
  if (config.delay.rewards > 0) env = wrap_reward_delay(std::move(env), config.delay.rewards);
  return env;
}

}  // namespace rwrl
