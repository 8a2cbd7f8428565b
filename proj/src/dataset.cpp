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

#include "rwrl/dataset.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>

#include "rwrl/constraints.hpp"
#include "rwrl/errors.hpp"

namespace rwrl {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("cannot initialise sha256");
    }
  }
  void update(std::string_view bytes) { EVP_DigestUpdate(ctx_.get(), bytes.data(), bytes.size()); }
  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), digest.data(), &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out.push_back(kHex[digest[i] >> 4]);
      out.push_back(kHex[digest[i] & 0xf]);
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

std::string file_sha256(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open '" + path.string() + "'");
  Sha256 sha;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    sha.update(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())));
  }
  return sha.hex();
}

std::string bits_to_string(const std::vector<bool>& bits) {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
  return s;
}

std::vector<bool> bits_from_string(const std::string& s) {
  std::vector<bool> bits(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw DatasetError("constraint_bits must contain only '0' and '1'");
    bits[i] = s[i] == '1';
  }
  return bits;
}

}  // namespace

DatasetTier parse_dataset_tier(std::string_view name) {
  if (name == "small") return DatasetTier::kSmall;
  if (name == "medium") return DatasetTier::kMedium;
  if (name == "large") return DatasetTier::kLarge;
  if (name == "custom") return DatasetTier::kCustom;
  throw ConfigError("unknown dataset tier '" + std::string(name) + "' (expected small|medium|large|custom)");
}

std::string_view dataset_tier_name(DatasetTier tier) {
  switch (tier) {
    case DatasetTier::kSmall:
      return "small";
    case DatasetTier::kMedium:
      return "medium";
    case DatasetTier::kLarge:
      return "large";
    case DatasetTier::kCustom:
      return "custom";
  }
  return "custom";
}

int tier_episode_count(DatasetTier tier, std::string_view env_name) {
  if (env_name != "cartpole") throw ConfigError("no dataset size tiers for environment '" + std::string(env_name) + "'");
  switch (tier) {
    case DatasetTier::kSmall:
      return 100;
    case DatasetTier::kMedium:
      return 200;
    case DatasetTier::kLarge:
      return 500;
    case DatasetTier::kCustom:
      break;
  }
  throw ConfigError("the custom tier has no fixed episode count");
}

DatasetTier tier_for_count(int episodes, std::string_view env_name) {
  if (env_name == "cartpole") {
    for (auto t : {DatasetTier::kSmall, DatasetTier::kMedium, DatasetTier::kLarge}) {
      if (tier_episode_count(t, env_name) == episodes) return t;
    }
  }
  return DatasetTier::kCustom;
}

double EpisodeRecord::recomputed_return() const {
  double total = 0.0;
  for (const auto& s : steps) total += s.reward;
  return total;
}

std::vector<std::int64_t> EpisodeRecord::recomputed_violations() const {
  std::vector<std::int64_t> counts;
  for (const auto& s : steps) {
    if (counts.empty()) counts.assign(s.constraints.size(), 0);
    if (s.constraints.size() != counts.size()) throw DatasetError("constraint width changes within an episode");
    for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += s.constraints[k] ? 0 : 1;
  }
  return counts;
}

bool operator==(const StepRecord& a, const StepRecord& b) {
  return a.observation == b.observation && a.action == b.action && a.executed_action == b.executed_action &&
         a.reward == b.reward && a.base_reward == b.base_reward && a.discount == b.discount &&
         a.constraints == b.constraints;
}

bool operator==(const EpisodeRecord& a, const EpisodeRecord& b) {
  return a.episode_index == b.episode_index && a.env_name == b.env_name && a.env_seed == b.env_seed &&
         a.noise_seed == b.noise_seed && a.config_hash == b.config_hash &&
         a.perturbed_param_value == b.perturbed_param_value && a.steps == b.steps &&
         a.episode_return == b.episode_return && a.violations == b.violations;
}

ojson to_json(const EpisodeRecord& r) {
  ojson obs = ojson::array(), act = ojson::array(), exec = ojson::array(), rew = ojson::array(),
        base = ojson::array(), disc = ojson::array(), bits = ojson::array();
  for (const auto& s : r.steps) {
    obs.push_back(s.observation);
    act.push_back(s.action);
    exec.push_back(s.executed_action);
    rew.push_back(s.reward);
    base.push_back(s.base_reward);
    disc.push_back(s.discount);
    bits.push_back(bits_to_string(s.constraints));
  }
  ojson j;
  j["episode_index"] = r.episode_index;
  j["env_name"] = r.env_name;
  j["env_seed"] = r.env_seed;
  j["noise_seed"] = r.noise_seed;
  j["config_hash"] = r.config_hash;
  j["perturbed_param_value"] = r.perturbed_param_value ? ojson(*r.perturbed_param_value) : ojson(nullptr);
  j["episode_return"] = r.episode_return;
  j["violations"] = r.violations;
  j["steps"] = ojson{{"observations", std::move(obs)},     {"actions", std::move(act)},
                     {"executed_actions", std::move(exec)}, {"rewards", std::move(rew)},
                     {"base_rewards", std::move(base)},     {"discounts", std::move(disc)},
                     {"constraint_bits", std::move(bits)}};
  return j;
}

EpisodeRecord episode_from_json(const ojson& j) {
  try {
    EpisodeRecord r;
    r.episode_index = j.at("episode_index").get<int>();
    r.env_name = j.at("env_name").get<std::string>();
    r.env_seed = j.at("env_seed").get<std::uint64_t>();
    r.noise_seed = j.at("noise_seed").get<std::uint64_t>();
    r.config_hash = j.at("config_hash").get<std::string>();
    if (!j.at("perturbed_param_value").is_null()) r.perturbed_param_value = j.at("perturbed_param_value").get<double>();
    r.episode_return = j.at("episode_return").get<double>();
    r.violations = j.at("violations").get<std::vector<std::int64_t>>();
    const ojson& s = j.at("steps");
    const auto& obs = s.at("observations");
    const std::size_t n = obs.size();
    for (const char* key : {"actions", "executed_actions", "rewards", "base_rewards", "discounts", "constraint_bits"}) {
      if (s.at(key).size() != n) throw DatasetError(std::string("steps.") + key + " length differs from observations");
    }
    r.steps.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
      StepRecord& st = r.steps[t];
      st.observation = obs[t].get<std::vector<double>>();
      st.action = s["actions"][t].get<std::vector<double>>();
      st.executed_action = s["executed_actions"][t].get<std::vector<double>>();
      st.reward = s["rewards"][t].get<double>();
      st.base_reward = s["base_rewards"][t].get<double>();
      st.discount = s["discounts"][t].get<double>();
      st.constraints = bits_from_string(s["constraint_bits"][t].get<std::string>());
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(std::string("malformed episode record: ") + e.what());
  }
}

ojson to_json(const DatasetManifest& m) {
  ojson j;
  j["format_version"] = m.format_version;
  j["tier"] = dataset_tier_name(m.tier);
  j["episode_count"] = m.episode_count;
  j["env_name"] = m.env_name;
  j["behavior_policy_id"] = m.behavior_policy_id;
  j["config_hash"] = m.config_hash;
  j["checksum_algorithm"] = m.checksum_algorithm;
  j["checksum"] = m.checksum;
  j["config"] = ojson::parse(m.config.dump());
  return j;
}

DatasetManifest manifest_from_json(const ojson& j) {
  try {
    DatasetManifest m;
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != 1) throw DatasetError("unsupported dataset format version " + std::to_string(m.format_version));
    m.tier = parse_dataset_tier(j.at("tier").get<std::string>());
    m.episode_count = j.at("episode_count").get<int>();
    m.env_name = j.at("env_name").get<std::string>();
    m.behavior_policy_id = j.at("behavior_policy_id").get<std::string>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.checksum_algorithm = j.at("checksum_algorithm").get<std::string>();
    m.checksum = j.at("checksum").get<std::string>();
    m.config = nlohmann::json::parse(j.at("config").dump());
    if (m.checksum_algorithm != "sha256") throw DatasetError("unsupported checksum algorithm " + m.checksum_algorithm);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DatasetError(std::string("malformed manifest: ") + e.what());
  } catch (const ConfigError& e) {
    throw DatasetError(std::string("malformed manifest: ") + e.what());
  }
}

DatasetManifest record(const ChallengeConfig& config, Policy& policy, int n_episodes, const fs::path& dir,
                       const RecordOptions& options) {
  Policy* one[] = {&policy};
  return record(config, one, n_episodes, dir, options);
}

DatasetManifest record(const ChallengeConfig& config, std::span<Policy* const> policies, int n_episodes,
                       const fs::path& dir, const RecordOptions& options) {
  if (n_episodes < 1) throw ConfigError("a dataset needs at least one episode");
  if (policies.empty()) throw ConfigError("a dataset needs at least one behaviour policy");
  const DatasetTier tier = options.tier.value_or(tier_for_count(n_episodes, config.env_name));
  if (tier != DatasetTier::kCustom && tier_episode_count(tier, config.env_name) != n_episodes) {
    throw ConfigError("tier '" + std::string(dataset_tier_name(tier)) + "' holds " +
                      std::to_string(tier_episode_count(tier, config.env_name)) + " episodes, not " +
                      std::to_string(n_episodes));
  }

  EnvPtr env = build_env(config, options.noise_seed);
  const std::string hash = config_hash(config);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DatasetError("cannot create '" + dir.string() + "': " + ec.message());
  // A stale manifest must never vouch for a half-written episodes file.
  fs::remove(dir / kManifestFile, ec);

  std::ofstream out(dir / kEpisodesFile, std::ios::binary | std::ios::trunc);
  if (!out) throw DatasetError("cannot write '" + (dir / kEpisodesFile).string() + "'");
  Sha256 sha;

  for (int i = 0; i < n_episodes; ++i) {
    EpisodeRecord rec;
    rec.episode_index = i;
    rec.env_name = config.env_name;
    rec.env_seed = derive_seed(options.seed, {static_cast<std::uint64_t>(i)});
    rec.noise_seed = options.noise_seed;
    rec.config_hash = hash;
    rec.steps.reserve(static_cast<std::size_t>(env->episode_steps()));
    Policy& policy = *policies[static_cast<std::size_t>(i) % policies.size()];
    const EpisodeOutcome outcome =
        run_episode(*env, policy, rec.env_seed, [&rec](const StepRecord& s) { rec.steps.push_back(s); });
    rec.episode_return = outcome.episode_return;
    rec.violations = outcome.violations;
    if (config.perturb.enable) rec.perturbed_param_value = env->parameter(config.perturb.spec.param);

    std::string line = to_json(rec).dump();
    line.push_back('\n');
    sha.update(line);
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    if (!out) throw DatasetError("write failed for '" + (dir / kEpisodesFile).string() + "'");
  }
  out.close();
  if (!out) throw DatasetError("closing '" + (dir / kEpisodesFile).string() + "' failed");

  DatasetManifest m;
  m.tier = tier;
  m.episode_count = n_episodes;
  m.env_name = config.env_name;
  for (std::size_t k = 0; k < policies.size(); ++k) {
    m.behavior_policy_id += (k ? "+" : "") + policies[k]->id();
  }
  m.config_hash = hash;
  m.checksum = sha.hex();
  m.config = to_json(config);

  std::ofstream mf(dir / kManifestFile, std::ios::trunc);
  mf << to_json(m).dump(2) << '\n';
  if (!mf) throw DatasetError("cannot write '" + (dir / kManifestFile).string() + "'");
  return m;
}

Dataset::Dataset(DatasetManifest manifest, std::vector<EpisodeRecord> episodes)
    : manifest_(std::move(manifest)), episodes_(std::move(episodes)) {
  for (std::size_t e = 0; e < episodes_.size(); ++e) {
    const auto n = episodes_[e].steps.size();
    for (std::size_t t = 0; t + 1 < n; ++t) index_.emplace_back(e, t);
  }
}

Transition Dataset::transition(std::size_t i) const {
  const auto [e, t] = index_.at(i);
  const auto& steps = episodes_[e].steps;
  return {steps[t].observation, steps[t].action, steps[t].reward, steps[t + 1].observation, steps[t].discount};
}

std::vector<std::size_t> Dataset::shuffled_order(std::uint64_t seed) const {
  std::vector<std::size_t> order(index_.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

double Dataset::mean_return() const {
  if (episodes_.empty()) return std::nan("");
  double total = 0.0;
  for (const auto& e : episodes_) total += e.episode_return;
  return total / static_cast<double>(episodes_.size());
}

namespace {

DatasetManifest read_manifest(const fs::path& dir) {
  std::ifstream in(dir / kManifestFile);
  if (!in) throw DatasetError("no manifest at '" + (dir / kManifestFile).string() + "'");
  try {
    return manifest_from_json(ojson::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw DatasetError(std::string("manifest is not valid JSON: ") + e.what());
  }
}

}  // namespace

bool verify(const fs::path& dir, std::string* detail) {
  try {
    const DatasetManifest m = read_manifest(dir);
    const std::string actual = file_sha256(dir / kEpisodesFile);
    if (actual != m.checksum) {
      if (detail) *detail = "checksum mismatch: manifest " + m.checksum + ", file " + actual;
      return false;
    }
    if (detail) *detail = "ok (" + std::to_string(m.episode_count) + " episodes, sha256 " + actual + ")";
    return true;
  } catch (const DatasetError& e) {
    if (detail) *detail = e.what();
    return false;
  }
}

Dataset load(const fs::path& dir) {
  DatasetManifest m = read_manifest(dir);
  const std::string actual = file_sha256(dir / kEpisodesFile);
  if (actual != m.checksum) {
    throw DatasetError("corrupt dataset '" + dir.string() + "': checksum " + actual + " does not match manifest " +
                       m.checksum);
  }
  std::ifstream in(dir / kEpisodesFile, std::ios::binary);
  std::vector<EpisodeRecord> episodes;
  episodes.reserve(static_cast<std::size_t>(std::max(m.episode_count, 0)));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      episodes.push_back(episode_from_json(ojson::parse(line)));
    } catch (const nlohmann::json::parse_error& e) {
      throw DatasetError("episode line " + std::to_string(episodes.size()) + " is not valid JSON: " + e.what());
    }
    if (episodes.back().config_hash != m.config_hash) {
      throw DatasetError("episode " + std::to_string(episodes.size() - 1) + " was produced by config " +
                         episodes.back().config_hash + ", manifest says " + m.config_hash);
    }
  }
  if (static_cast<int>(episodes.size()) != m.episode_count) {
    throw DatasetError("manifest lists " + std::to_string(m.episode_count) + " episodes, file holds " +
                       std::to_string(episodes.size()));
  }
  return Dataset(std::move(m), std::move(episodes));
}

LinearPolicy bc_train(const Dataset& dataset, std::string* warning) {
  std::vector<std::vector<double>> obs, act;
  for (const auto& e : dataset.episodes()) {
    for (const auto& s : e.steps) {
      obs.push_back(s.observation);
      act.push_back(s.action);
    }
  }
  if (obs.empty()) throw DatasetError("behaviour cloning needs a non-empty dataset");
  return bc_fit(obs, act, warning);
}

std::vector<double> multiobj_return_vector(const EpisodeRecord& record) {
  std::vector<double> base;
  std::vector<std::vector<bool>> bits;
  base.reserve(record.steps.size());
  bits.reserve(record.steps.size());
  for (const auto& s : record.steps) {
    base.push_back(s.base_reward);
    bits.push_back(s.constraints);
  }
  return multiobj_return_vector(base, bits);
}

std::vector<DatasetManifest> generate_reference_datasets(Policy& behavior, const fs::path& root,
                                                         std::optional<DatasetTier> tier,
                                                         std::optional<CombinedTier> combined,
                                                         Policy* combined_behavior,
                                                         const ReferenceDatasetsOptions& options) {
  if (tier == DatasetTier::kCustom) throw ConfigError("reference datasets use the small, medium or large tier");
  if (combined && !combined_behavior) throw ConfigError("a combined dataset needs a behaviour policy for that setting");

  const ChallengeConfig plain;
  {
    EnvPtr env = build_env(plain, options.noise_seed);
    const auto returns = evaluate(behavior, *env, options.quality_episodes, derive_seed(options.seed, {0x9a11}));
    const double m = mean(returns);
    if (!(m >= kMinBehaviorReturn)) {
      throw DatasetError("behaviour policy " + behavior.id() + " averages " + std::to_string(m) + " over " +
                         std::to_string(options.quality_episodes) + " no-challenge episodes; at least " +
                         std::to_string(kMinBehaviorReturn) + " is required");
    }
  }

  std::vector<DatasetManifest> out;
  std::vector<DatasetTier> tiers =
      tier ? std::vector<DatasetTier>{*tier}
           : std::vector<DatasetTier>{DatasetTier::kSmall, DatasetTier::kMedium, DatasetTier::kLarge};
  for (DatasetTier t : tiers) {
    RecordOptions ro{options.seed, options.noise_seed, t};
    out.push_back(record(plain, behavior, tier_episode_count(t, plain.env_name),
                         root / ("nochallenge_" + std::string(dataset_tier_name(t))), ro));
  }
  if (combined) {
    const ChallengeConfig cfg = combined_preset(*combined);
    RecordOptions ro{options.seed, options.noise_seed, DatasetTier::kLarge};
    out.push_back(record(cfg, *combined_behavior, tier_episode_count(DatasetTier::kLarge, cfg.env_name),
                         root / (std::string(tier_name(*combined)) + "_large"), ro));
  }
  return out;
}

std::vector<std::int64_t> replay_violations(const ChallengeConfig& config, const EpisodeRecord& record) {
  ChallengeConfig replay = config;
  replay.perturb.enable = false;
  EnvPtr env = build_env(replay, record.noise_seed);
  if (config.perturb.enable) {
    if (!record.perturbed_param_value) throw DatasetError("record lacks the perturbed parameter value");
    env->set_parameter(config.perturb.spec.param, *record.perturbed_param_value);
  }
  TimeStep ts = env->reset(record.env_seed);
  for (const auto& s : record.steps) {
    if (ts.last()) throw DatasetError("logged episode is longer than the environment episode");
    ts = env->step(s.action);
  }
  return env->episode_violations();
}

}  // namespace rwrl
