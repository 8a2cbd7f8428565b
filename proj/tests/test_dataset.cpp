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

#include <gtest/gtest.h>

#include <fstream>
#include <iterator>

#include "rwrl/dataset.hpp"
#include "rwrl/errors.hpp"
#include "rwrl/rng.hpp"

namespace rwrl {
namespace {

namespace fs = std::filesystem;

fs::path scratch_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path dir = fs::temp_directory_path() / "rwrl_tests" / (std::string(info->test_suite_name()) + "_" + info->name());
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

LinearPolicy small_policy() { return LinearPolicy(8, 1, {0.3, -0.2, 0.1, 0.05, -0.4, 0.2, 0.1, 0.3, 0.0}); }

ChallengeConfig safe_config() {
  ChallengeConfig c;
  c.safety = {true, 0.3, true};
  c.noise.gaussian = {0.1, 0.1};
  c.perturb.enable = true;
  c.perturb.spec = difficulty_preset("diff2");
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

TEST(Dataset, RecordLoadRoundTripIsBitExact) {
  const fs::path dir = scratch_dir();
  const ChallengeConfig config = safe_config();
  LinearPolicy policy = small_policy();
  const DatasetManifest m = record(config, policy, 3, dir, {5, 6, std::nullopt});
  EXPECT_EQ(m.tier, DatasetTier::kCustom);
  EXPECT_EQ(m.episode_count, 3);
  EXPECT_EQ(m.config_hash, config_hash(config));
  EXPECT_EQ(m.behavior_policy_id, policy.id());

  const Dataset d = load(dir);
  EXPECT_EQ(d.manifest(), m);
  ASSERT_EQ(d.episodes().size(), 3u);

  // Independent rollout of the same (config, seeds) reproduces every field.
  auto env = build_env(config, 6);
  for (int i = 0; i < 3; ++i) {
    const EpisodeRecord& e = d.episodes()[i];
    EXPECT_EQ(e.env_seed, derive_seed(5, {static_cast<std::uint64_t>(i)}));
    std::vector<StepRecord> steps;
    const auto outcome = run_episode(*env, policy, e.env_seed, [&](const StepRecord& s) { steps.push_back(s); });
    ASSERT_EQ(steps.size(), e.steps.size());
    for (std::size_t t = 0; t < steps.size(); ++t) ASSERT_TRUE(steps[t] == e.steps[t]) << "episode " << i << " t " << t;
    EXPECT_EQ(outcome.episode_return, e.episode_return);
    EXPECT_EQ(outcome.violations, e.violations);
    EXPECT_EQ(e.recomputed_violations(), e.violations);
    EXPECT_DOUBLE_EQ(e.recomputed_return(), e.episode_return);
    ASSERT_TRUE(e.perturbed_param_value.has_value());
    EXPECT_GE(*e.perturbed_param_value, 0.7);
    EXPECT_LE(*e.perturbed_param_value, 1.7);
  }

  // Serialising the loaded records again reproduces the file byte for byte.
  std::string again;
  for (const auto& e : d.episodes()) again += to_json(e).dump() + "\n";
  EXPECT_EQ(again, slurp(dir / kEpisodesFile));
}

TEST(Dataset, TransitionsAndShuffling) {
  const fs::path dir = scratch_dir();
  LinearPolicy policy = small_policy();
  ChallengeConfig config = safe_config();
  record(config, policy, 2, dir, {1, 1, std::nullopt});
  const Dataset d = load(dir);
  std::size_t expected = 0;
  for (const auto& e : d.episodes()) expected += e.steps.size() - 1;
  EXPECT_EQ(d.num_transitions(), expected);
  EXPECT_EQ(d.num_transitions(), 2u * 999u);

  const Transition t = d.transition(1000);  // second step of the second episode
  const auto& e = d.episodes()[1];
  EXPECT_EQ(std::vector<double>(t.observation.begin(), t.observation.end()), e.steps[1].observation);
  EXPECT_EQ(std::vector<double>(t.next_observation.begin(), t.next_observation.end()), e.steps[2].observation);
  EXPECT_EQ(t.reward, e.steps[1].reward);

  const auto a = d.shuffled_order(3);
  EXPECT_EQ(a, d.shuffled_order(3));
  EXPECT_NE(a, d.shuffled_order(4));
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) ASSERT_EQ(sorted[i], i);
}

TEST(Dataset, SingleBitCorruptionIsDetected) {
  const fs::path dir = scratch_dir();
  LinearPolicy policy(5, 1, {0.3, -0.2, 0.1, 0.05, -0.4, 0.2});
  record(ChallengeConfig{}, policy, 1, dir, {});
  std::string detail;
  EXPECT_TRUE(verify(dir, &detail)) << detail;

  std::string bytes = slurp(dir / kEpisodesFile);
  for (std::size_t pos : {std::size_t{0}, bytes.size() / 2, bytes.size() - 2}) {
    std::string flipped = bytes;
    flipped[pos] = static_cast<char>(flipped[pos] ^ 0x01);
    std::ofstream(dir / kEpisodesFile, std::ios::binary | std::ios::trunc) << flipped;
    EXPECT_FALSE(verify(dir, &detail));
    EXPECT_THROW(load(dir), DatasetError);
  }
  std::ofstream(dir / kEpisodesFile, std::ios::binary | std::ios::trunc) << bytes;
  EXPECT_TRUE(verify(dir));
}

TEST(Dataset, MissingManifestIsAnError) {
  const fs::path dir = scratch_dir();
  EXPECT_THROW(load(dir), DatasetError);
  EXPECT_FALSE(verify(dir));
}

TEST(Dataset, TierSizes) {
  EXPECT_EQ(tier_episode_count(DatasetTier::kSmall, "cartpole"), 100);
  EXPECT_EQ(tier_episode_count(DatasetTier::kMedium, "cartpole"), 200);
  EXPECT_EQ(tier_episode_count(DatasetTier::kLarge, "cartpole"), 500);
  EXPECT_EQ(tier_for_count(500, "cartpole"), DatasetTier::kLarge);
  EXPECT_EQ(tier_for_count(7, "cartpole"), DatasetTier::kCustom);
  EXPECT_EQ(parse_dataset_tier("medium"), DatasetTier::kMedium);
  EXPECT_THROW(parse_dataset_tier("huge"), ConfigError);

  const fs::path dir = scratch_dir();
  LinearPolicy policy = small_policy();
  EXPECT_THROW(record(ChallengeConfig{}, policy, 3, dir, {0, 0, DatasetTier::kSmall}), ConfigError);
}

TEST(Dataset, BcOnRecordedLinearPolicyReproducesIt) {
  const fs::path dir = scratch_dir();
  LinearPolicy policy(5, 1, {0.3, -0.2, 0.1, 0.05, -0.4, 0.2});
  record(ChallengeConfig{}, policy, 2, dir, {});
  const Dataset d = load(dir);
  LinearPolicy clone = bc_train(d);
  double mse = 0.0;
  std::size_t n = 0;
  for (const auto& e : d.episodes()) {
    for (const auto& s : e.steps) {
      const double diff = clone.act(s.observation)[0] - s.action[0];
      mse += diff * diff;
      ++n;
    }
  }
  EXPECT_LT(mse / static_cast<double>(n), 1e-6);
}

TEST(Dataset, ReplayReproducesOnlineViolations) {
  const fs::path dir = scratch_dir();
  ChallengeConfig config = safe_config();
  LinearPolicy policy = small_policy();
  record(config, policy, 3, dir, {2, 3, std::nullopt});
  const Dataset d = load(dir);
  for (const auto& e : d.episodes()) EXPECT_EQ(replay_violations(config, e), e.violations);
}

TEST(Dataset, PolicyMixtureAlternatesEpisodes) {
  const fs::path dir = scratch_dir();
  LinearPolicy a(5, 1, {0.3, -0.2, 0.1, 0.05, -0.4, 0.2});
  LinearPolicy b(5, 1, {-0.1, 0.4, 0.0, 0.2, 0.1, -0.3});
  Policy* mix[] = {&a, &b};
  const DatasetManifest m = record(ChallengeConfig{}, mix, 4, dir, {});
  EXPECT_EQ(m.behavior_policy_id, a.id() + "+" + b.id());
  const Dataset d = load(dir);
  for (std::size_t i = 0; i < 4; ++i) {
    LinearPolicy& expected = i % 2 == 0 ? a : b;
    const auto& step = d.episodes()[i].steps[0];
    EXPECT_EQ(step.action, expected.act(step.observation)) << i;
  }
}

TEST(Dataset, MultiobjReturnVectorFromLogs) {
  const fs::path dir = scratch_dir();
  ChallengeConfig config = safe_config();
  LinearPolicy policy = small_policy();
  record(config, policy, 1, dir, {});
  const Dataset d = load(dir);
  const auto& e = d.episodes()[0];
  const auto v = multiobj_return_vector(e);
  ASSERT_EQ(v.size(), 4u);
  const auto steps = static_cast<double>(e.steps.size());
  for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(v[c + 1], steps - static_cast<double>(e.violations[c]));
}

}  // namespace
}  // namespace rwrl
