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

#include "rwrl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rwrl/errors.hpp"

namespace rwrl {

void ReturnSeries::validate() const {
  if (window_size < 2) throw ConfigError("window_size must be >= 2");
  if (returns.size() < static_cast<std::size_t>(window_size)) {
    throw ConfigError("return series has " + std::to_string(returns.size()) + " episodes, fewer than window_size " +
                      std::to_string(window_size));
  }
}

ReferenceStats reference_stats(const ReturnSeries& series, const ReturnSeries* reference) {
  const ReturnSeries& src = reference ? *reference : series;
  src.validate();
  const auto n = static_cast<std::size_t>(src.window_size);
  const auto tail = std::span<const double>(src.returns).last(n);

  double mean = 0.0;
  for (double r : tail) mean += r;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double r : tail) ss += (r - mean) * (r - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const double half_width = 1.96 * sd / std::sqrt(static_cast<double>(n));
  return {mean, mean - half_width, mean + half_width};
}

int convergence_episode(const ReturnSeries& series, double r_star_lower) {
  series.validate();
  const int m = static_cast<int>(series.size());
  const int w = series.window_size;
  // Sliding count of episodes at or above the threshold.
  int above = 0;
  for (int i = 0; i < w; ++i) above += series.returns[i] >= r_star_lower ? 1 : 0;
  for (int k = 0; k + w <= m; ++k) {
    if (2 * above > w) return k;
    if (k + w < m) {
      above -= series.returns[k] >= r_star_lower ? 1 : 0;
      above += series.returns[k + w] >= r_star_lower ? 1 : 0;
    }
  }
  return m - w;
}

double global_normalized_regret(const ReturnSeries& series, int k, double r_star_mean) {
  if (!(r_star_mean > 0.0)) throw ConfigError("regret is undefined for a non-positive reference mean");
  if (k < 0 || static_cast<std::size_t>(k) >= series.size()) throw ContractError("regret: K outside the series");
  double achieved = 0.0;
  for (int i = 0; i <= k; ++i) achieved += series.returns[i];
  const double regret = (static_cast<double>(k) * r_star_mean - achieved) / r_star_mean;
  return std::max(0.0, regret);
}

double post_convergence_instability(const ReturnSeries& series, int k, double r_star_lower) {
  const int m = static_cast<int>(series.size());
  if (k < 0 || k >= m) throw ContractError("instability: K must satisfy 0 <= K < M");
  int below = 0;
  for (int i = k; i < m; ++i) below += series.returns[i] < r_star_lower ? 1 : 0;
  return 100.0 * static_cast<double>(below) / static_cast<double>(m - k);
}

MetricsReport compute_metrics(const ReturnSeries& series, const ReturnSeries* reference) {
  MetricsReport report;
  report.reference = reference_stats(series, reference);
  report.convergence_episode = convergence_episode(series, report.reference.lower);
  report.regret = report.reference.mean > 0.0
                      ? global_normalized_regret(series, report.convergence_episode, report.reference.mean)
                      : std::nan("");
  report.instability_pct = post_convergence_instability(series, report.convergence_episode, report.reference.lower);
  return report;
}

const std::vector<std::string>& radar_challenges() {
  static const std::vector<std::string> kColumns = {
      "action_delay",         "observation_delay", "reward_delay",   "gaussian_action_noise",
      "gaussian_observation_noise", "action_repetition", "stuck_sensor", "dropped_sensor",
      "perturbation",         "high_dimensionality",
  };
  return kColumns;
}

RadarTable radar_summary(const std::map<std::string, std::vector<double>>& results,
                         std::optional<double> no_challenge_mean) {
  if (!no_challenge_mean) throw ConfigError("radar summary needs the no-challenge baseline");
  if (!(*no_challenge_mean > 0.0)) throw ConfigError("radar summary needs a positive no-challenge mean");

  RadarTable table;
  table.rows = {"none", "Diff1", "Diff2", "Diff3"};
  for (const auto& name : radar_challenges()) {
    if (results.contains(name)) table.columns.push_back(name);
  }
  for (const auto& [name, _] : results) {
    if (std::find(table.columns.begin(), table.columns.end(), name) == table.columns.end()) {
      throw ConfigError("radar summary: unknown challenge '" + name + "'");
    }
  }
  table.cells.assign(table.rows.size(), std::vector<double>(table.columns.size(), 1.0));
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    const auto& tiers = results.at(table.columns[c]);
    if (tiers.size() != 3) {
      throw ConfigError("radar summary: challenge '" + table.columns[c] + "' needs exactly 3 difficulty values");
    }
    for (std::size_t r = 0; r < 3; ++r) table.cells[r + 1][c] = tiers[r] / *no_challenge_mean;
  }
  return table;
}

std::string RadarTable::to_delimited(char sep) const {
  std::ostringstream out;
  out.precision(17);
  out << "tier";
  for (const auto& c : columns) out << sep << c;
  out << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out << rows[r];
    for (double v : cells[r]) out << sep << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace rwrl
