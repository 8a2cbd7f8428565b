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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rwrl {

inline constexpr int kDefaultWindowSize = 100;

/// Per-episode returns R_0 .. R_{M-1} plus the sliding-window length.
struct ReturnSeries {
  std::vector<double> returns;
  int window_size = kDefaultWindowSize;

  std::size_t size() const { return returns.size(); }
  /// Throws ConfigError unless window_size >= 2 and M >= window_size.
  void validate() const;
};

/// Reference performance: mean of the final window and its 95% interval
/// (normal approximation, mean +- 1.96 sd / sqrt(n), sample sd).
struct ReferenceStats {
  double mean = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct MetricsReport {
  ReferenceStats reference;
  int convergence_episode = 0;  // K
  double regret = 0.0;
  double instability_pct = 0.0;
  std::map<std::string, std::int64_t> per_constraint_violations;
  std::vector<double> multiobj_returns;
};

/// Stats from the final window of `reference` when given, else of `series`.
ReferenceStats reference_stats(const ReturnSeries& series, const ReturnSeries* reference = nullptr);

/// Earliest window start whose episodes are strictly more than half >= lower;
/// M - window_size when no window qualifies.
int convergence_episode(const ReturnSeries& series, double r_star_lower);

/// (K R*_mean - sum_{i=0..K} R_i) / R*_mean, floored at zero.
double global_normalized_regret(const ReturnSeries& series, int k, double r_star_mean);

/// Percentage of episodes i in [K, M) with R_i < lower.
double post_convergence_instability(const ReturnSeries& series, int k, double r_star_lower);

/// Convenience: all of the above in one report.
MetricsReport compute_metrics(const ReturnSeries& series, const ReturnSeries* reference = nullptr);

/// Challenge columns of the radar summary, in sweep-table order.
const std::vector<std::string>& radar_challenges();

struct RadarTable {
  std::vector<std::string> columns;
  std::vector<std::string> rows;           // none, Diff1, Diff2, Diff3
  std::vector<std::vector<double>> cells;  // rows x columns

  /// Delimited text with a header row.
  std::string to_delimited(char sep = ',') const;
};

/// `results[challenge]` holds the mean final return at the Diff1..Diff3
/// settings; every cell is normalised by the no-challenge mean.
RadarTable radar_summary(const std::map<std::string, std::vector<double>>& results,
                         std::optional<double> no_challenge_mean);

}  // namespace rwrl
