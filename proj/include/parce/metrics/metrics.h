// Copyright 2026 The PaRCE Toolkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Separation metrics between two groups of confidence scores.
//
// Orientation: the first group ("negatives") is expected to score higher
// than the second ("positives"); a sample is flagged positive when its
// score is at or below a threshold.

#ifndef PARCE_METRICS_METRICS_H_
#define PARCE_METRICS_METRICS_H_

#include <chrono>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace parce::metrics {

// sup_x |F_a(x) - F_b(x)| over all breakpoints. Throws kInvalidArgument on
// an empty sample.
double KsStatistic(std::span<const double> a, std::span<const double> b);

// P(neg > pos) + 0.5 P(neg == pos), via midranks.
double Auroc(std::span<const double> negatives,
             std::span<const double> positives);

// False-positive rate at the smallest threshold t (over observed scores and
// +inf) for which at least 95% of positives satisfy score <= t.
double FprAt95Tpr(std::span<const double> negatives,
                  std::span<const double> positives);

struct ScoredGroup {
  std::string name;
  std::vector<double> scores;
};

// Second element is the positive group.
struct GroupPair {
  std::string first;
  std::string second;

  bool operator==(const GroupPair&) const = default;
};

struct MetricRow {
  double dist = 0.0;
  double auroc = 0.0;
  double fpr95 = 0.0;
};

// One row per pair, in pair order. Throws kInvalidArgument when a pair
// names a missing or empty group.
std::vector<MetricRow> EvaluateGroups(std::span<const ScoredGroup> groups,
                                      std::span<const GroupPair> pairs);

// Standard comparison pairs of the three evaluations.
std::vector<GroupPair> OverallPairs();      // correct / incorrect / ood
std::vector<GroupPair> PerturbationPairs();  // acc_high / medium / low
std::vector<GroupPair> RegionalPairs();      // pixel groups

// Mean wall-clock seconds per item of `score_one(i)` for i in [0, count),
// averaged over `repetitions` passes after one untimed warm-up pass.
// Throws kInvalidArgument when count or repetitions is zero.
double BenchmarkTime(const std::function<void(size_t)>& score_one,
                     size_t count, int repetitions);

}  // namespace parce::metrics

#endif  // PARCE_METRICS_METRICS_H_
