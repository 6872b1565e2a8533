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

#include "parce/metrics/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "parce/error.h"

namespace parce::metrics {
namespace {

void CheckSample(std::span<const double> s, const char* what) {
  Require(!s.empty(), ErrorKind::kInvalidArgument,
          std::string(what) + " sample is empty");
  for (double v : s) {
    Require(!std::isnan(v), ErrorKind::kInvalidArgument,
            std::string(what) + " sample contains NaN");
  }
}

std::vector<double> Sorted(std::span<const double> s) {
  std::vector<double> v(s.begin(), s.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

double KsStatistic(std::span<const double> a, std::span<const double> b) {
  CheckSample(a, "first");
  CheckSample(b, "second");
  const std::vector<double> x = Sorted(a);
  const std::vector<double> y = Sorted(b);
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  size_t i = 0, j = 0;
  double best = 0.0;
  // Advance past every copy of the next breakpoint before comparing.
  while (i < x.size() || j < y.size()) {
    double t;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) {
      t = x[i];
    } else {
      t = y[j];
    }
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    best = std::max(best, std::fabs(static_cast<double>(i) / n -
                                    static_cast<double>(j) / m));
  }
  return best;
}

double Auroc(std::span<const double> negatives,
             std::span<const double> positives) {
  CheckSample(negatives, "negative");
  CheckSample(positives, "positive");
  struct Tagged {
    double score;
    bool negative;
  };
  std::vector<Tagged> all;
  all.reserve(negatives.size() + positives.size());
  for (double v : negatives) all.push_back({v, true});
  for (double v : positives) all.push_back({v, false});
  std::sort(all.begin(), all.end(),
            [](const Tagged& l, const Tagged& r) { return l.score < r.score; });
  // Twice the midrank sum of the negatives keeps the arithmetic integral.
  int64_t twice_rank_sum = 0;
  for (size_t i = 0; i < all.size();) {
    size_t j = i;
    while (j < all.size() && all[j].score == all[i].score) ++j;
    const int64_t twice_mid = static_cast<int64_t>(i + 1 + j);  // 2 * avg rank
    for (size_t q = i; q < j; ++q) {
      if (all[q].negative) twice_rank_sum += twice_mid;
    }
    i = j;
  }
  const int64_t n = static_cast<int64_t>(negatives.size());
  const int64_t m = static_cast<int64_t>(positives.size());
  // 2U = 2R - n(n+1); AUROC = U / (n m).
  const int64_t twice_u = twice_rank_sum - n * (n + 1);
  return static_cast<double>(twice_u) / (2.0 * static_cast<double>(n * m));
}

double FprAt95Tpr(std::span<const double> negatives,
                  std::span<const double> positives) {
  CheckSample(negatives, "negative");
  CheckSample(positives, "positive");
  const std::vector<double> pos = Sorted(positives);
  const int64_t m = static_cast<int64_t>(pos.size());
  // Smallest r with r / m >= 0.95, i.e. ceil(19 m / 20).
  const int64_t r = (19 * m + 19) / 20;
  const double t = pos[r - 1];
  int64_t flagged = 0;
  for (double v : negatives) flagged += v <= t;
  return static_cast<double>(flagged) / static_cast<double>(negatives.size());
}

std::vector<MetricRow> EvaluateGroups(std::span<const ScoredGroup> groups,
                                      std::span<const GroupPair> pairs) {
  auto find = [&](const std::string& name) -> const ScoredGroup& {
    for (const auto& g : groups) {
      if (g.name == name) {
        Require(!g.scores.empty(), ErrorKind::kInvalidArgument,
                "group '" + name + "' is empty");
        return g;
      }
    }
    Fail(ErrorKind::kInvalidArgument, "unknown group '" + name + "'");
  };
  std::vector<MetricRow> rows;
  rows.reserve(pairs.size());
  for (const auto& p : pairs) {
    const ScoredGroup& neg = find(p.first);
    const ScoredGroup& pos = find(p.second);
    rows.push_back({KsStatistic(neg.scores, pos.scores),
                    Auroc(neg.scores, pos.scores),
                    FprAt95Tpr(neg.scores, pos.scores)});
  }
  return rows;
}

std::vector<GroupPair> OverallPairs() {
  return {{"correct", "incorrect"}, {"correct", "ood"}, {"incorrect", "ood"}};
}

std::vector<GroupPair> PerturbationPairs() {
  return {{"acc_high", "acc_medium"},
          {"acc_high", "acc_low"},
          {"acc_medium", "acc_low"}};
}

std::vector<GroupPair> RegionalPairs() {
  return {{"id_all_pixels", "ood_unfamiliar_pixels"},
          {"ood_familiar_pixels", "ood_unfamiliar_pixels"}};
}

double BenchmarkTime(const std::function<void(size_t)>& score_one,
                     size_t count, int repetitions) {
  Require(count > 0, ErrorKind::kInvalidArgument,
          "benchmark needs at least one item");
  Require(repetitions >= 1, ErrorKind::kInvalidArgument,
          "benchmark needs at least one repetition");
  for (size_t i = 0; i < count; ++i) score_one(i);
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  for (int r = 0; r < repetitions; ++r) {
    for (size_t i = 0; i < count; ++i) score_one(i);
  }
  const std::chrono::duration<double> elapsed = Clock::now() - start;
  return elapsed.count() /
         (static_cast<double>(count) * static_cast<double>(repetitions));
}

}  // namespace parce::metrics
