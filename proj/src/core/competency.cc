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

#include "parce/core/competency.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "parce/error.h"

namespace parce {

double StdNormalCdf(double x) {
  Require(std::isfinite(x), ErrorKind::kInvalidArgument,
          "StdNormalCdf: input must be finite");
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

ClassLossStats FitLossStats(std::span<const LabeledLoss> observations,
                            const ClassSet& classes) {
  const int k = classes.size();
  // Welford accumulators.
  std::vector<int64_t> count(k, 0);
  std::vector<double> mean(k, 0.0), m2(k, 0.0);
  for (const auto& obs : observations) {
    Require(obs.label >= 0 && obs.label < k, ErrorKind::kInvalidRecord,
            "loss observation label out of range");
    Require(std::isfinite(obs.loss) && obs.loss >= 0.0,
            ErrorKind::kInvalidRecord, "loss must be finite and >= 0");
    const int c = obs.label;
    ++count[c];
    const double delta = obs.loss - mean[c];
    mean[c] += delta / static_cast<double>(count[c]);
    m2[c] += delta * (obs.loss - mean[c]);
  }
  ClassLossStats stats;
  stats.per_class.resize(k);
  for (int c = 0; c < k; ++c) {
    Require(count[c] >= 2, ErrorKind::kInsufficientData,
            "class '" + classes.name(c) + "' has " + std::to_string(count[c]) +
                " holdout samples; at least 2 are required");
    const double var = m2[c] / static_cast<double>(count[c] - 1);
    stats.per_class[c] = {mean[c], std::max(std::sqrt(var), kSigmaFloor),
                          count[c]};
  }
  return stats;
}

ClassLossStats FitClassLossStats(std::span<const SampleRecord> holdout,
                                 const ClassSet& classes) {
  Require(!holdout.empty(), ErrorKind::kInsufficientData,
          "holdout set is empty");
  std::vector<LabeledLoss> obs;
  obs.reserve(holdout.size());
  for (const auto& r : holdout) {
    Require(r.split == Split::kHoldout, ErrorKind::kInvalidRecord,
            "record '" + r.id + "' is not a holdout record");
    Require(r.label.has_value(), ErrorKind::kInvalidRecord,
            "holdout record '" + r.id + "' has no label");
    Require(std::isfinite(r.recon_loss) && r.recon_loss >= 0.0,
            ErrorKind::kInvalidRecord,
            "record '" + r.id + "': recon_loss must be >= 0");
    obs.push_back({*r.label, r.recon_loss});
  }
  return FitLossStats(obs, classes);
}

double ClassIdProbability(double loss, const ClassLossStats::Entry& stats,
                          double z) {
  Require(stats.stddev > 0.0 && std::isfinite(stats.stddev),
          ErrorKind::kInvalidStats, "loss stddev must be positive");
  const double arg = (loss - 2.0 * stats.mean) / stats.stddev - z;
  // 1 - Phi(a) == Phi(-a).
  return 0.5 * std::erfc(arg / std::numbers::sqrt2);
}

double IdProbability(std::span<const double> probs, double loss,
                     const ClassLossStats& stats, double z) {
  const std::vector<double> p = NormalizedProbs(probs);
  Require(static_cast<int>(p.size()) == stats.class_count(),
          ErrorKind::kInvalidRecord,
          "pred_probs length does not match loss statistics");
  double sum = 0.0;
  for (size_t c = 0; c < p.size(); ++c) {
    sum += p[c] * ClassIdProbability(loss, stats.per_class[c], z);
  }
  return std::clamp(sum, 0.0, 1.0);
}

double ImageIdProbability(const SampleRecord& record,
                          const ClassLossStats& stats, double z) {
  return IdProbability(record.pred_probs, record.recon_loss, stats, z);
}

CompetencyScore OverallCompetency(std::span<const double> probs, double loss,
                                  const ClassLossStats& stats, double z) {
  const std::vector<double> p = NormalizedProbs(probs);
  CompetencyScore score;
  score.max_prob = std::min(p[PredictedClass(p)], 1.0);
  score.id_probability = IdProbability(p, loss, stats, z);
  score.value = score.max_prob * score.id_probability;
  return score;
}

CompetencyScore OverallCompetency(const SampleRecord& record,
                                  const ClassLossStats& stats, double z) {
  return OverallCompetency(record.pred_probs, record.recon_loss, stats, z);
}

double Accuracy(std::span<const SampleRecord> records) {
  Require(!records.empty(), ErrorKind::kInsufficientData,
          "accuracy of an empty set is undefined");
  int64_t correct = 0;
  for (const auto& r : records) {
    Require(r.label.has_value(), ErrorKind::kInvalidRecord,
            "record '" + r.id + "' has no label");
    if (IsCorrect(r)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

CalibrationResult FinishCalibration(const CalibrationGrid& grid, double target,
                                    std::vector<double> mean_scores) {
  CalibrationResult result;
  int best = 0;
  double best_residual = std::abs(mean_scores[0] - target);
  for (int i = 1; i < static_cast<int>(mean_scores.size()); ++i) {
    const double r = std::abs(mean_scores[i] - target);
    if (r < best_residual) {
      best = i;
      best_residual = r;
    }
  }
  result.z = grid.at(best);
  result.residual = best_residual;
  result.grid_lo = grid.lo;
  result.grid_hi = grid.hi;
  result.grid_step = grid.step;
  result.implied_percentile = 100.0 * StdNormalCdf(result.z);
  result.accuracy = target;
  result.mean_scores = std::move(mean_scores);
  return result;
}

CalibrationResult CalibrateZ(std::span<const SampleRecord> holdout,
                             const ClassLossStats& stats,
                             const CalibrationGrid& grid) {
  Require(!holdout.empty(), ErrorKind::kInsufficientData,
          "calibration requires a non-empty holdout set");
  const double accuracy = Accuracy(holdout);
  return CalibrateOnGrid(grid, accuracy, [&](double z) {
    double sum = 0.0;
    for (const auto& r : holdout) sum += OverallCompetency(r, stats, z).value;
    return sum / static_cast<double>(holdout.size());
  });
}

}  // namespace parce
