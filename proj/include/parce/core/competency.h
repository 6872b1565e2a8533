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

// The overall PaRCE competency score.
//
// For an image X with softmax output p, reconstruction loss l and per-class
// holdout loss Gaussians (mu_c, sigma_c), the score is
//
//   rho(X) = p[argmax p] * sum_c p[c] * (1 - Phi((l - 2 mu_c) / sigma_c - z))
//
// where z is chosen on the holdout set so that the mean score matches the
// classifier's holdout accuracy. The first factor is the classifier's
// confidence given the input is in-distribution; the sum estimates the
// probability that the input is in-distribution at all.

#ifndef PARCE_CORE_COMPETENCY_H_
#define PARCE_CORE_COMPETENCY_H_

#include <span>
#include <vector>

#include "parce/core/types.h"

namespace parce {

// Standard normal CDF. Throws kInvalidArgument on non-finite input.
double StdNormalCdf(double x);

// One observation for loss-statistics fitting.
struct LabeledLoss {
  int label = 0;
  double loss = 0.0;
};

// Per-class sample mean and (n-1) standard deviation, with the standard
// deviation clamped below at kSigmaFloor. Every class needs at least two
// observations.
ClassLossStats FitLossStats(std::span<const LabeledLoss> observations,
                            const ClassSet& classes);

// Fits recon_loss statistics on holdout records grouped by ground-truth
// label.
ClassLossStats FitClassLossStats(std::span<const SampleRecord> holdout,
                                 const ClassSet& classes);

// 1 - Phi((loss - 2 mean) / stddev - z), evaluated through the upper tail so
// that very unfamiliar losses keep relative precision.
double ClassIdProbability(double loss, const ClassLossStats::Entry& stats,
                          double z);

// Mixture of per-class in-distribution probabilities weighted by `probs`.
double IdProbability(std::span<const double> probs, double loss,
                     const ClassLossStats& stats, double z);

double ImageIdProbability(const SampleRecord& record,
                          const ClassLossStats& stats, double z);

CompetencyScore OverallCompetency(std::span<const double> probs, double loss,
                                  const ClassLossStats& stats, double z);

CompetencyScore OverallCompetency(const SampleRecord& record,
                                  const ClassLossStats& stats, double z);

// Fraction of records whose argmax prediction equals the label.
double Accuracy(std::span<const SampleRecord> records);

// Grid search for z minimizing |mean score - target|, where
// mean_score(z) is supplied by the caller. Ties go to the smaller z.
template <typename MeanScoreFn>
CalibrationResult CalibrateOnGrid(const CalibrationGrid& grid, double target,
                                  MeanScoreFn&& mean_score);

// Selects z for the overall score on a labeled holdout set.
CalibrationResult CalibrateZ(std::span<const SampleRecord> holdout,
                             const ClassLossStats& stats,
                             const CalibrationGrid& grid = {});

// ---------------------------------------------------------------------------

CalibrationResult FinishCalibration(const CalibrationGrid& grid, double target,
                                    std::vector<double> mean_scores);

template <typename MeanScoreFn>
CalibrationResult CalibrateOnGrid(const CalibrationGrid& grid, double target,
                                  MeanScoreFn&& mean_score) {
  grid.Validate();
  std::vector<double> means(grid.size());
  for (int i = 0; i < grid.size(); ++i) means[i] = mean_score(grid.at(i));
  return FinishCalibration(grid, target, std::move(means));
}

}  // namespace parce

#endif  // PARCE_CORE_COMPETENCY_H_
