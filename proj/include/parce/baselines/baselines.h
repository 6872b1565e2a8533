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

// Reference confidence scorers computed from probabilities, logits or
// feature vectors. Every scorer is oriented so that a higher value means
// "more in-distribution / more confident".

#ifndef PARCE_BASELINES_BASELINES_H_
#define PARCE_BASELINES_BASELINES_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "parce/core/types.h"

namespace parce::baselines {

inline constexpr double kKlFloor = 1e-12;
inline constexpr double kCovarianceRidge = 1e-3;

// Maximum softmax probability. Throws kInvalidRecord on an invalid vector.
double MspScore(std::span<const double> probs);

// Default temperature grid: 0.05, 0.10, ..., 10.0.
inline CalibrationGrid DefaultTemperatureGrid() { return {0.05, 10.0, 0.05}; }

// Mean negative log-likelihood of softmax(logits / T) at the labels.
double MeanNll(std::span<const std::vector<double>> logits,
               std::span<const int> labels, double temperature);

// Grid temperature minimizing MeanNll; ties go to the smaller temperature.
// Throws kInsufficientData on an empty set.
double FitTemperature(std::span<const std::vector<double>> logits,
                      std::span<const int> labels,
                      const CalibrationGrid& grid = DefaultTemperatureGrid());

// max softmax(logits / T).
double TemperatureMsp(std::span<const double> logits, double temperature);

// T * log sum exp(logits / T) with a max shift. Throws kInvalidArgument on
// non-finite logits or a non-positive temperature.
double EnergyScore(std::span<const double> logits, double temperature = 1.0);

// KL(p || q) with both arguments floored at kKlFloor.
double KlDivergence(std::span<const double> p, std::span<const double> q);

// Per-predicted-class mean softmax templates; the score is minus the
// smallest KL divergence to any template. Classes never predicted on the
// fitting set have no template.
class KlMatcher {
 public:
  explicit KlMatcher(std::vector<std::vector<double>> templates);

  static KlMatcher Fit(std::span<const std::vector<double>> probs);

  double Score(std::span<const double> probs) const;

  const std::vector<std::vector<double>>& templates() const {
    return templates_;
  }

 private:
  std::vector<std::vector<double>> templates_;
};

// Per-class means with a shared covariance; the score is minus the smallest
// squared Mahalanobis distance to a class mean.
class MahalanobisScorer {
 public:
  // Uses `covariance` as given (no ridge). Throws kInvalidArgument when it
  // is not square, does not match the means or is singular.
  MahalanobisScorer(std::vector<Eigen::VectorXd> means,
                    const Eigen::MatrixXd& covariance);

  // Class means and the pooled within-class covariance (1/N normalized)
  // plus ridge * I. Classes without samples are skipped.
  static MahalanobisScorer Fit(std::span<const std::vector<double>> features,
                               std::span<const int> labels, int class_count,
                               double ridge = kCovarianceRidge);

  double SquaredDistance(std::span<const double> features, int cls) const;
  double Score(std::span<const double> features) const;

  int dim() const { return static_cast<int>(precision_.rows()); }
  const std::vector<Eigen::VectorXd>& means() const { return means_; }
  const Eigen::MatrixXd& precision() const { return precision_; }

 private:
  std::vector<Eigen::VectorXd> means_;
  Eigen::MatrixXd precision_;
};

// Minus the Euclidean distance to the k-th nearest bank vector, with query
// and bank normalized to unit length.
class KnnScorer {
 public:
  // Throws kInsufficientData on an empty bank, kInvalidArgument when k is
  // outside [1, bank size] or the dimensions disagree.
  KnnScorer(std::span<const std::vector<double>> bank, int k);

  double Score(std::span<const double> features) const;

  int k() const { return k_; }
  int bank_size() const { return static_cast<int>(bank_.size()); }

 private:
  std::vector<std::vector<double>> bank_;  // unit vectors
  int k_;
};

// Scales a vector to unit Euclidean norm; zero vectors stay zero.
std::vector<double> UnitNormalized(std::span<const double> v);

}  // namespace parce::baselines

#endif  // PARCE_BASELINES_BASELINES_H_
