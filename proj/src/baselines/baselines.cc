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

#include "parce/baselines/baselines.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "parce/error.h"

namespace parce::baselines {
namespace {

void CheckLogits(std::span<const double> logits) {
  Require(!logits.empty(), ErrorKind::kInvalidArgument, "logits are empty");
  for (double v : logits) {
    Require(std::isfinite(v), ErrorKind::kInvalidArgument,
            "logits must be finite");
  }
}

// log sum exp(logits / T), shifted by the maximum.
double LogSumExp(std::span<const double> logits, double temperature) {
  const double m = *std::max_element(logits.begin(), logits.end()) / temperature;
  double sum = 0.0;
  for (double v : logits) sum += std::exp(v / temperature - m);
  return m + std::log(sum);
}

}  // namespace

double MspScore(std::span<const double> probs) {
  const std::vector<double> p = NormalizedProbs(probs);
  return *std::max_element(p.begin(), p.end());
}

double MeanNll(std::span<const std::vector<double>> logits,
               std::span<const int> labels, double temperature) {
  Require(logits.size() == labels.size(), ErrorKind::kInvalidArgument,
          "logits and labels differ in length");
  Require(!logits.empty(), ErrorKind::kInsufficientData,
          "temperature fitting needs at least one sample");
  Require(temperature > 0.0, ErrorKind::kInvalidArgument,
          "temperature must be positive");
  double total = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    CheckLogits(logits[i]);
    Require(labels[i] >= 0 && labels[i] < static_cast<int>(logits[i].size()),
            ErrorKind::kInvalidArgument, "label out of range");
    total += LogSumExp(logits[i], temperature) - logits[i][labels[i]] / temperature;
  }
  return total / static_cast<double>(logits.size());
}

double FitTemperature(std::span<const std::vector<double>> logits,
                      std::span<const int> labels,
                      const CalibrationGrid& grid) {
  grid.Validate();
  Require(grid.lo > 0.0, ErrorKind::kInvalidArgument,
          "temperature grid must be positive");
  Require(!logits.empty(), ErrorKind::kInsufficientData,
          "temperature fitting needs at least one sample");
  double best_t = grid.at(0);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.size(); ++i) {
    const double t = grid.at(i);
    const double nll = MeanNll(logits, labels, t);
    if (nll < best) {
      best = nll;
      best_t = t;
    }
  }
  return best_t;
}

double TemperatureMsp(std::span<const double> logits, double temperature) {
  CheckLogits(logits);
  Require(temperature > 0.0, ErrorKind::kInvalidArgument,
          "temperature must be positive");
  // max_j exp(l_j/T) / sum exp(l/T) = exp(max/T - LSE).
  const double m = *std::max_element(logits.begin(), logits.end());
  return std::exp(m / temperature - LogSumExp(logits, temperature));
}

double EnergyScore(std::span<const double> logits, double temperature) {
  CheckLogits(logits);
  Require(temperature > 0.0, ErrorKind::kInvalidArgument,
          "temperature must be positive");
  return temperature * LogSumExp(logits, temperature);
}

double KlDivergence(std::span<const double> p, std::span<const double> q) {
  Require(p.size() == q.size() && !p.empty(), ErrorKind::kInvalidArgument,
          "KL arguments differ in length");
  double kl = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const double a = std::max(p[i], kKlFloor);
    const double b = std::max(q[i], kKlFloor);
    kl += a * std::log(a / b);
  }
  return kl;
}

KlMatcher::KlMatcher(std::vector<std::vector<double>> templates)
    : templates_(std::move(templates)) {
  Require(!templates_.empty(), ErrorKind::kInsufficientData,
          "KL matching needs at least one template");
  for (auto& t : templates_) {
    Require(t.size() == templates_.front().size(), ErrorKind::kInvalidArgument,
            "templates differ in length");
    t = NormalizedProbs(t);
  }
}

KlMatcher KlMatcher::Fit(std::span<const std::vector<double>> probs) {
  Require(!probs.empty(), ErrorKind::kInsufficientData,
          "KL matching needs at least one sample");
  const size_t k = probs.front().size();
  std::vector<std::vector<double>> sums(k, std::vector<double>(k, 0.0));
  std::vector<int64_t> counts(k, 0);
  for (const auto& raw : probs) {
    Require(raw.size() == k, ErrorKind::kInvalidArgument,
            "probability vectors differ in length");
    const std::vector<double> p = NormalizedProbs(raw);
    const int c = PredictedClass(p);
    for (size_t j = 0; j < k; ++j) sums[c][j] += p[j];
    ++counts[c];
  }
  std::vector<std::vector<double>> templates;
  for (size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    for (double& v : sums[c]) v /= static_cast<double>(counts[c]);
    templates.push_back(std::move(sums[c]));
  }
  return KlMatcher(std::move(templates));
}

double KlMatcher::Score(std::span<const double> probs) const {
  Require(probs.size() == templates_.front().size(),
          ErrorKind::kInvalidArgument, "probability vector length mismatch");
  const std::vector<double> p = NormalizedProbs(probs);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : templates_) best = std::min(best, KlDivergence(p, t));
  return -best;
}

MahalanobisScorer::MahalanobisScorer(std::vector<Eigen::VectorXd> means,
                                     const Eigen::MatrixXd& covariance)
    : means_(std::move(means)) {
  Require(!means_.empty(), ErrorKind::kInsufficientData,
          "Mahalanobis scorer needs at least one class mean");
  const Eigen::Index d = covariance.rows();
  Require(d > 0 && covariance.cols() == d, ErrorKind::kInvalidArgument,
          "covariance must be square");
  for (const auto& m : means_) {
    Require(m.size() == d, ErrorKind::kInvalidArgument,
            "class mean does not match covariance dimension");
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(covariance);
  Require(lu.isInvertible(), ErrorKind::kInvalidArgument,
          "covariance is singular");
  precision_ = lu.inverse();
  precision_ = 0.5 * (precision_ + precision_.transpose()).eval();
}

MahalanobisScorer MahalanobisScorer::Fit(
    std::span<const std::vector<double>> features, std::span<const int> labels,
    int class_count, double ridge) {
  Require(features.size() == labels.size(), ErrorKind::kInvalidArgument,
          "features and labels differ in length");
  Require(!features.empty(), ErrorKind::kInsufficientData,
          "Mahalanobis fitting needs at least one sample");
  Require(ridge >= 0.0, ErrorKind::kInvalidArgument, "ridge must be >= 0");
  const Eigen::Index d = static_cast<Eigen::Index>(features.front().size());
  Require(d > 0, ErrorKind::kInvalidArgument, "features are empty");

  std::vector<Eigen::VectorXd> sums(class_count, Eigen::VectorXd::Zero(d));
  std::vector<int64_t> counts(class_count, 0);
  for (size_t i = 0; i < features.size(); ++i) {
    Require(static_cast<Eigen::Index>(features[i].size()) == d,
            ErrorKind::kInvalidArgument, "feature vectors differ in length");
    Require(labels[i] >= 0 && labels[i] < class_count,
            ErrorKind::kInvalidArgument, "label out of range");
    sums[labels[i]] += Eigen::Map<const Eigen::VectorXd>(features[i].data(), d);
    ++counts[labels[i]];
  }
  std::vector<Eigen::VectorXd> class_mean(class_count);
  for (int c = 0; c < class_count; ++c) {
    if (counts[c] > 0) class_mean[c] = sums[c] / static_cast<double>(counts[c]);
  }
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (size_t i = 0; i < features.size(); ++i) {
    const Eigen::VectorXd r =
        Eigen::Map<const Eigen::VectorXd>(features[i].data(), d) -
        class_mean[labels[i]];
    cov.noalias() += r * r.transpose();
  }
  cov /= static_cast<double>(features.size());
  cov.diagonal().array() += ridge;

  std::vector<Eigen::VectorXd> means;
  for (int c = 0; c < class_count; ++c) {
    if (counts[c] > 0) means.push_back(class_mean[c]);
  }
  return MahalanobisScorer(std::move(means), cov);
}

double MahalanobisScorer::SquaredDistance(std::span<const double> features,
                                          int cls) const {
  Require(static_cast<Eigen::Index>(features.size()) == precision_.rows(),
          ErrorKind::kInvalidArgument, "feature dimension mismatch");
  const Eigen::VectorXd r =
      Eigen::Map<const Eigen::VectorXd>(features.data(), features.size()) -
      means_.at(cls);
  return std::max(0.0, r.dot(precision_ * r));
}

double MahalanobisScorer::Score(std::span<const double> features) const {
  double best = std::numeric_limits<double>::infinity();
  for (size_t c = 0; c < means_.size(); ++c) {
    best = std::min(best, SquaredDistance(features, static_cast<int>(c)));
  }
  return -best;
}

std::vector<double> UnitNormalized(std::span<const double> v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  std::vector<double> out(v.begin(), v.end());
  if (norm > 0.0) {
    for (double& x : out) x /= norm;
  }
  return out;
}

KnnScorer::KnnScorer(std::span<const std::vector<double>> bank, int k) : k_(k) {
  Require(!bank.empty(), ErrorKind::kInsufficientData,
          "k-NN feature bank is empty");
  Require(k >= 1 && k <= static_cast<int>(bank.size()),
          ErrorKind::kInvalidArgument,
          "k must lie in [1, " + std::to_string(bank.size()) + "]");
  bank_.reserve(bank.size());
  for (const auto& v : bank) {
    Require(v.size() == bank.front().size() && !v.empty(),
            ErrorKind::kInvalidArgument, "bank vectors differ in length");
    bank_.push_back(UnitNormalized(v));
  }
}

double KnnScorer::Score(std::span<const double> features) const {
  Require(features.size() == bank_.front().size(), ErrorKind::kInvalidArgument,
          "feature dimension mismatch");
  const std::vector<double> q = UnitNormalized(features);
  // (distance, bank index) pairs; the index breaks ties deterministically.
  std::vector<std::pair<double, int>> dist(bank_.size());
  for (size_t i = 0; i < bank_.size(); ++i) {
    double s = 0.0;
    for (size_t j = 0; j < q.size(); ++j) {
      const double d = q[j] - bank_[i][j];
      s += d * d;
    }
    dist[i] = {std::sqrt(s), static_cast<int>(i)};
  }
  std::nth_element(dist.begin(), dist.begin() + (k_ - 1), dist.end());
  return -dist[k_ - 1].first;
}

}  // namespace parce::baselines
