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

#include "parce/refmodels/classifier.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "matrix_util.h"
#include "parce/error.h"

namespace parce::refmodels {

std::vector<double> Softmax(std::span<const double> logits) {
  Require(!logits.empty(), ErrorKind::kInvalidArgument, "empty logits");
  const double hi = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - hi);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

LinearClassifier::LinearClassifier(Eigen::MatrixXd weights,
                                   Eigen::VectorXd bias,
                                   Eigen::VectorXd input_mean)
    : weights_(std::move(weights)),
      bias_(std::move(bias)),
      input_mean_(std::move(input_mean)) {
  Require(weights_.rows() == bias_.size() &&
              weights_.cols() == input_mean_.size() && bias_.size() >= 1,
          ErrorKind::kInvalidArgument, "classifier parameter shapes mismatch");
  Require(weights_.allFinite() && bias_.allFinite() && input_mean_.allFinite(),
          ErrorKind::kInvalidArgument, "classifier parameters must be finite");
}

Prediction LinearClassifier::Predict(const ImageTensor& image) const {
  Require(image.value_count() == input_dim(), ErrorKind::kInvalidArgument,
          "image size " + std::to_string(image.value_count()) +
              " does not match classifier input " +
              std::to_string(input_dim()));
  const Eigen::VectorXd logits =
      weights_ * (internal::AsVector(image) - input_mean_) + bias_;
  Prediction out;
  out.logits.assign(logits.data(), logits.data() + logits.size());
  out.probs = Softmax(out.logits);
  return out;
}

std::vector<Prediction> LinearClassifier::PredictBatch(
    std::span<const ImageTensor> images) const {
  std::vector<Prediction> out;
  out.reserve(images.size());
  for (const auto& img : images) out.push_back(Predict(img));
  return out;
}

LinearClassifier TrainClassifier(std::span<const CorpusItem> train,
                                 int class_count,
                                 const ClassifierConfig& config) {
  Require(!train.empty(), ErrorKind::kInvalidArgument,
          "classifier training split is empty");
  Require(class_count >= 1, ErrorKind::kInvalidArgument,
          "class count must be positive");
  Require(config.learning_rate > 0.0 && config.epochs >= 1 && config.l2 >= 0.0,
          ErrorKind::kInvalidArgument, "invalid classifier config");

  std::vector<const ImageTensor*> images;
  for (const auto& item : train) {
    ValidateImage(item.image);
    Require(item.label >= 0 && item.label < class_count,
            ErrorKind::kInvalidArgument, "training label out of range");
    images.push_back(&item.image);
  }
  Eigen::MatrixXd x = internal::StackColumns(images);
  for (const auto* img : images) {
    Require(img->value_count() == x.rows(), ErrorKind::kInvalidArgument,
            "training images differ in size");
  }
  const Eigen::Index n = x.cols();
  const Eigen::VectorXd mean = x.rowwise().mean();
  x.colwise() -= mean;

  Eigen::MatrixXd onehot = Eigen::MatrixXd::Zero(class_count, n);
  for (Eigen::Index j = 0; j < n; ++j) onehot(train[j].label, j) = 1.0;

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(class_count, x.rows());
  Eigen::VectorXd b = Eigen::VectorXd::Zero(class_count);
  std::vector<double> trace;
  trace.reserve(config.epochs);

  Eigen::MatrixXd probs(class_count, n);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    Eigen::MatrixXd logits = w * x;
    logits.colwise() += b;
    double loss = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double hi = logits.col(j).maxCoeff();
      const double lse =
          hi + std::log((logits.col(j).array() - hi).exp().sum());
      probs.col(j) = (logits.col(j).array() - lse).exp();
      loss += lse - logits(train[j].label, j);
    }
    loss = loss / static_cast<double>(n) + 0.5 * config.l2 * w.squaredNorm();
    if (!std::isfinite(loss)) {
      Fail(ErrorKind::kTrainingFailure,
           "classifier loss diverged at epoch " + std::to_string(epoch));
    }
    trace.push_back(loss);
    const Eigen::MatrixXd residual = (probs - onehot) / static_cast<double>(n);
    const Eigen::MatrixXd grad_w = residual * x.transpose() + config.l2 * w;
    const Eigen::VectorXd grad_b = residual.rowwise().sum();
    w -= config.learning_rate * grad_w;
    b -= config.learning_rate * grad_b;
  }
  if (!w.allFinite() || !b.allFinite()) {
    Fail(ErrorKind::kTrainingFailure, "classifier parameters diverged");
  }
  LinearClassifier model(std::move(w), std::move(b), mean);
  model.set_loss_trace(std::move(trace));
  return model;
}

LinearClassifier TrainClassifier(const SyntheticCorpus& corpus,
                                 const ClassifierConfig& config) {
  return TrainClassifier(corpus.train, corpus.classes.size(), config);
}

}  // namespace parce::refmodels
