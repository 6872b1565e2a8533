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

#ifndef PARCE_REFMODELS_CLASSIFIER_H_
#define PARCE_REFMODELS_CLASSIFIER_H_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "parce/refmodels/corpus.h"
#include "parce/refmodels/image.h"

namespace parce::refmodels {

struct ClassifierConfig {
  double learning_rate = 5.0;
  int epochs = 300;
  double l2 = 0.0;
};

struct Prediction {
  std::vector<double> logits;
  std::vector<double> probs;
};

// Numerically stable softmax.
std::vector<double> Softmax(std::span<const double> logits);

// Multinomial logistic regression on flattened pixels:
// logits = W (x - input_mean) + b.
class LinearClassifier {
 public:
  LinearClassifier(Eigen::MatrixXd weights, Eigen::VectorXd bias,
                   Eigen::VectorXd input_mean);

  int class_count() const { return static_cast<int>(bias_.size()); }
  int input_dim() const { return static_cast<int>(input_mean_.size()); }

  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::VectorXd& bias() const { return bias_; }
  const Eigen::VectorXd& input_mean() const { return input_mean_; }

  // Training objective evaluated at the start of each epoch (empty for
  // models that were not trained in this process).
  const std::vector<double>& loss_trace() const { return loss_trace_; }
  void set_loss_trace(std::vector<double> trace) {
    loss_trace_ = std::move(trace);
  }

  // Throws kInvalidArgument when the image size does not match the model.
  Prediction Predict(const ImageTensor& image) const;
  std::vector<Prediction> PredictBatch(std::span<const ImageTensor> images) const;

 private:
  Eigen::MatrixXd weights_;  // classes x inputs
  Eigen::VectorXd bias_;
  Eigen::VectorXd input_mean_;
  std::vector<double> loss_trace_;
};

// Full-batch gradient descent on mean cross-entropy (plus l2/2 ||W||^2)
// from a zero initialization. Throws kTrainingFailure when the loss becomes
// non-finite.
LinearClassifier TrainClassifier(std::span<const CorpusItem> train,
                                 int class_count,
                                 const ClassifierConfig& config = {});

LinearClassifier TrainClassifier(const SyntheticCorpus& corpus,
                                 const ClassifierConfig& config = {});

}  // namespace parce::refmodels

#endif  // PARCE_REFMODELS_CLASSIFIER_H_
