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

#ifndef PARCE_REFMODELS_AUTOENCODER_H_
#define PARCE_REFMODELS_AUTOENCODER_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "parce/refmodels/corpus.h"
#include "parce/refmodels/image.h"

namespace parce::refmodels {

struct AutoencoderConfig {
  int latent_dim = 32;
  double learning_rate = 2e-3;
  int epochs = 60;
  int batch_size = 50;
  uint64_t seed = 7;
};

// Affine encoder/decoder pair:
//   code = E (x - input_mean) + e,   x_hat = input_mean + D code + d.
class LinearAutoencoder {
 public:
  LinearAutoencoder(Eigen::MatrixXd encoder, Eigen::VectorXd encoder_bias,
                    Eigen::MatrixXd decoder, Eigen::VectorXd decoder_bias,
                    Eigen::VectorXd input_mean);

  int input_dim() const { return static_cast<int>(input_mean_.size()); }
  int latent_dim() const { return static_cast<int>(encoder_bias_.size()); }

  const Eigen::MatrixXd& encoder() const { return encoder_; }
  const Eigen::VectorXd& encoder_bias() const { return encoder_bias_; }
  const Eigen::MatrixXd& decoder() const { return decoder_; }
  const Eigen::VectorXd& decoder_bias() const { return decoder_bias_; }
  const Eigen::VectorXd& input_mean() const { return input_mean_; }

  // Latent code; used downstream as the image's feature vector.
  std::vector<double> Encode(const ImageTensor& image) const;
  // Reconstruction, not clamped.
  ImageTensor Reconstruct(const ImageTensor& image) const;

  const std::vector<double>& loss_trace() const { return loss_trace_; }
  void set_loss_trace(std::vector<double> t) { loss_trace_ = std::move(t); }

 private:
  void CheckInput(const ImageTensor& image) const;

  Eigen::MatrixXd encoder_;  // latent x inputs
  Eigen::VectorXd encoder_bias_;
  Eigen::MatrixXd decoder_;  // inputs x latent
  Eigen::VectorXd decoder_bias_;
  Eigen::VectorXd input_mean_;
  std::vector<double> loss_trace_;
};

// Mean squared per-value reconstruction error.
double ReconLoss(const LinearAutoencoder& model, const ImageTensor& image);

// Mini-batch Adam on mean squared error with a seeded initialization and
// seeded epoch shuffles. Throws kTrainingFailure on divergence.
LinearAutoencoder TrainAutoencoder(std::span<const CorpusItem> train,
                                   const AutoencoderConfig& config = {});

LinearAutoencoder TrainAutoencoder(const SyntheticCorpus& corpus,
                                   const AutoencoderConfig& config = {});

}  // namespace parce::refmodels

#endif  // PARCE_REFMODELS_AUTOENCODER_H_
