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

#include "parce/refmodels/autoencoder.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "matrix_util.h"
#include "parce/error.h"

namespace parce::refmodels {

LinearAutoencoder::LinearAutoencoder(Eigen::MatrixXd encoder,
                                     Eigen::VectorXd encoder_bias,
                                     Eigen::MatrixXd decoder,
                                     Eigen::VectorXd decoder_bias,
                                     Eigen::VectorXd input_mean)
    : encoder_(std::move(encoder)),
      encoder_bias_(std::move(encoder_bias)),
      decoder_(std::move(decoder)),
      decoder_bias_(std::move(decoder_bias)),
      input_mean_(std::move(input_mean)) {
  const auto d = input_mean_.size();
  const auto k = encoder_bias_.size();
  Require(encoder_.rows() == k && encoder_.cols() == d &&
              decoder_.rows() == d && decoder_.cols() == k &&
              decoder_bias_.size() == d,
          ErrorKind::kInvalidArgument, "autoencoder parameter shapes mismatch");
  Require(k >= 1 && k < d, ErrorKind::kInvalidArgument,
          "latent dimension must be in [1, input dimension)");
  Require(encoder_.allFinite() && encoder_bias_.allFinite() &&
              decoder_.allFinite() && decoder_bias_.allFinite() &&
              input_mean_.allFinite(),
          ErrorKind::kInvalidArgument, "autoencoder parameters must be finite");
}

void LinearAutoencoder::CheckInput(const ImageTensor& image) const {
  Require(image.value_count() == input_dim(), ErrorKind::kInvalidArgument,
          "image size does not match autoencoder input");
}

std::vector<double> LinearAutoencoder::Encode(const ImageTensor& image) const {
  CheckInput(image);
  const Eigen::VectorXd code =
      encoder_ * (internal::AsVector(image) - input_mean_) + encoder_bias_;
  return {code.data(), code.data() + code.size()};
}

ImageTensor LinearAutoencoder::Reconstruct(const ImageTensor& image) const {
  CheckInput(image);
  const Eigen::VectorXd code =
      encoder_ * (internal::AsVector(image) - input_mean_) + encoder_bias_;
  const Eigen::VectorXd out = input_mean_ + decoder_ * code + decoder_bias_;
  ImageTensor recon(image.height, image.width);
  std::copy(out.data(), out.data() + out.size(), recon.pixels.begin());
  return recon;
}

double ReconLoss(const LinearAutoencoder& model, const ImageTensor& image) {
  return MeanSquaredError(model.Reconstruct(image), image);
}

LinearAutoencoder TrainAutoencoder(std::span<const CorpusItem> train,
                                   const AutoencoderConfig& config) {
  Require(!train.empty(), ErrorKind::kInvalidArgument,
          "autoencoder training split is empty");
  Require(config.learning_rate > 0.0 && config.epochs >= 1 &&
              config.batch_size >= 1 && config.latent_dim >= 1,
          ErrorKind::kInvalidArgument, "invalid autoencoder config");
  std::vector<const ImageTensor*> images;
  for (const auto& item : train) {
    ValidateImage(item.image);
    images.push_back(&item.image);
  }
  Eigen::MatrixXd x = internal::StackColumns(images);
  const Eigen::Index dim = x.rows();
  const Eigen::Index n = x.cols();
  const Eigen::Index k = config.latent_dim;
  Require(k < dim, ErrorKind::kInvalidArgument,
          "latent dimension must be smaller than the input dimension");
  const Eigen::VectorXd mean = x.rowwise().mean();
  x.colwise() -= mean;

  Rng rng(config.seed);
  Eigen::MatrixXd enc =
      internal::RandomMatrix(k, dim, 1.0 / std::sqrt(double(dim)), rng);
  Eigen::MatrixXd dec =
      internal::RandomMatrix(dim, k, 1.0 / std::sqrt(double(k)), rng);
  Eigen::VectorXd enc_b = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd dec_b = Eigen::VectorXd::Zero(dim);
  internal::AdamSlot<Eigen::MatrixXd> s_enc(enc), s_dec(dec);
  internal::AdamSlot<Eigen::VectorXd> s_enc_b(enc_b), s_dec_b(dec_b);

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> trace;
  int step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (Eigen::Index i = n - 1; i > 0; --i) {
      std::swap(order[i], order[rng.UniformInt(0, static_cast<int>(i))]);
    }
    double epoch_loss = 0.0;
    for (Eigen::Index start = 0; start < n; start += config.batch_size) {
      const Eigen::Index b = std::min<Eigen::Index>(config.batch_size, n - start);
      Eigen::MatrixXd batch(dim, b);
      for (Eigen::Index j = 0; j < b; ++j) batch.col(j) = x.col(order[start + j]);

      Eigen::MatrixXd code = enc * batch;
      code.colwise() += enc_b;
      Eigen::MatrixXd out = dec * code;
      out.colwise() += dec_b;
      const Eigen::MatrixXd diff = out - batch;
      epoch_loss += diff.squaredNorm();

      const Eigen::MatrixXd g_out = (2.0 / double(dim * b)) * diff;
      const Eigen::MatrixXd g_dec = g_out * code.transpose();
      const Eigen::VectorXd g_dec_b = g_out.rowwise().sum();
      const Eigen::MatrixXd g_code = dec.transpose() * g_out;
      const Eigen::MatrixXd g_enc = g_code * batch.transpose();
      const Eigen::VectorXd g_enc_b = g_code.rowwise().sum();

      ++step;
      s_enc.Step(enc, g_enc, config.learning_rate, step);
      s_dec.Step(dec, g_dec, config.learning_rate, step);
      s_enc_b.Step(enc_b, g_enc_b, config.learning_rate, step);
      s_dec_b.Step(dec_b, g_dec_b, config.learning_rate, step);
    }
    epoch_loss /= double(dim * n);
    if (!std::isfinite(epoch_loss) || !enc.allFinite() || !dec.allFinite()) {
      Fail(ErrorKind::kTrainingFailure,
           "autoencoder diverged at epoch " + std::to_string(epoch));
    }
    trace.push_back(epoch_loss);
  }
  LinearAutoencoder model(std::move(enc), std::move(enc_b), std::move(dec),
                          std::move(dec_b), mean);
  model.set_loss_trace(std::move(trace));
  return model;
}

LinearAutoencoder TrainAutoencoder(const SyntheticCorpus& corpus,
                                   const AutoencoderConfig& config) {
  return TrainAutoencoder(corpus.train, config);
}

}  // namespace parce::refmodels
