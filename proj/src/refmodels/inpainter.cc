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

#include "parce/refmodels/inpainter.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "matrix_util.h"
#include "parce/error.h"

namespace parce::refmodels {
namespace {

constexpr int kC = ImageTensor::kChannels;

int64_t CountMask(std::span<const uint8_t> mask) {
  return std::count_if(mask.begin(), mask.end(),
                       [](uint8_t m) { return m != 0; });
}

bool UsableMask(std::span<const uint8_t> mask) {
  const int64_t n = CountMask(mask);
  return n > 0 && n < static_cast<int64_t>(mask.size());
}

}  // namespace

Inpainter::Inpainter(int height, int width, Eigen::MatrixXd encoder,
                     Eigen::VectorXd encoder_bias, Eigen::MatrixXd decoder,
                     Eigen::VectorXd decoder_bias, Eigen::VectorXd input_mean)
    : height_(height),
      width_(width),
      encoder_(std::move(encoder)),
      encoder_bias_(std::move(encoder_bias)),
      decoder_(std::move(decoder)),
      decoder_bias_(std::move(decoder_bias)),
      input_mean_(std::move(input_mean)) {
  const Eigen::Index values = static_cast<Eigen::Index>(height) * width * kC;
  const Eigen::Index pixels = static_cast<Eigen::Index>(height) * width;
  const Eigen::Index k = encoder_bias_.size();
  Require(height > 0 && width > 0, ErrorKind::kInvalidArgument,
          "inpainter dimensions must be positive");
  Require(encoder_.rows() == k && encoder_.cols() == values + pixels &&
              decoder_.rows() == values && decoder_.cols() == k &&
              decoder_bias_.size() == values && input_mean_.size() == values,
          ErrorKind::kInvalidArgument, "inpainter parameter shapes mismatch");
  Require(k >= 1 && k < values, ErrorKind::kInvalidArgument,
          "latent dimension must be in [1, input dimension)");
  Require(encoder_.allFinite() && encoder_bias_.allFinite() &&
              decoder_.allFinite() && decoder_bias_.allFinite() &&
              input_mean_.allFinite(),
          ErrorKind::kInvalidArgument, "inpainter parameters must be finite");
}

Eigen::VectorXd Inpainter::InputVector(const ImageTensor& image,
                                       std::span<const uint8_t> mask) const {
  Require(image.height == height_ && image.width == width_,
          ErrorKind::kInvalidArgument, "image size does not match inpainter");
  Require(mask.size() == static_cast<size_t>(image.pixel_count()),
          ErrorKind::kInvalidArgument, "mask size does not match image");
  Require(UsableMask(mask), ErrorKind::kInvalidArgument,
          "inpainting mask must be non-empty and smaller than the image");
  const int pixels = image.pixel_count();
  Eigen::VectorXd in(pixels * kC + pixels);
  for (int p = 0; p < pixels; ++p) {
    const bool hole = mask[p] != 0;
    for (int c = 0; c < kC; ++c) {
      const int i = p * kC + c;
      in[i] = hole ? 0.0 : image.pixels[i] - input_mean_[i];
    }
    in[pixels * kC + p] = hole ? 1.0 : 0.0;
  }
  return in;
}

ImageTensor Inpainter::Inpaint(const ImageTensor& image,
                               std::span<const uint8_t> mask) const {
  const Eigen::VectorXd in = InputVector(image, mask);
  const Eigen::VectorXd out =
      input_mean_ + decoder_ * (encoder_ * in + encoder_bias_) + decoder_bias_;
  ImageTensor result(height_, width_);
  std::copy(out.data(), out.data() + out.size(), result.pixels.begin());
  return result;
}

double SegmentInpaintLoss(const Inpainter& model, const ImageTensor& image,
                          std::span<const uint8_t> mask) {
  return MaskedMeanSquaredError(model.Inpaint(image, mask), image, mask);
}

Inpainter TrainInpainter(std::span<const CorpusItem> train,
                         const SegmentMasksFn& segmenter,
                         const InpainterConfig& config) {
  Require(!train.empty(), ErrorKind::kInvalidArgument,
          "inpainter training split is empty");
  Require(config.learning_rate > 0.0 && config.epochs >= 1 &&
              config.batch_size >= 1 && config.latent_dim >= 1,
          ErrorKind::kInvalidArgument, "invalid inpainter config");
  const int h = train[0].image.height;
  const int w = train[0].image.width;
  const int pixels = h * w;
  const Eigen::Index values = static_cast<Eigen::Index>(pixels) * kC;
  const Eigen::Index in_dim = values + pixels;
  const Eigen::Index k = config.latent_dim;
  Require(k < values, ErrorKind::kInvalidArgument,
          "latent dimension must be smaller than the input dimension");

  std::vector<const ImageTensor*> images;
  std::vector<std::vector<PixelMask>> masks;
  for (const auto& item : train) {
    ValidateImage(item.image);
    Require(item.image.height == h && item.image.width == w,
            ErrorKind::kInvalidArgument, "training images differ in size");
    std::vector<PixelMask> usable;
    for (auto& m : segmenter(item.image)) {
      if (m.size() == static_cast<size_t>(pixels) && UsableMask(m)) {
        usable.push_back(std::move(m));
      }
    }
    if (usable.empty()) continue;
    images.push_back(&item.image);
    masks.push_back(std::move(usable));
  }
  Require(!images.empty(), ErrorKind::kInsufficientData,
          "no training image has a usable segment mask");

  Eigen::MatrixXd x = internal::StackColumns(images);
  const Eigen::VectorXd mean = x.rowwise().mean();
  x.colwise() -= mean;
  const Eigen::Index n = x.cols();

  Rng rng(config.seed);
  Eigen::MatrixXd enc =
      internal::RandomMatrix(k, in_dim, 1.0 / std::sqrt(double(in_dim)), rng);
  Eigen::MatrixXd dec =
      internal::RandomMatrix(values, k, 1.0 / std::sqrt(double(k)), rng);
  Eigen::VectorXd enc_b = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd dec_b = Eigen::VectorXd::Zero(values);
  internal::AdamSlot<Eigen::MatrixXd> s_enc(enc), s_dec(dec);
  internal::AdamSlot<Eigen::VectorXd> s_enc_b(enc_b), s_dec_b(dec_b);

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> choice(n);
  std::vector<double> trace;
  int step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (Eigen::Index i = n - 1; i > 0; --i) {
      std::swap(order[i], order[rng.UniformInt(0, static_cast<int>(i))]);
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      choice[j] = rng.UniformInt(0, static_cast<int>(masks[j].size()) - 1);
    }
    double epoch_loss = 0.0;
    for (Eigen::Index start = 0; start < n; start += config.batch_size) {
      const Eigen::Index b = std::min<Eigen::Index>(config.batch_size, n - start);
      Eigen::MatrixXd in = Eigen::MatrixXd::Zero(in_dim, b);
      Eigen::MatrixXd target(values, b);
      Eigen::MatrixXd weight = Eigen::MatrixXd::Zero(values, b);
      for (Eigen::Index j = 0; j < b; ++j) {
        const Eigen::Index idx = order[start + j];
        const PixelMask& m = masks[idx][choice[idx]];
        const double per_value =
            1.0 / (double(CountMask(m)) * kC * double(b));
        target.col(j) = x.col(idx);
        for (int p = 0; p < pixels; ++p) {
          if (m[p]) {
            in(values + p, j) = 1.0;
            for (int c = 0; c < kC; ++c) weight(p * kC + c, j) = per_value;
          } else {
            for (int c = 0; c < kC; ++c) in(p * kC + c, j) = x(p * kC + c, idx);
          }
        }
      }
      Eigen::MatrixXd code = enc * in;
      code.colwise() += enc_b;
      Eigen::MatrixXd out = dec * code;
      out.colwise() += dec_b;
      const Eigen::MatrixXd diff = out - target;
      epoch_loss += (diff.array().square() * weight.array()).sum() * double(b);

      const Eigen::MatrixXd g_out = 2.0 * diff.cwiseProduct(weight);
      const Eigen::MatrixXd g_dec = g_out * code.transpose();
      const Eigen::VectorXd g_dec_b = g_out.rowwise().sum();
      const Eigen::MatrixXd g_code = dec.transpose() * g_out;
      const Eigen::MatrixXd g_enc = g_code * in.transpose();
      const Eigen::VectorXd g_enc_b = g_code.rowwise().sum();

      ++step;
      s_enc.Step(enc, g_enc, config.learning_rate, step);
      s_dec.Step(dec, g_dec, config.learning_rate, step);
      s_enc_b.Step(enc_b, g_enc_b, config.learning_rate, step);
      s_dec_b.Step(dec_b, g_dec_b, config.learning_rate, step);
    }
    epoch_loss /= double(n);
    if (!std::isfinite(epoch_loss) || !enc.allFinite() || !dec.allFinite()) {
      Fail(ErrorKind::kTrainingFailure,
           "inpainter diverged at epoch " + std::to_string(epoch));
    }
    trace.push_back(epoch_loss);
  }
  Inpainter model(h, w, std::move(enc), std::move(enc_b), std::move(dec),
                  std::move(dec_b), mean);
  model.set_loss_trace(std::move(trace));
  return model;
}

Inpainter TrainInpainter(const SyntheticCorpus& corpus,
                         const SegmentMasksFn& segmenter,
                         const InpainterConfig& config) {
  return TrainInpainter(corpus.train, segmenter, config);
}

}  // namespace parce::refmodels
