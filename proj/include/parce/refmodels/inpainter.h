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

// Mask-conditioned linear inpainter. The masked pixels of the input are
// zeroed (after mean-centering), a binary mask channel is appended, and an
// affine bottleneck predicts the full image. Only masked pixels are scored.

#ifndef PARCE_REFMODELS_INPAINTER_H_
#define PARCE_REFMODELS_INPAINTER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "parce/refmodels/corpus.h"
#include "parce/refmodels/image.h"

namespace parce::refmodels {

struct InpainterConfig {
  int latent_dim = 32;
  double learning_rate = 2e-3;
  int epochs = 40;
  int batch_size = 50;
  uint64_t seed = 11;
};

// Produces the candidate training masks (one per segment) of an image.
using SegmentMasksFn = std::function<std::vector<PixelMask>(const ImageTensor&)>;

class Inpainter {
 public:
  Inpainter(int height, int width, Eigen::MatrixXd encoder,
            Eigen::VectorXd encoder_bias, Eigen::MatrixXd decoder,
            Eigen::VectorXd decoder_bias, Eigen::VectorXd input_mean);

  int height() const { return height_; }
  int width() const { return width_; }
  int latent_dim() const { return static_cast<int>(encoder_bias_.size()); }

  const Eigen::MatrixXd& encoder() const { return encoder_; }
  const Eigen::VectorXd& encoder_bias() const { return encoder_bias_; }
  const Eigen::MatrixXd& decoder() const { return decoder_; }
  const Eigen::VectorXd& decoder_bias() const { return decoder_bias_; }
  const Eigen::VectorXd& input_mean() const { return input_mean_; }

  // Prediction for every pixel; callers read the masked ones. Throws
  // kInvalidArgument for an empty or full mask.
  ImageTensor Inpaint(const ImageTensor& image,
                      std::span<const uint8_t> mask) const;

  const std::vector<double>& loss_trace() const { return loss_trace_; }
  void set_loss_trace(std::vector<double> t) { loss_trace_ = std::move(t); }

  // Builds the (values + mask channel) input column.
  Eigen::VectorXd InputVector(const ImageTensor& image,
                              std::span<const uint8_t> mask) const;

 private:
  int height_;
  int width_;
  Eigen::MatrixXd encoder_;  // latent x (values + pixels)
  Eigen::VectorXd encoder_bias_;
  Eigen::MatrixXd decoder_;  // values x latent
  Eigen::VectorXd decoder_bias_;
  Eigen::VectorXd input_mean_;
  std::vector<double> loss_trace_;
};

// Mean squared error of the inpainted values over the masked pixels only.
double SegmentInpaintLoss(const Inpainter& model, const ImageTensor& image,
                          std::span<const uint8_t> mask);

// Each epoch pairs every training image with one of its segment masks drawn
// uniformly at random (seeded). Masks that are empty or cover the whole
// image are skipped; images without a usable mask are ignored.
Inpainter TrainInpainter(std::span<const CorpusItem> train,
                         const SegmentMasksFn& segmenter,
                         const InpainterConfig& config = {});

Inpainter TrainInpainter(const SyntheticCorpus& corpus,
                         const SegmentMasksFn& segmenter,
                         const InpainterConfig& config = {});

}  // namespace parce::refmodels

#endif  // PARCE_REFMODELS_INPAINTER_H_
