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

#ifndef PARCE_REFMODELS_IMAGE_H_
#define PARCE_REFMODELS_IMAGE_H_

#include <cstdint>
#include <span>
#include <vector>

namespace parce::refmodels {

// RGB image with values in [0,1], stored row-major as (y, x, channel).
struct ImageTensor {
  static constexpr int kChannels = 3;

  int height = 0;
  int width = 0;
  std::vector<double> pixels;

  ImageTensor() = default;
  ImageTensor(int h, int w, double fill = 0.0)
      : height(h), width(w), pixels(static_cast<size_t>(h) * w * kChannels,
                                    fill) {}

  int pixel_count() const { return height * width; }
  int value_count() const { return pixel_count() * kChannels; }

  double& at(int y, int x, int c) {
    return pixels[(static_cast<size_t>(y) * width + x) * kChannels + c];
  }
  double at(int y, int x, int c) const {
    return pixels[(static_cast<size_t>(y) * width + x) * kChannels + c];
  }

  bool operator==(const ImageTensor&) const = default;
};

// One byte per pixel, non-zero = selected.
using PixelMask = std::vector<uint8_t>;

// Throws kInvalidArgument if dimensions or values are out of contract.
void ValidateImage(const ImageTensor& image);

// Clamps every value into [0,1].
void ClampUnit(ImageTensor& image);

// Rounds every value to the nearest multiple of 1/255.
void Quantize8(ImageTensor& image);

// Mean squared error over all values.
double MeanSquaredError(const ImageTensor& a, const ImageTensor& b);

// Mean squared error over the channels of the pixels selected by `mask`.
// Throws kInvalidArgument on an empty mask.
double MaskedMeanSquaredError(const ImageTensor& a, const ImageTensor& b,
                              std::span<const uint8_t> mask);

}  // namespace parce::refmodels

#endif  // PARCE_REFMODELS_IMAGE_H_
