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

#include "parce/refmodels/image.h"

#include <algorithm>
#include <cmath>

#include "parce/error.h"

namespace parce::refmodels {

void ValidateImage(const ImageTensor& image) {
  Require(image.height > 0 && image.width > 0, ErrorKind::kInvalidArgument,
          "image dimensions must be positive");
  Require(image.pixels.size() ==
              static_cast<size_t>(image.height) * image.width *
                  ImageTensor::kChannels,
          ErrorKind::kInvalidArgument, "image pixel count mismatch");
  for (double v : image.pixels) {
    Require(std::isfinite(v) && v >= 0.0 && v <= 1.0,
            ErrorKind::kInvalidArgument, "image values must lie in [0,1]");
  }
}

void ClampUnit(ImageTensor& image) {
  for (double& v : image.pixels) v = std::clamp(v, 0.0, 1.0);
}

void Quantize8(ImageTensor& image) {
  for (double& v : image.pixels) {
    v = std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5) / 255.0;
  }
}

double MeanSquaredError(const ImageTensor& a, const ImageTensor& b) {
  Require(a.height == b.height && a.width == b.width,
          ErrorKind::kInvalidArgument, "image dimensions differ");
  double sum = 0.0;
  for (size_t i = 0; i < a.pixels.size(); ++i) {
    const double d = a.pixels[i] - b.pixels[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.pixels.size());
}

double MaskedMeanSquaredError(const ImageTensor& a, const ImageTensor& b,
                              std::span<const uint8_t> mask) {
  Require(a.height == b.height && a.width == b.width,
          ErrorKind::kInvalidArgument, "image dimensions differ");
  Require(mask.size() == static_cast<size_t>(a.pixel_count()),
          ErrorKind::kInvalidArgument, "mask size does not match image");
  double sum = 0.0;
  int64_t n = 0;
  for (int p = 0; p < a.pixel_count(); ++p) {
    if (!mask[p]) continue;
    for (int c = 0; c < ImageTensor::kChannels; ++c) {
      const size_t i = static_cast<size_t>(p) * ImageTensor::kChannels + c;
      const double d = a.pixels[i] - b.pixels[i];
      sum += d * d;
    }
    ++n;
  }
  Require(n > 0, ErrorKind::kInvalidArgument, "mask is empty");
  return sum / static_cast<double>(n * ImageTensor::kChannels);
}

}  // namespace parce::refmodels
