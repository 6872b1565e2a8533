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

#include "parce/refmodels/perturb.h"

#include <algorithm>
#include <string>

#include "parce/error.h"
#include "parce/refmodels/rng.h"

namespace parce::refmodels {

std::string_view PerturbationName(Perturbation p) {
  switch (p) {
    case Perturbation::kSaturation:
      return "saturation";
    case Perturbation::kContrast:
      return "contrast";
    case Perturbation::kBrightness:
      return "brightness";
    case Perturbation::kPixelation:
      return "pixelation";
    case Perturbation::kNoise:
      return "noise";
  }
  return "unknown";
}

Perturbation ParsePerturbation(std::string_view name) {
  for (Perturbation p : kAllPerturbations) {
    if (PerturbationName(p) == name) return p;
  }
  Fail(ErrorKind::kInvalidArgument,
       "unknown perturbation '" + std::string(name) + "'");
}

int NeutralLevel(Perturbation p) {
  switch (p) {
    case Perturbation::kSaturation:
    case Perturbation::kContrast:
    case Perturbation::kBrightness:
      return 10;
    default:
      return 0;
  }
}

double PerturbationValue(Perturbation p, int level_index) {
  Require(level_index >= 0 && level_index < kPerturbationLevels,
          ErrorKind::kInvalidArgument,
          "perturbation level must be in [0, 20], got " +
              std::to_string(level_index));
  const double t = level_index / 20.0;
  switch (p) {
    case Perturbation::kSaturation:
    case Perturbation::kContrast:
      return 2.0 * t;
    case Perturbation::kBrightness:
      return -0.5 + t;
    case Perturbation::kPixelation:
      return level_index + 1;
    case Perturbation::kNoise:
      return 0.5 * t;
  }
  Fail(ErrorKind::kInvalidArgument, "unknown perturbation");
}

ImageTensor PerturbImage(const ImageTensor& image, Perturbation property,
                         int level_index, uint64_t seed) {
  const double value = PerturbationValue(property, level_index);
  ImageTensor out = image;
  constexpr int kC = ImageTensor::kChannels;
  switch (property) {
    case Perturbation::kSaturation:
      for (int p = 0; p < image.pixel_count(); ++p) {
        double* px = &out.pixels[static_cast<size_t>(p) * kC];
        const double luma = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
        for (int c = 0; c < kC; ++c) px[c] = luma + value * (px[c] - luma);
      }
      break;
    case Perturbation::kContrast:
      for (double& v : out.pixels) v = 0.5 + value * (v - 0.5);
      break;
    case Perturbation::kBrightness:
      for (double& v : out.pixels) v += value;
      break;
    case Perturbation::kPixelation: {
      const int block = static_cast<int>(value);
      if (block == 1) break;
      for (int by = 0; by < image.height; by += block) {
        for (int bx = 0; bx < image.width; bx += block) {
          const int y1 = std::min(by + block, image.height);
          const int x1 = std::min(bx + block, image.width);
          const double count = double(y1 - by) * double(x1 - bx);
          for (int c = 0; c < kC; ++c) {
            double sum = 0.0;
            for (int y = by; y < y1; ++y) {
              for (int x = bx; x < x1; ++x) sum += image.at(y, x, c);
            }
            const double mean = sum / count;
            for (int y = by; y < y1; ++y) {
              for (int x = bx; x < x1; ++x) out.at(y, x, c) = mean;
            }
          }
        }
      }
      break;
    }
    case Perturbation::kNoise: {
      if (value == 0.0) break;
      Rng rng(seed);
      for (double& v : out.pixels) v += value * rng.Normal();
      break;
    }
  }
  ClampUnit(out);
  return out;
}

}  // namespace parce::refmodels
