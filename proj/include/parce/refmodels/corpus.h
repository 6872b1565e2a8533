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

// Synthetic labeled image corpus with injected out-of-distribution samples.
//
// Each 32x32 image shows one 8x8 square whose color and position identify
// its class, over a uniform-noise background. Squares are jittered by up to
// two pixels and every image receives additive Gaussian noise of a
// per-image strength, so a linear classifier makes honest mistakes. OOD
// images additionally contain a 12x12 ring of a color never seen in
// training; its pixels are recorded as the anomaly mask.

#ifndef PARCE_REFMODELS_CORPUS_H_
#define PARCE_REFMODELS_CORPUS_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "parce/core/types.h"
#include "parce/refmodels/image.h"

namespace parce::refmodels {

struct CorpusItem {
  std::string id;
  ImageTensor image;
  int label = 0;
  bool ood = false;
  // Empty for in-distribution items.
  PixelMask anomaly_mask;

  bool operator==(const CorpusItem&) const = default;
};

struct CorpusSizes {
  int train = 600;
  int holdout = 200;
  int test_id = 200;
  int test_ood = 200;

  bool operator==(const CorpusSizes&) const = default;
};

// Generator knobs. The defaults are what every shipped configuration uses.
struct CorpusStyle {
  int size = 32;
  int square = 8;
  int jitter = 2;
  int ring = 12;
  int ring_thickness = 2;
  double background_base = 0.2;
  double background_amplitude = 0.2;
  double noise_min = 0.02;
  double noise_max = 0.05;
  // Per-image Gaussian perturbation of the square color (per channel).
  double color_jitter = 0.075;
  // Square colors and top-left (row, column) corners per class. Squares
  // stay in the left part of the image so a ring always fits beside them.
  std::array<std::array<double, 3>, 3> class_colors = {{
      {0.55, 0.40, 0.40},
      {0.40, 0.55, 0.40},
      {0.40, 0.40, 0.55},
  }};
  std::array<std::array<int, 2>, 3> class_corners = {{
      {8, 4},
      {12, 6},
      {16, 4},
  }};
  std::array<double, 3> ring_color = {1.0, 0.0, 1.0};
};

struct SyntheticCorpus {
  std::vector<CorpusItem> train;
  std::vector<CorpusItem> holdout;
  std::vector<CorpusItem> test_id;
  std::vector<CorpusItem> test_ood;
  uint64_t seed = 0;
  ClassSet classes = ClassSet::Anonymous(3);

  bool operator==(const SyntheticCorpus&) const = default;
};

// Items are generated from independent streams derived from (seed, split,
// index), so a split's content does not depend on the other split sizes.
// Pixel values are quantized to 8 bits so PNG export is lossless.
SyntheticCorpus GenerateSyntheticCorpus(uint64_t seed,
                                        const CorpusSizes& sizes = {},
                                        const CorpusStyle& style = {});

}  // namespace parce::refmodels

#endif  // PARCE_REFMODELS_CORPUS_H_
