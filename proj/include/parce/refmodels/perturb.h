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

// Global image perturbations on a 21-level grid per property:
//   saturation  factor 0..2 toward/away from per-pixel luma   (neutral 10)
//   contrast    factor 0..2 about mid-gray 0.5               (neutral 10)
//   brightness  offset -0.5..+0.5                            (neutral 10)
//   pixelation  block size 1..21 with block averaging        (neutral 0)
//   noise       additive Gaussian sigma 0..0.5, seeded       (neutral 0)
// Outputs are clamped to [0,1].

#ifndef PARCE_REFMODELS_PERTURB_H_
#define PARCE_REFMODELS_PERTURB_H_

#include <array>
#include <cstdint>
#include <string_view>

#include "parce/refmodels/image.h"

namespace parce::refmodels {

enum class Perturbation { kSaturation, kContrast, kBrightness, kPixelation, kNoise };

inline constexpr int kPerturbationLevels = 21;

inline constexpr std::array<Perturbation, 5> kAllPerturbations = {
    Perturbation::kSaturation, Perturbation::kContrast,
    Perturbation::kBrightness, Perturbation::kPixelation, Perturbation::kNoise};

std::string_view PerturbationName(Perturbation p);
// Throws kInvalidArgument for an unknown name.
Perturbation ParsePerturbation(std::string_view name);

// Level index whose output equals the input.
int NeutralLevel(Perturbation p);

// Property value at a level (factor, offset, block size or sigma).
double PerturbationValue(Perturbation p, int level_index);

// Throws kInvalidArgument when level_index is outside [0, 20].
ImageTensor PerturbImage(const ImageTensor& image, Perturbation property,
                         int level_index, uint64_t seed);

}  // namespace parce::refmodels

#endif  // PARCE_REFMODELS_PERTURB_H_
