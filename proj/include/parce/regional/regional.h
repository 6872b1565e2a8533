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

// Regional competency: every segment of an image is inpainted from its
// surroundings and its masked reconstruction loss is scored against
// per-class Gaussians fitted on holdout segments, exactly like the overall
// score scores the whole-image autoencoder loss.

#ifndef PARCE_REGIONAL_REGIONAL_H_
#define PARCE_REGIONAL_REGIONAL_H_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "parce/core/types.h"
#include "parce/refmodels/autoencoder.h"
#include "parce/refmodels/corpus.h"
#include "parce/refmodels/inpainter.h"
#include "parce/regional/segmentation.h"

namespace parce::regional {

struct RegionalOptions {
  // Multiply segment scores by the image's max class probability. Off by
  // default: the map then reports regional familiarity only.
  bool apply_max_prob = false;
};

struct CompetencyMap {
  int height = 0;
  int width = 0;
  std::vector<double> pixel_scores;    // row-major
  std::vector<double> segment_scores;  // indexed by segment id
  double z = 0.0;
};

// Inpainting loss of every segment, ordered by segment id. A segment that
// covers the whole image cannot be inpainted; it takes `whole_image_loss`
// (the autoencoder loss of the image).
std::vector<SegmentLoss> ComputeSegmentLosses(
    const refmodels::Inpainter& inpainter, const refmodels::ImageTensor& image,
    const SegmentMap& segments, double whole_image_loss);

// Per-class Gaussians over the segment losses stored on holdout records;
// every segment takes its image's ground-truth label.
ClassLossStats FitSegmentLossStats(std::span<const SampleRecord> holdout,
                                   const ClassSet& classes);

// Same, segmenting and inpainting the holdout images directly.
ClassLossStats FitSegmentLossStats(std::span<const refmodels::CorpusItem> holdout,
                                   const SegmentParams& params,
                                   const refmodels::Inpainter& inpainter,
                                   const refmodels::LinearAutoencoder& autoencoder,
                                   const ClassSet& classes);

// Score of one segment: sum_c p[c] * ClassIdProbability(loss, stats_c, z),
// times max p when options.apply_max_prob.
double SegmentScore(std::span<const double> probs, double loss,
                    const ClassLossStats& stats, double z,
                    const RegionalOptions& options = {});

// Builds the map from precomputed segment losses (one per segment id).
CompetencyMap RegionalCompetency(std::span<const double> probs,
                                 const SegmentMap& segments,
                                 std::span<const SegmentLoss> losses,
                                 const ClassLossStats& stats, double z,
                                 const RegionalOptions& options = {});

CompetencyMap RegionalCompetency(const refmodels::ImageTensor& image,
                                 std::span<const double> probs,
                                 const SegmentMap& segments,
                                 const refmodels::Inpainter& inpainter,
                                 double whole_image_loss,
                                 const ClassLossStats& stats, double z,
                                 const RegionalOptions& options = {});

// Grid search for the regional z: the mean segment score over all holdout
// segments is matched to the segment accuracy, where a segment counts as
// correct when its image is classified correctly.
CalibrationResult CalibrateRegionalZ(std::span<const SampleRecord> holdout,
                                     const ClassLossStats& stats,
                                     const CalibrationGrid& grid = {},
                                     const RegionalOptions& options = {});

// Red (score 0) to blue (score 1), each channel rounded half-up.
std::array<uint8_t, 3> MapColor(double score);

// PNG (8-bit RGB) rendering of a map. Deterministic bytes.
std::vector<uint8_t> RenderMap(const CompetencyMap& map);

}  // namespace parce::regional

#endif  // PARCE_REGIONAL_REGIONAL_H_
