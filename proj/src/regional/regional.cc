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

#include "parce/regional/regional.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "parce/core/competency.h"
#include "parce/error.h"
#include "parce/imageio/imageio.h"

namespace parce::regional {

std::vector<SegmentLoss> ComputeSegmentLosses(
    const refmodels::Inpainter& inpainter, const refmodels::ImageTensor& image,
    const SegmentMap& segments, double whole_image_loss) {
  Require(segments.height == image.height && segments.width == image.width,
          ErrorKind::kInvalidArgument, "segment map does not match image");
  const std::vector<int64_t> sizes = segments.SegmentSizes();
  std::vector<SegmentLoss> out;
  out.reserve(segments.segment_count);
  for (int s = 0; s < segments.segment_count; ++s) {
    SegmentLoss entry{s, 0.0, sizes[s]};
    if (sizes[s] == image.pixel_count()) {
      entry.loss = whole_image_loss;
    } else {
      entry.loss =
          refmodels::SegmentInpaintLoss(inpainter, image, segments.Mask(s));
    }
    out.push_back(entry);
  }
  return out;
}

ClassLossStats FitSegmentLossStats(std::span<const SampleRecord> holdout,
                                   const ClassSet& classes) {
  Require(!holdout.empty(), ErrorKind::kInsufficientData,
          "holdout set is empty");
  std::vector<LabeledLoss> obs;
  for (const auto& r : holdout) {
    Require(r.label.has_value(), ErrorKind::kInvalidRecord,
            "holdout record '" + r.id + "' has no label");
    Require(r.segment_losses.has_value(), ErrorKind::kInvalidRecord,
            "holdout record '" + r.id + "' has no segment_losses");
    for (const auto& s : *r.segment_losses) obs.push_back({*r.label, s.loss});
  }
  return FitLossStats(obs, classes);
}

ClassLossStats FitSegmentLossStats(
    std::span<const refmodels::CorpusItem> holdout, const SegmentParams& params,
    const refmodels::Inpainter& inpainter,
    const refmodels::LinearAutoencoder& autoencoder, const ClassSet& classes) {
  Require(!holdout.empty(), ErrorKind::kInsufficientData,
          "holdout set is empty");
  std::vector<LabeledLoss> obs;
  for (const auto& item : holdout) {
    const SegmentMap map = FelzenszwalbSegment(item.image, params);
    const auto losses = ComputeSegmentLosses(
        inpainter, item.image, map, refmodels::ReconLoss(autoencoder, item.image));
    for (const auto& s : losses) obs.push_back({item.label, s.loss});
  }
  return FitLossStats(obs, classes);
}

double SegmentScore(std::span<const double> probs, double loss,
                    const ClassLossStats& stats, double z,
                    const RegionalOptions& options) {
  const double id = IdProbability(probs, loss, stats, z);
  if (!options.apply_max_prob) return id;
  const std::vector<double> p = NormalizedProbs(probs);
  return p[PredictedClass(p)] * id;
}

CompetencyMap RegionalCompetency(std::span<const double> probs,
                                 const SegmentMap& segments,
                                 std::span<const SegmentLoss> losses,
                                 const ClassLossStats& stats, double z,
                                 const RegionalOptions& options) {
  Require(static_cast<int>(losses.size()) == segments.segment_count,
          ErrorKind::kInvalidArgument,
          "expected one segment loss per segment");
  CompetencyMap map;
  map.height = segments.height;
  map.width = segments.width;
  map.z = z;
  map.segment_scores.assign(segments.segment_count, 0.0);
  for (const auto& s : losses) {
    Require(s.segment_id >= 0 && s.segment_id < segments.segment_count,
            ErrorKind::kInvalidArgument, "segment id out of range");
    map.segment_scores[s.segment_id] =
        SegmentScore(probs, s.loss, stats, z, options);
  }
  map.pixel_scores.resize(segments.labels.size());
  for (size_t p = 0; p < segments.labels.size(); ++p) {
    map.pixel_scores[p] = map.segment_scores[segments.labels[p]];
  }
  return map;
}

CompetencyMap RegionalCompetency(const refmodels::ImageTensor& image,
                                 std::span<const double> probs,
                                 const SegmentMap& segments,
                                 const refmodels::Inpainter& inpainter,
                                 double whole_image_loss,
                                 const ClassLossStats& stats, double z,
                                 const RegionalOptions& options) {
  const auto losses =
      ComputeSegmentLosses(inpainter, image, segments, whole_image_loss);
  return RegionalCompetency(probs, segments, losses, stats, z, options);
}

CalibrationResult CalibrateRegionalZ(std::span<const SampleRecord> holdout,
                                     const ClassLossStats& stats,
                                     const CalibrationGrid& grid,
                                     const RegionalOptions& options) {
  struct Item {
    std::span<const double> probs;
    double loss;
  };
  std::vector<Item> items;
  int64_t correct = 0;
  for (const auto& r : holdout) {
    Require(r.label.has_value(), ErrorKind::kInvalidRecord,
            "holdout record '" + r.id + "' has no label");
    Require(r.segment_losses.has_value(), ErrorKind::kInvalidRecord,
            "holdout record '" + r.id + "' has no segment_losses");
    const bool ok = IsCorrect(r);
    for (const auto& s : *r.segment_losses) {
      items.push_back({r.pred_probs, s.loss});
      if (ok) ++correct;
    }
  }
  Require(!items.empty(), ErrorKind::kInsufficientData,
          "regional calibration requires holdout segments");
  const double accuracy = double(correct) / double(items.size());
  return CalibrateOnGrid(grid, accuracy, [&](double z) {
    double sum = 0.0;
    for (const auto& it : items) {
      sum += SegmentScore(it.probs, it.loss, stats, z, options);
    }
    return sum / double(items.size());
  });
}

std::array<uint8_t, 3> MapColor(double score) {
  const double s = std::clamp(score, 0.0, 1.0);
  auto channel = [](double v) {
    return static_cast<uint8_t>(std::floor(255.0 * v + 0.5));
  };
  return {channel(1.0 - s), 0, channel(s)};
}

std::vector<uint8_t> RenderMap(const CompetencyMap& map) {
  Require(map.height > 0 && map.width > 0 &&
              map.pixel_scores.size() ==
                  static_cast<size_t>(map.height) * map.width,
          ErrorKind::kInvalidArgument, "competency map is malformed");
  imageio::RawImage raw{map.width, map.height, 3, {}};
  raw.data.reserve(map.pixel_scores.size() * 3);
  for (double s : map.pixel_scores) {
    const auto rgb = MapColor(s);
    raw.data.insert(raw.data.end(), rgb.begin(), rgb.end());
  }
  return imageio::EncodePng(raw);
}

}  // namespace parce::regional
