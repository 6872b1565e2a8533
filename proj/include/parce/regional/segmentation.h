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

// Efficient graph-based segmentation (Felzenszwalb & Huttenlocher).
//
// The image is smoothed per channel with a Gaussian, scaled to [0,255], and
// turned into an 8-connected grid graph weighted by Euclidean RGB distance.
// Edges are visited in ascending (weight, construction index) order; two
// components C1, C2 are merged by an edge of weight w when
//
//   w <= min(Int(C1) + k/|C1|, Int(C2) + k/|C2|)
//
// with Int(C) the largest edge weight merged into C so far. A second pass
// over the same edge order merges every component smaller than min_size
// into the neighbour across its lightest edge. Labels are renumbered in
// raster order of first occurrence.

#ifndef PARCE_REGIONAL_SEGMENTATION_H_
#define PARCE_REGIONAL_SEGMENTATION_H_

#include <cstdint>
#include <vector>

#include "parce/refmodels/image.h"

namespace parce::regional {

struct SegmentParams {
  double k = 300.0;
  int min_size = 20;
  double smooth_sigma = 0.8;
};

struct SegmentMap {
  int height = 0;
  int width = 0;
  std::vector<int> labels;  // one per pixel, row-major, ids in [0, count)
  int segment_count = 0;

  std::vector<int64_t> SegmentSizes() const;
  // Binary mask of one segment.
  refmodels::PixelMask Mask(int segment) const;

  bool operator==(const SegmentMap&) const = default;
};

// Throws kInvalidArgument when k <= 0, min_size < 1, smooth_sigma < 0 or the
// image is invalid.
SegmentMap FelzenszwalbSegment(const refmodels::ImageTensor& image,
                               const SegmentParams& params = {});

// Checks the partition invariants: every label in range, every id used,
// ids numbered in raster order of first occurrence.
bool IsRasterOrderedPartition(const SegmentMap& map);

// True when each segment is a single 8-connected component.
bool SegmentsAreConnected(const SegmentMap& map);

}  // namespace parce::regional

#endif  // PARCE_REGIONAL_SEGMENTATION_H_
