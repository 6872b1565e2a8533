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

#include "parce/regional/segmentation.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "parce/error.h"

namespace parce::regional {
namespace {

using refmodels::ImageTensor;
constexpr int kC = ImageTensor::kChannels;

struct Edge {
  int a;
  int b;
  double w;
};

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n), rank_(n, 0), size_(n, 1), int_(n, 0.0) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int Find(int x) {
    int root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const int next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  // Joins two roots; returns the new root.
  int Join(int a, int b, double w) {
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    if (rank_[a] == rank_[b]) ++rank_[a];
    int_[a] = w;
    return a;
  }

  int size(int root) const { return size_[root]; }
  double internal(int root) const { return int_[root]; }

 private:
  std::vector<int> parent_;
  std::vector<int> rank_;
  std::vector<int> size_;
  std::vector<double> int_;
};

// Separable Gaussian blur with edge clamping; returns values on [0,255].
std::vector<double> Smooth(const ImageTensor& image, double sigma) {
  const int h = image.height, w = image.width;
  std::vector<double> src(image.pixels.size());
  for (size_t i = 0; i < src.size(); ++i) src[i] = image.pixels[i] * 255.0;
  if (sigma <= 0.0) return src;

  const int radius = static_cast<int>(std::ceil(sigma * 4.0));
  std::vector<double> kernel(2 * radius + 1);
  double total = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-0.5 * (i / sigma) * (i / sigma));
    total += kernel[i + radius];
  }
  for (double& v : kernel) v /= total;

  std::vector<double> tmp(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < kC; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          const int xx = std::clamp(x + i, 0, w - 1);
          acc += kernel[i + radius] * src[(y * w + xx) * kC + c];
        }
        tmp[(y * w + x) * kC + c] = acc;
      }
    }
  }
  std::vector<double> out(src.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < kC; ++c) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          const int yy = std::clamp(y + i, 0, h - 1);
          acc += kernel[i + radius] * tmp[(yy * w + x) * kC + c];
        }
        out[(y * w + x) * kC + c] = acc;
      }
    }
  }
  return out;
}

double Distance(const std::vector<double>& px, int a, int b) {
  double sum = 0.0;
  for (int c = 0; c < kC; ++c) {
    const double d = px[a * kC + c] - px[b * kC + c];
    sum += d * d;
  }
  return std::sqrt(sum);
}

}  // namespace

std::vector<int64_t> SegmentMap::SegmentSizes() const {
  std::vector<int64_t> sizes(segment_count, 0);
  for (int l : labels) ++sizes.at(l);
  return sizes;
}

refmodels::PixelMask SegmentMap::Mask(int segment) const {
  refmodels::PixelMask mask(labels.size(), 0);
  for (size_t i = 0; i < labels.size(); ++i) mask[i] = labels[i] == segment;
  return mask;
}

SegmentMap FelzenszwalbSegment(const ImageTensor& image,
                               const SegmentParams& params) {
  refmodels::ValidateImage(image);
  Require(params.k > 0.0 && std::isfinite(params.k),
          ErrorKind::kInvalidArgument, "segmentation k must be positive");
  Require(params.min_size >= 1, ErrorKind::kInvalidArgument,
          "segmentation min_size must be >= 1");
  Require(params.smooth_sigma >= 0.0 && std::isfinite(params.smooth_sigma),
          ErrorKind::kInvalidArgument, "smooth_sigma must be >= 0");

  const int h = image.height, w = image.width, n = h * w;
  const std::vector<double> px = Smooth(image, params.smooth_sigma);

  // Construction order per pixel: right, down, down-right, up-right.
  std::vector<Edge> edges;
  edges.reserve(static_cast<size_t>(n) * 4);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int a = y * w + x;
      if (x + 1 < w) edges.push_back({a, a + 1, Distance(px, a, a + 1)});
      if (y + 1 < h) edges.push_back({a, a + w, Distance(px, a, a + w)});
      if (x + 1 < w && y + 1 < h) {
        edges.push_back({a, a + w + 1, Distance(px, a, a + w + 1)});
      }
      if (x + 1 < w && y > 0) {
        edges.push_back({a, a - w + 1, Distance(px, a, a - w + 1)});
      }
    }
  }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& l, const Edge& r) { return l.w < r.w; });

  DisjointSets sets(n);
  std::vector<double> threshold(n, params.k);
  for (const Edge& e : edges) {
    int a = sets.Find(e.a);
    int b = sets.Find(e.b);
    if (a == b) continue;
    if (e.w <= threshold[a] && e.w <= threshold[b]) {
      const int root = sets.Join(a, b, e.w);
      threshold[root] = e.w + params.k / sets.size(root);
    }
  }
  for (const Edge& e : edges) {
    const int a = sets.Find(e.a);
    const int b = sets.Find(e.b);
    if (a != b &&
        (sets.size(a) < params.min_size || sets.size(b) < params.min_size)) {
      sets.Join(a, b, std::max({e.w, sets.internal(a), sets.internal(b)}));
    }
  }

  SegmentMap map;
  map.height = h;
  map.width = w;
  map.labels.assign(n, -1);
  std::vector<int> id_of_root(n, -1);
  for (int p = 0; p < n; ++p) {
    const int root = sets.Find(p);
    if (id_of_root[root] < 0) id_of_root[root] = map.segment_count++;
    map.labels[p] = id_of_root[root];
  }
  return map;
}

bool IsRasterOrderedPartition(const SegmentMap& map) {
  if (map.labels.size() != static_cast<size_t>(map.height) * map.width) {
    return false;
  }
  int next = 0;
  for (int l : map.labels) {
    if (l < 0 || l > next) return false;
    if (l == next) ++next;
  }
  return next == map.segment_count;
}

bool SegmentsAreConnected(const SegmentMap& map) {
  const int h = map.height, w = map.width;
  std::vector<uint8_t> seen(map.labels.size(), 0);
  std::vector<int> components(map.segment_count, 0);
  std::vector<int> stack;
  for (int start = 0; start < h * w; ++start) {
    if (seen[start]) continue;
    const int label = map.labels[start];
    ++components[label];
    seen[start] = 1;
    stack.push_back(start);
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      const int py = p / w, pxx = p % w;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int y = py + dy, x = pxx + dx;
          if (y < 0 || y >= h || x < 0 || x >= w) continue;
          const int q = y * w + x;
          if (!seen[q] && map.labels[q] == label) {
            seen[q] = 1;
            stack.push_back(q);
          }
        }
      }
    }
  }
  return std::all_of(components.begin(), components.end(),
                     [](int c) { return c == 1; });
}

}  // namespace parce::regional
