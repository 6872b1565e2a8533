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

#include "parce/refmodels/corpus.h"

#include <cstdio>

#include "parce/error.h"
#include "parce/refmodels/rng.h"

namespace parce::refmodels {
namespace {

enum SplitIndex : uint64_t { kTrainIdx = 0, kHoldoutIdx, kTestIdx, kOodIdx };

std::string MakeId(const char* prefix, int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%05d", prefix, index);
  return buf;
}

struct Box {
  int y = 0, x = 0, h = 0, w = 0;

  bool Overlaps(const Box& o, int margin) const {
    return y - margin < o.y + o.h && o.y - margin < y + h &&
           x - margin < o.x + o.w && o.x - margin < x + w;
  }
};

CorpusItem MakeItem(const CorpusStyle& style, uint64_t item_seed,
                    std::string id, bool with_ring) {
  Rng rng(item_seed);
  const int n = style.size;
  CorpusItem item;
  item.id = std::move(id);
  item.label = rng.UniformInt(0, 2);
  item.ood = with_ring;
  item.image = ImageTensor(n, n);
  ImageTensor& img = item.image;

  for (double& v : img.pixels) {
    v = style.background_base + style.background_amplitude * rng.Uniform();
  }

  const auto& corner = style.class_corners[item.label];
  Box square{corner[0] + rng.UniformInt(-style.jitter, style.jitter),
             corner[1] + rng.UniformInt(-style.jitter, style.jitter),
             style.square, style.square};
  std::array<double, 3> color = style.class_colors[item.label];
  for (double& c : color) c += style.color_jitter * rng.Normal();
  for (int y = square.y; y < square.y + square.h; ++y) {
    for (int x = square.x; x < square.x + square.w; ++x) {
      for (int c = 0; c < 3; ++c) img.at(y, x, c) = color[c];
    }
  }

  if (with_ring) {
    item.anomaly_mask.assign(img.pixel_count(), 0);
    Box ring{0, 0, style.ring, style.ring};
    // Rejection-sample a placement that keeps the square fully visible.
    for (int attempt = 0;; ++attempt) {
      ring.y = rng.UniformInt(0, n - style.ring);
      ring.x = rng.UniformInt(0, n - style.ring);
      if (!ring.Overlaps(square, 1)) break;
      if (attempt == 1000) {
        ring.x = n - style.ring;
        break;
      }
    }
    const int t = style.ring_thickness;
    for (int y = ring.y; y < ring.y + ring.h; ++y) {
      for (int x = ring.x; x < ring.x + ring.w; ++x) {
        const bool edge = y < ring.y + t || y >= ring.y + ring.h - t ||
                          x < ring.x + t || x >= ring.x + ring.w - t;
        if (!edge) continue;
        for (int c = 0; c < 3; ++c) img.at(y, x, c) = style.ring_color[c];
        item.anomaly_mask[y * n + x] = 1;
      }
    }
  }

  const double sigma = rng.Uniform(style.noise_min, style.noise_max);
  for (double& v : img.pixels) v += sigma * rng.Normal();
  Quantize8(img);
  return item;
}

std::vector<CorpusItem> MakeSplit(const CorpusStyle& style, uint64_t seed,
                                  SplitIndex split, const char* prefix,
                                  int count, bool with_ring) {
  std::vector<CorpusItem> items;
  items.reserve(count);
  for (int i = 0; i < count; ++i) {
    items.push_back(MakeItem(style, Rng::Derive(seed, {split, uint64_t(i)}),
                             MakeId(prefix, i), with_ring));
  }
  return items;
}

}  // namespace

SyntheticCorpus GenerateSyntheticCorpus(uint64_t seed, const CorpusSizes& sizes,
                                        const CorpusStyle& style) {
  Require(sizes.train >= 1 && sizes.holdout >= 1 && sizes.test_id >= 1 &&
              sizes.test_ood >= 1,
          ErrorKind::kInvalidArgument, "every corpus split needs >= 1 item");
  Require(style.size >= style.ring && style.size >= style.square + 2 * 2,
          ErrorKind::kInvalidArgument, "corpus style does not fit the image");
  SyntheticCorpus corpus;
  corpus.seed = seed;
  corpus.classes = ClassSet({"square_a", "square_b", "square_c"});
  corpus.train = MakeSplit(style, seed, kTrainIdx, "train", sizes.train, false);
  corpus.holdout =
      MakeSplit(style, seed, kHoldoutIdx, "holdout", sizes.holdout, false);
  corpus.test_id = MakeSplit(style, seed, kTestIdx, "test", sizes.test_id, false);
  corpus.test_ood = MakeSplit(style, seed, kOodIdx, "ood", sizes.test_ood, true);
  return corpus;
}

}  // namespace parce::refmodels
