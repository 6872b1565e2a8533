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

#include "parce/core/types.h"

#include <cmath>
#include <set>

#include "parce/error.h"

namespace parce {

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kHoldout:
      return "holdout";
    case Split::kTest:
      return "test";
  }
  return "test";
}

Split ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "holdout") return Split::kHoldout;
  if (name == "test") return Split::kTest;
  Fail(ErrorKind::kInvalidRecord,
       "unknown split '" + std::string(name) + "'");
}

ClassSet::ClassSet(std::vector<std::string> names) : names_(std::move(names)) {
  Require(!names_.empty(), ErrorKind::kInvalidArgument,
          "class set must contain at least one class");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    Require(seen.insert(n).second, ErrorKind::kInvalidArgument,
            "duplicate class name '" + n + "'");
  }
}

ClassSet ClassSet::Anonymous(int count) {
  Require(count >= 1, ErrorKind::kInvalidArgument,
          "class count must be positive");
  std::vector<std::string> names;
  names.reserve(count);
  for (int i = 0; i < count; ++i) names.push_back("class" + std::to_string(i));
  return ClassSet(std::move(names));
}

std::vector<double> NormalizedProbs(std::span<const double> probs) {
  Require(!probs.empty(), ErrorKind::kInvalidRecord,
          "pred_probs must be non-empty");
  double sum = 0.0;
  for (double p : probs) {
    Require(std::isfinite(p) && p >= 0.0 && p <= 1.0,
            ErrorKind::kInvalidRecord, "pred_probs entries must lie in [0,1]");
    sum += p;
  }
  Require(std::abs(sum - 1.0) <= kProbSumTolerance, ErrorKind::kInvalidRecord,
          "pred_probs must sum to 1 within 1e-6");
  std::vector<double> out(probs.begin(), probs.end());
  for (double& p : out) p /= sum;
  return out;
}

void ValidateRecord(const SampleRecord& record, int class_count) {
  const std::string where = "record '" + record.id + "': ";
  try {
    NormalizedProbs(record.pred_probs);
  } catch (const Error& e) {
    Fail(ErrorKind::kInvalidRecord, where + e.what());
  }
  const int k = class_count > 0 ? class_count
                                : static_cast<int>(record.pred_probs.size());
  Require(static_cast<int>(record.pred_probs.size()) == k,
          ErrorKind::kInvalidRecord,
          where + "pred_probs length does not match class count");
  Require(std::isfinite(record.recon_loss) && record.recon_loss >= 0.0,
          ErrorKind::kInvalidRecord, where + "recon_loss must be >= 0");
  if (record.label) {
    Require(*record.label >= 0 && *record.label < k, ErrorKind::kInvalidRecord,
            where + "label out of range");
  }
  if (record.logits) {
    Require(static_cast<int>(record.logits->size()) == k,
            ErrorKind::kInvalidRecord,
            where + "logits length does not match class count");
    for (double v : *record.logits) {
      Require(std::isfinite(v), ErrorKind::kInvalidRecord,
              where + "logits must be finite");
    }
  }
  if (record.features) {
    for (double v : *record.features) {
      Require(std::isfinite(v), ErrorKind::kInvalidRecord,
              where + "features must be finite");
    }
  }
  if (record.segment_losses) {
    for (const auto& s : *record.segment_losses) {
      Require(std::isfinite(s.loss) && s.loss >= 0.0 && s.pixel_count >= 1 &&
                  s.segment_id >= 0,
              ErrorKind::kInvalidRecord, where + "malformed segment_losses");
    }
  }
}

int PredictedClass(std::span<const double> probs) {
  int best = 0;
  for (int c = 1; c < static_cast<int>(probs.size()); ++c) {
    if (probs[c] > probs[best]) best = c;
  }
  return best;
}

int CalibrationGrid::size() const {
  return static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
}

double CalibrationGrid::at(int i) const {
  const double z = lo + i * step;
  // Snap the last point onto hi when the grid divides the range exactly.
  if (std::abs(z - hi) <= 1e-9 * step) return hi;
  return z;
}

void CalibrationGrid::Validate() const {
  Require(std::isfinite(lo) && std::isfinite(hi) && std::isfinite(step),
          ErrorKind::kInvalidArgument, "calibration grid must be finite");
  Require(step > 0.0, ErrorKind::kInvalidArgument,
          "calibration grid step must be positive");
  Require(hi >= lo, ErrorKind::kInvalidArgument,
          "calibration grid requires hi >= lo");
}

}  // namespace parce
