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

// Domain types shared by every module: classifier observables per image,
// fitted loss statistics and calibration results.

#ifndef PARCE_CORE_TYPES_H_
#define PARCE_CORE_TYPES_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace parce {

// Tolerance on |sum(pred_probs) - 1| accepted at ingestion.
inline constexpr double kProbSumTolerance = 1e-6;

// Lower clamp applied to fitted loss standard deviations.
inline constexpr double kSigmaFloor = 1e-8;

enum class Split { kTrain, kHoldout, kTest };

std::string_view SplitName(Split split);
// Throws kInvalidRecord on an unknown name.
Split ParseSplit(std::string_view name);

class ClassSet {
 public:
  // Names must be non-empty and unique.
  explicit ClassSet(std::vector<std::string> names);

  // Names "class0", "class1", ...
  static ClassSet Anonymous(int count);

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int index) const { return names_.at(index); }

  bool operator==(const ClassSet&) const = default;

 private:
  std::vector<std::string> names_;
};

struct SegmentLoss {
  int segment_id = 0;
  double loss = 0.0;
  int64_t pixel_count = 0;

  bool operator==(const SegmentLoss&) const = default;
};

struct SampleRecord {
  std::string id;
  Split split = Split::kTest;
  std::optional<int> label;
  bool ood = false;
  std::vector<double> pred_probs;
  std::optional<std::vector<double>> logits;
  std::optional<std::vector<double>> features;
  double recon_loss = 0.0;
  std::optional<std::vector<SegmentLoss>> segment_losses;

  bool operator==(const SampleRecord&) const = default;
};

// Checks the probability-vector invariant and returns the vector scaled to
// sum to exactly one (up to rounding). Throws kInvalidRecord when an entry
// lies outside [0,1] or the sum is off by more than kProbSumTolerance.
std::vector<double> NormalizedProbs(std::span<const double> probs);

// Full record validation: probabilities, non-negative losses, label range.
// `class_count` of 0 means "infer from pred_probs".
void ValidateRecord(const SampleRecord& record, int class_count = 0);

// argmax with lowest-index tie-break.
int PredictedClass(std::span<const double> probs);

inline bool IsCorrect(const SampleRecord& record) {
  return record.label.has_value() &&
         PredictedClass(record.pred_probs) == *record.label;
}

// Per-class Gaussian parameters of a loss distribution.
struct ClassLossStats {
  struct Entry {
    double mean = 0.0;
    double stddev = kSigmaFloor;
    int64_t sample_count = 0;

    bool operator==(const Entry&) const = default;
  };

  std::vector<Entry> per_class;

  int class_count() const { return static_cast<int>(per_class.size()); }
  const Entry& at(int c) const { return per_class.at(c); }

  bool operator==(const ClassLossStats&) const = default;
};

struct CalibrationGrid {
  double lo = -5.0;
  double hi = 5.0;
  double step = 0.05;

  // Number of grid points: round((hi - lo) / step) + 1.
  int size() const;
  // lo + i * step.
  double at(int i) const;
  void Validate() const;
};

struct CalibrationResult {
  double z = 0.0;
  double residual = 0.0;
  double grid_lo = 0.0;
  double grid_hi = 0.0;
  double grid_step = 0.0;
  // 100 * Phi(z).
  double implied_percentile = 50.0;
  // Target accuracy and the mean score at each grid point, in grid order.
  double accuracy = 0.0;
  std::vector<double> mean_scores;
};

struct CompetencyScore {
  double value = 0.0;
  double id_probability = 0.0;
  double max_prob = 0.0;
};

}  // namespace parce

#endif  // PARCE_CORE_TYPES_H_
