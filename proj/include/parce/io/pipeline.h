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

// End-to-end evaluation pipeline, split into stages that the CLI can run
// one at a time against a run directory or all at once in memory:
//
//   corpus -> models -> records -> calibration -> perturbation sweep
//          -> segmentation and maps -> evaluation report
//
// Every stage is a pure function of its inputs and the run seed.

#ifndef PARCE_IO_PIPELINE_H_
#define PARCE_IO_PIPELINE_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "parce/core/types.h"
#include "parce/io/config.h"
#include "parce/metrics/report.h"
#include "parce/refmodels/autoencoder.h"
#include "parce/refmodels/classifier.h"
#include "parce/refmodels/corpus.h"
#include "parce/refmodels/inpainter.h"
#include "parce/regional/regional.h"
#include "parce/regional/segmentation.h"

namespace parce::io {

// Receives progress and warning lines. May be empty.
using LogFn = std::function<void(std::string_view level, std::string_view msg)>;

struct Models {
  refmodels::LinearClassifier classifier;
  refmodels::LinearAutoencoder autoencoder;
  refmodels::Inpainter inpainter;
};

// Fitted statistics and calibrations for both score granularities. The
// regional part is absent when the holdout records carry no segment losses.
struct Calibration {
  ClassSet classes = ClassSet::Anonymous(1);
  ClassLossStats stats;
  CalibrationResult overall;
  std::optional<ClassLossStats> regional_stats;
  std::optional<CalibrationResult> regional;
};

// Accuracy bins of the perturbation evaluation.
inline constexpr double kHighAccuracy = 0.9;
inline constexpr double kMediumAccuracy = 0.5;
// "acc_high" (>= 0.9), "acc_medium" ([0.5, 0.9)) or "acc_low" (< 0.5).
std::string_view AccuracyBin(double accuracy);

// Record id of a perturbed image: "<id>@<property>:<level>".
std::string PerturbedId(std::string_view id, refmodels::Perturbation p,
                        int level);
// The "<property>:<level>" suffix, or empty when `id` is not perturbed.
std::string_view PerturbationKey(std::string_view id);

// ---- stages ---------------------------------------------------------------

refmodels::SyntheticCorpus GenerateCorpus(const RunConfig& config);

Models TrainModels(const RunConfig& config,
                   const refmodels::SyntheticCorpus& corpus,
                   const LogFn& log = {});

// Classifier outputs, autoencoder features and loss for one image, plus
// per-segment inpainting losses when `segmentation` is given.
SampleRecord ScoreImage(const Models& models, const refmodels::ImageTensor& image,
                        const std::string& id, Split split,
                        std::optional<int> label, bool ood,
                        const regional::SegmentParams* segmentation);

// Records for every corpus item. Train records carry no segment losses;
// holdout and test records do.
std::vector<SampleRecord> ScoreCorpus(const RunConfig& config,
                                      const Models& models,
                                      const refmodels::SyntheticCorpus& corpus);

// Loss statistics and z calibration from holdout records.
Calibration CalibrateRecords(const RunConfig& config,
                             std::span<const SampleRecord> records,
                             const ClassSet& classes);

// Segmentation of every test image (in-distribution then OOD).
std::vector<std::pair<std::string, regional::SegmentMap>> SegmentTestImages(
    const RunConfig& config, const refmodels::SyntheticCorpus& corpus);

// Competency map of a scored record from its segment losses.
regional::CompetencyMap MapForRecord(const RunConfig& config,
                                     const SampleRecord& record,
                                     const regional::SegmentMap& segments,
                                     const Calibration& calibration);

// Every configured (property, level) applied to every in-distribution test
// image, scored without segment losses.
std::vector<SampleRecord> PerturbationSweep(
    const RunConfig& config, const Models& models,
    const refmodels::SyntheticCorpus& corpus);

struct EvaluationInputs {
  std::span<const SampleRecord> records;
  // Perturbed test records; the perturbation pairs are skipped when empty.
  std::span<const SampleRecord> perturb_records;
  // Needed for the pixel-level regional evaluation (images and anomaly
  // masks); the regional method is skipped when absent.
  const refmodels::SyntheticCorpus* corpus = nullptr;
};

// Fits baselines and calibration from the records, scores every configured
// method and compares the groups of all three evaluations. Pairs with an
// empty group are skipped with a warning. Timing covers scoring from stored
// model outputs.
metrics::EvalReport Evaluate(const RunConfig& config,
                             const EvaluationInputs& inputs,
                             const LogFn& log = {});

// Artifact file names inside a run directory.
struct RunLayout {
  std::filesystem::path root;

  std::filesystem::path config() const { return root / "config.json"; }
  std::filesystem::path data() const { return root / "data"; }
  std::filesystem::path models() const { return root / "models"; }
  std::filesystem::path records() const { return root / "records.jsonl"; }
  std::filesystem::path perturb_records() const {
    return root / "perturb_records.jsonl";
  }
  std::filesystem::path stats() const { return root / "stats.json"; }
  std::filesystem::path calibration() const { return root / "calibration.json"; }
  std::filesystem::path regional_stats() const {
    return root / "regional_stats.json";
  }
  std::filesystem::path regional_calibration() const {
    return root / "regional_calibration.json";
  }
  std::filesystem::path segments() const { return root / "segments"; }
  std::filesystem::path maps() const { return root / "maps"; }
  std::filesystem::path report() const { return root / "report.json"; }
  std::filesystem::path report_table() const { return root / "report.txt"; }
  std::filesystem::path timing() const { return root / "timing.json"; }
};

// Writers and readers for stage artifacts.
void WriteModels(const RunLayout& layout, const Models& models);
Models ReadModels(const RunLayout& layout);
void WriteCalibration(const RunLayout& layout, const Calibration& calibration);
// Reads what WriteCalibration wrote; the regional part is optional.
Calibration ReadCalibration(const RunLayout& layout);
void WriteSegments(const RunLayout& layout,
                   const std::vector<std::pair<std::string, regional::SegmentMap>>&
                       segments);
// Renders one PNG per OOD test record.
void WriteMaps(const RunConfig& config, const RunLayout& layout,
               std::span<const SampleRecord> records,
               const refmodels::SyntheticCorpus& corpus,
               const Calibration& calibration);
void WriteReport(const RunLayout& layout, const metrics::EvalReport& report);

// The whole pipeline in memory, writing every artifact under
// config.output_dir. All files except timing.json are byte-identical
// across runs with the same config. Errors are rethrown with the failing
// stage name prepended.
metrics::EvalReport RunPipeline(const RunConfig& config, const LogFn& log = {});

}  // namespace parce::io

#endif  // PARCE_IO_PIPELINE_H_
