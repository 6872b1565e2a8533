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

#include "parce/io/pipeline.h"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_map>

#include "parce/baselines/baselines.h"
#include "parce/core/competency.h"
#include "parce/error.h"
#include "parce/imageio/imageio.h"
#include "parce/io/corpus_files.h"
#include "parce/io/model_files.h"
#include "parce/io/records.h"
#include "parce/metrics/metrics.h"
#include "parce/refmodels/perturb.h"
#include "parce/refmodels/rng.h"

namespace parce::io {
namespace {

using refmodels::CorpusItem;
using refmodels::Rng;
using refmodels::SyntheticCorpus;

// Sub-stream ids under the run seed.
constexpr uint64_t kAutoencoderStream = 1;
constexpr uint64_t kInpainterStream = 2;
constexpr uint64_t kPerturbStream = 3;

void Log(const LogFn& log, std::string_view level, const std::string& msg) {
  if (log) log(level, msg);
}

std::vector<refmodels::PixelMask> SegmentMasks(
    const refmodels::ImageTensor& image, const regional::SegmentParams& params) {
  const regional::SegmentMap map = regional::FelzenszwalbSegment(image, params);
  std::vector<refmodels::PixelMask> masks;
  masks.reserve(map.segment_count);
  for (int s = 0; s < map.segment_count; ++s) masks.push_back(map.Mask(s));
  return masks;
}

std::unordered_map<std::string, const CorpusItem*> TestItemsById(
    const SyntheticCorpus& corpus) {
  std::unordered_map<std::string, const CorpusItem*> out;
  for (const auto& item : corpus.test_id) out[item.id] = &item;
  for (const auto& item : corpus.test_ood) out[item.id] = &item;
  return out;
}

void RequireField(std::span<const SampleRecord> records, bool logits,
                  const std::string& method) {
  for (const auto& r : records) {
    const bool present = logits ? r.logits.has_value() : r.features.has_value();
    Require(present, ErrorKind::kInvalidRecord,
            "record '" + r.id + "' has no " + (logits ? "logits" : "features") +
                " (needed by method '" + method + "')");
  }
}

std::vector<std::vector<double>> Column(std::span<const SampleRecord> records,
                                        bool logits) {
  std::vector<std::vector<double>> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(logits ? *r.logits : *r.features);
  return out;
}

std::vector<int> Labels(std::span<const SampleRecord> records,
                        const std::string& method) {
  std::vector<int> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    Require(r.label.has_value(), ErrorKind::kInvalidRecord,
            "record '" + r.id + "' has no label (needed by method '" + method +
                "')");
    out.push_back(*r.label);
  }
  return out;
}

using RecordScorer = std::function<double(const SampleRecord&)>;

// Builds the scoring function of a record-level method. `scored` lists the
// records it will be applied to, for input validation.
RecordScorer MakeScorer(const std::string& method, const RunConfig& config,
                        const Calibration& cal,
                        std::span<const SampleRecord> train,
                        std::span<const SampleRecord> holdout,
                        std::span<const SampleRecord> scored) {
  if (method == kMethodParce) {
    return [&cal](const SampleRecord& r) {
      return OverallCompetency(r, cal.stats, cal.overall.z).value;
    };
  }
  if (method == kMethodMsp) {
    return [](const SampleRecord& r) { return baselines::MspScore(r.pred_probs); };
  }
  if (method == kMethodTemperature) {
    RequireField(holdout, true, method);
    RequireField(scored, true, method);
    const double t = baselines::FitTemperature(
        Column(holdout, true), Labels(holdout, method),
        config.baselines.temperature_grid);
    return [t](const SampleRecord& r) {
      return baselines::TemperatureMsp(*r.logits, t);
    };
  }
  if (method == kMethodEnergy) {
    RequireField(scored, true, method);
    return [](const SampleRecord& r) { return baselines::EnergyScore(*r.logits); };
  }
  if (method == kMethodKlMatching) {
    std::vector<std::vector<double>> probs;
    for (const auto& r : holdout) probs.push_back(r.pred_probs);
    auto matcher = std::make_shared<baselines::KlMatcher>(
        baselines::KlMatcher::Fit(probs));
    return [matcher](const SampleRecord& r) { return matcher->Score(r.pred_probs); };
  }
  // Feature-space methods fit on the training records when present.
  std::span<const SampleRecord> fit = train.empty() ? holdout : train;
  if (method == kMethodMahalanobis) {
    RequireField(fit, false, method);
    RequireField(scored, false, method);
    auto scorer = std::make_shared<baselines::MahalanobisScorer>(
        baselines::MahalanobisScorer::Fit(
            Column(fit, false), Labels(fit, method), cal.classes.size(),
            config.baselines.mahalanobis_ridge));
    return [scorer](const SampleRecord& r) { return scorer->Score(*r.features); };
  }
  if (method == kMethodKnn) {
    RequireField(fit, false, method);
    RequireField(scored, false, method);
    auto scorer = std::make_shared<baselines::KnnScorer>(Column(fit, false),
                                                         config.baselines.knn_k);
    return [scorer](const SampleRecord& r) { return scorer->Score(*r.features); };
  }
  Fail(ErrorKind::kInvalidArgument, "unknown method '" + method + "'");
}

// Named groups over a record list; each entry lists record indices.
struct IndexGroup {
  std::string name;
  std::vector<size_t> members;
};

std::vector<metrics::ScoredGroup> ScoreGroups(
    const std::vector<IndexGroup>& groups, std::span<const SampleRecord> records,
    const RecordScorer& score) {
  std::vector<metrics::ScoredGroup> out;
  for (const auto& g : groups) {
    metrics::ScoredGroup sg{g.name, {}};
    sg.scores.reserve(g.members.size());
    for (size_t i : g.members) sg.scores.push_back(score(records[i]));
    out.push_back(std::move(sg));
  }
  return out;
}

// Pairs whose groups are both non-empty; warns about the others.
template <typename GroupT, typename SizeFn>
std::vector<metrics::GroupPair> UsablePairs(
    const std::vector<metrics::GroupPair>& pairs,
    const std::vector<GroupT>& groups, SizeFn size, const LogFn& log) {
  auto count = [&](const std::string& name) -> size_t {
    for (const auto& g : groups) {
      if (g.name == name) return size(g);
    }
    return 0;
  };
  std::vector<metrics::GroupPair> out;
  for (const auto& p : pairs) {
    if (count(p.first) > 0 && count(p.second) > 0) {
      out.push_back(p);
    } else {
      Log(log, "warning",
          "skipping pair " + p.first + "/" + p.second + ": a group is empty");
    }
  }
  return out;
}

}  // namespace

std::string_view AccuracyBin(double accuracy) {
  if (accuracy >= kHighAccuracy) return "acc_high";
  if (accuracy >= kMediumAccuracy) return "acc_medium";
  return "acc_low";
}

std::string PerturbedId(std::string_view id, refmodels::Perturbation p,
                        int level) {
  return std::string(id) + "@" + std::string(refmodels::PerturbationName(p)) +
         ":" + std::to_string(level);
}

std::string_view PerturbationKey(std::string_view id) {
  const size_t at = id.rfind('@');
  if (at == std::string_view::npos) return {};
  return id.substr(at + 1);
}

SyntheticCorpus GenerateCorpus(const RunConfig& config) {
  return refmodels::GenerateSyntheticCorpus(config.seed, config.corpus);
}

Models TrainModels(const RunConfig& config, const SyntheticCorpus& corpus,
                   const LogFn& log) {
  Log(log, "info", "training classifier");
  refmodels::LinearClassifier classifier =
      refmodels::TrainClassifier(corpus, config.classifier);
  Log(log, "info", "training autoencoder");
  refmodels::AutoencoderConfig ae = config.autoencoder;
  ae.seed = Rng::Derive(config.seed, {kAutoencoderStream});
  refmodels::LinearAutoencoder autoencoder =
      refmodels::TrainAutoencoder(corpus, ae);
  Log(log, "info", "training inpainter");
  refmodels::InpainterConfig inp = config.inpainter;
  inp.seed = Rng::Derive(config.seed, {kInpainterStream});
  const regional::SegmentParams params = config.segmentation;
  refmodels::Inpainter inpainter = refmodels::TrainInpainter(
      corpus,
      [params](const refmodels::ImageTensor& image) {
        return SegmentMasks(image, params);
      },
      inp);
  return {std::move(classifier), std::move(autoencoder), std::move(inpainter)};
}

SampleRecord ScoreImage(const Models& models, const refmodels::ImageTensor& image,
                        const std::string& id, Split split,
                        std::optional<int> label, bool ood,
                        const regional::SegmentParams* segmentation) {
  SampleRecord r;
  r.id = id;
  r.split = split;
  r.label = label;
  r.ood = ood;
  refmodels::Prediction pred = models.classifier.Predict(image);
  r.pred_probs = std::move(pred.probs);
  r.logits = std::move(pred.logits);
  r.features = models.autoencoder.Encode(image);
  r.recon_loss = refmodels::ReconLoss(models.autoencoder, image);
  if (segmentation != nullptr) {
    const regional::SegmentMap map =
        regional::FelzenszwalbSegment(image, *segmentation);
    r.segment_losses = regional::ComputeSegmentLosses(models.inpainter, image,
                                                      map, r.recon_loss);
  }
  return r;
}

std::vector<SampleRecord> ScoreCorpus(const RunConfig& config,
                                      const Models& models,
                                      const SyntheticCorpus& corpus) {
  std::vector<SampleRecord> out;
  out.reserve(corpus.train.size() + corpus.holdout.size() +
              corpus.test_id.size() + corpus.test_ood.size());
  for (const auto& item : corpus.train) {
    out.push_back(ScoreImage(models, item.image, item.id, Split::kTrain,
                             item.label, item.ood, nullptr));
  }
  for (const auto& item : corpus.holdout) {
    out.push_back(ScoreImage(models, item.image, item.id, Split::kHoldout,
                             item.label, item.ood, &config.segmentation));
  }
  for (const auto* split : {&corpus.test_id, &corpus.test_ood}) {
    for (const auto& item : *split) {
      out.push_back(ScoreImage(models, item.image, item.id, Split::kTest,
                               item.label, item.ood, &config.segmentation));
    }
  }
  return out;
}

Calibration CalibrateRecords(const RunConfig& config,
                             std::span<const SampleRecord> records,
                             const ClassSet& classes) {
  std::vector<SampleRecord> holdout;
  for (const auto& r : records) {
    if (r.split == Split::kHoldout) holdout.push_back(r);
  }
  Require(!holdout.empty(), ErrorKind::kInsufficientData,
          "no holdout records to calibrate on");
  Calibration cal;
  cal.classes = classes;
  cal.stats = FitClassLossStats(holdout, classes);
  cal.overall = CalibrateZ(holdout, cal.stats, config.calibration);
  const bool regional = std::all_of(
      holdout.begin(), holdout.end(), [](const SampleRecord& r) {
        return r.segment_losses.has_value() && !r.segment_losses->empty();
      });
  if (regional) {
    cal.regional_stats = regional::FitSegmentLossStats(holdout, classes);
    cal.regional = regional::CalibrateRegionalZ(
        holdout, *cal.regional_stats, config.calibration, config.regional);
  }
  return cal;
}

std::vector<std::pair<std::string, regional::SegmentMap>> SegmentTestImages(
    const RunConfig& config, const SyntheticCorpus& corpus) {
  std::vector<std::pair<std::string, regional::SegmentMap>> out;
  for (const auto* split : {&corpus.test_id, &corpus.test_ood}) {
    for (const auto& item : *split) {
      out.emplace_back(item.id,
                       regional::FelzenszwalbSegment(item.image, config.segmentation));
    }
  }
  return out;
}

regional::CompetencyMap MapForRecord(const RunConfig& config,
                                     const SampleRecord& record,
                                     const regional::SegmentMap& segments,
                                     const Calibration& cal) {
  Require(cal.regional.has_value() && cal.regional_stats.has_value(),
          ErrorKind::kInsufficientData, "regional calibration is missing");
  Require(record.segment_losses.has_value(), ErrorKind::kInvalidRecord,
          "record '" + record.id + "' has no segment_losses");
  return regional::RegionalCompetency(record.pred_probs, segments,
                                      *record.segment_losses,
                                      *cal.regional_stats, cal.regional->z,
                                      config.regional);
}

std::vector<SampleRecord> PerturbationSweep(const RunConfig& config,
                                            const Models& models,
                                            const SyntheticCorpus& corpus) {
  std::vector<SampleRecord> out;
  out.reserve(config.perturbation.properties.size() *
              config.perturbation.levels.size() * corpus.test_id.size());
  for (auto p : config.perturbation.properties) {
    for (int level : config.perturbation.levels) {
      for (size_t i = 0; i < corpus.test_id.size(); ++i) {
        const CorpusItem& item = corpus.test_id[i];
        const uint64_t seed =
            Rng::Derive(config.seed, {kPerturbStream, static_cast<uint64_t>(p),
                                      static_cast<uint64_t>(level), i});
        const refmodels::ImageTensor image =
            refmodels::PerturbImage(item.image, p, level, seed);
        out.push_back(ScoreImage(models, image, PerturbedId(item.id, p, level),
                                 Split::kTest, item.label, false, nullptr));
      }
    }
  }
  return out;
}

metrics::EvalReport Evaluate(const RunConfig& config,
                             const EvaluationInputs& inputs, const LogFn& log) {
  std::vector<SampleRecord> train, holdout, test;
  for (const auto& r : inputs.records) {
    switch (r.split) {
      case Split::kTrain: train.push_back(r); break;
      case Split::kHoldout: holdout.push_back(r); break;
      case Split::kTest: test.push_back(r); break;
    }
  }
  Require(!holdout.empty(), ErrorKind::kInsufficientData,
          "evaluation needs holdout records");
  Require(!test.empty(), ErrorKind::kInsufficientData,
          "evaluation needs test records");
  const int k = static_cast<int>(holdout.front().pred_probs.size());
  const ClassSet classes =
      inputs.corpus != nullptr && inputs.corpus->classes.size() == k
          ? inputs.corpus->classes
          : ClassSet::Anonymous(k);
  for (const auto* set : {&train, &holdout, &test}) {
    for (const auto& r : *set) ValidateRecord(r, k);
  }
  for (const auto& r : inputs.perturb_records) ValidateRecord(r, k);
  const Calibration cal = CalibrateRecords(config, inputs.records, classes);

  // Overall groups over the test split.
  std::vector<IndexGroup> overall = {{"correct", {}}, {"incorrect", {}}, {"ood", {}}};
  for (size_t i = 0; i < test.size(); ++i) {
    const SampleRecord& r = test[i];
    if (r.ood) {
      overall[2].members.push_back(i);
    } else if (r.label.has_value()) {
      overall[IsCorrect(r) ? 0 : 1].members.push_back(i);
    }
  }
  auto member_count = [](const IndexGroup& g) { return g.members.size(); };
  const std::vector<metrics::GroupPair> overall_pairs =
      UsablePairs(metrics::OverallPairs(), overall, member_count, log);

  // Perturbation groups: every (property, level) set goes to one bin.
  std::vector<IndexGroup> bins = {{"acc_high", {}}, {"acc_medium", {}}, {"acc_low", {}}};
  std::vector<metrics::GroupPair> perturb_pairs;
  if (!inputs.perturb_records.empty()) {
    std::map<std::string, std::vector<size_t>> sets;
    for (size_t i = 0; i < inputs.perturb_records.size(); ++i) {
      const SampleRecord& r = inputs.perturb_records[i];
      const std::string key(PerturbationKey(r.id));
      Require(!key.empty(), ErrorKind::kInvalidRecord,
              "perturbed record '" + r.id + "' has no '@property:level' suffix");
      Require(r.label.has_value(), ErrorKind::kInvalidRecord,
              "perturbed record '" + r.id + "' has no label");
      sets[key].push_back(i);
    }
    for (const auto& [key, members] : sets) {
      size_t correct = 0;
      for (size_t i : members) correct += IsCorrect(inputs.perturb_records[i]);
      const double acc = double(correct) / double(members.size());
      const std::string_view bin = AccuracyBin(acc);
      for (auto& b : bins) {
        if (b.name == bin) {
          b.members.insert(b.members.end(), members.begin(), members.end());
        }
      }
    }
    for (auto& b : bins) std::sort(b.members.begin(), b.members.end());
    perturb_pairs = UsablePairs(metrics::PerturbationPairs(), bins, member_count, log);
  }

  metrics::EvalReport report;
  volatile double sink = 0.0;
  for (const auto& method : config.methods) {
    if (method == kMethodParceRegional) continue;
    Log(log, "info", "scoring " + method);
    std::vector<SampleRecord> scored = test;
    scored.insert(scored.end(), inputs.perturb_records.begin(),
                  inputs.perturb_records.end());
    const RecordScorer score = MakeScorer(method, config, cal, train, holdout, scored);
    std::vector<metrics::GroupPair> pairs = overall_pairs;
    std::vector<metrics::ScoredGroup> groups = ScoreGroups(overall, test, score);
    if (!perturb_pairs.empty()) {
      pairs.insert(pairs.end(), perturb_pairs.begin(), perturb_pairs.end());
      for (auto& g : ScoreGroups(bins, inputs.perturb_records, score)) {
        groups.push_back(std::move(g));
      }
    }
    report.AddRows(method, pairs, metrics::EvaluateGroups(groups, pairs));
    report.timing.push_back(
        {method, metrics::BenchmarkTime(
                     [&](size_t i) { sink = sink + score(test[i]); },
                     test.size(), config.benchmark_repetitions)});
  }

  const bool want_regional =
      std::find(config.methods.begin(), config.methods.end(),
                kMethodParceRegional) != config.methods.end();
  if (want_regional) {
    if (inputs.corpus == nullptr || !cal.regional.has_value()) {
      Log(log, "warning",
          "skipping method parce_regional: needs segment losses and the corpus");
    } else {
      Log(log, "info", "scoring parce_regional");
      const auto items = TestItemsById(*inputs.corpus);
      std::vector<metrics::ScoredGroup> groups = {{"id_all_pixels", {}},
                                                  {"ood_familiar_pixels", {}},
                                                  {"ood_unfamiliar_pixels", {}}};
      std::vector<size_t> with_segments;
      for (size_t i = 0; i < test.size(); ++i) {
        const SampleRecord& r = test[i];
        if (!r.segment_losses.has_value()) continue;
        auto it = items.find(r.id);
        Require(it != items.end(), ErrorKind::kInvalidRecord,
                "test record '" + r.id + "' has no corpus image");
        const CorpusItem& item = *it->second;
        const regional::SegmentMap seg =
            regional::FelzenszwalbSegment(item.image, config.segmentation);
        const regional::CompetencyMap map = MapForRecord(config, r, seg, cal);
        with_segments.push_back(i);
        for (size_t p = 0; p < map.pixel_scores.size(); ++p) {
          if (!r.ood) {
            groups[0].scores.push_back(map.pixel_scores[p]);
          } else if (!item.anomaly_mask.empty() && item.anomaly_mask[p]) {
            groups[2].scores.push_back(map.pixel_scores[p]);
          } else {
            groups[1].scores.push_back(map.pixel_scores[p]);
          }
        }
      }
      const auto pairs = UsablePairs(
          metrics::RegionalPairs(), groups,
          [](const metrics::ScoredGroup& g) { return g.scores.size(); }, log);
      report.AddRows(std::string(kMethodParceRegional), pairs,
                     metrics::EvaluateGroups(groups, pairs));
      if (!with_segments.empty()) {
        report.timing.push_back(
            {std::string(kMethodParceRegional),
             metrics::BenchmarkTime(
                 [&](size_t i) {
                   const SampleRecord& r = test[with_segments[i]];
                   for (const auto& s : *r.segment_losses) {
                     sink = sink + regional::SegmentScore(
                                       r.pred_probs, s.loss, *cal.regional_stats,
                                       cal.regional->z, config.regional);
                   }
                 },
                 with_segments.size(), config.benchmark_repetitions)});
      }
    }
  }
  return report;
}

void WriteModels(const RunLayout& layout, const Models& models) {
  WriteJson(layout.models() / "classifier.json",
            ClassifierToJson(models.classifier));
  WriteJson(layout.models() / "autoencoder.json",
            AutoencoderToJson(models.autoencoder));
  WriteJson(layout.models() / "inpainter.json",
            InpainterToJson(models.inpainter));
}

Models ReadModels(const RunLayout& layout) {
  return {ClassifierFromJson(ReadJson(layout.models() / "classifier.json")),
          AutoencoderFromJson(ReadJson(layout.models() / "autoencoder.json")),
          InpainterFromJson(ReadJson(layout.models() / "inpainter.json"))};
}

void WriteCalibration(const RunLayout& layout, const Calibration& cal) {
  WriteJson(layout.stats(), StatsToJson(cal.stats, cal.classes));
  WriteJson(layout.calibration(), CalibrationToJson(cal.overall));
  if (cal.regional.has_value()) {
    WriteJson(layout.regional_stats(), StatsToJson(*cal.regional_stats, cal.classes));
    WriteJson(layout.regional_calibration(), CalibrationToJson(*cal.regional));
  }
}

Calibration ReadCalibration(const RunLayout& layout) {
  Calibration cal;
  std::tie(cal.stats, cal.classes) = StatsFromJson(ReadJson(layout.stats()));
  cal.overall = CalibrationFromJson(ReadJson(layout.calibration()));
  if (std::filesystem::exists(layout.regional_calibration())) {
    cal.regional_stats = StatsFromJson(ReadJson(layout.regional_stats())).first;
    cal.regional = CalibrationFromJson(ReadJson(layout.regional_calibration()));
  }
  return cal;
}

void WriteSegments(
    const RunLayout& layout,
    const std::vector<std::pair<std::string, regional::SegmentMap>>& segments) {
  for (const auto& [id, map] : segments) {
    Require(map.segment_count <= 65536, ErrorKind::kInvalidArgument,
            "too many segments for a 16-bit PGM");
    std::vector<uint16_t> values(map.labels.begin(), map.labels.end());
    imageio::WriteFile(layout.segments() / (id + ".pgm"),
                       imageio::EncodePgm16(map.width, map.height, values));
  }
}

void WriteMaps(const RunConfig& config, const RunLayout& layout,
               std::span<const SampleRecord> records,
               const SyntheticCorpus& corpus, const Calibration& cal) {
  const auto items = TestItemsById(corpus);
  for (const auto& r : records) {
    if (r.split != Split::kTest || !r.ood) continue;
    auto it = items.find(r.id);
    Require(it != items.end(), ErrorKind::kInvalidRecord,
            "test record '" + r.id + "' has no corpus image");
    const regional::SegmentMap seg =
        regional::FelzenszwalbSegment(it->second->image, config.segmentation);
    imageio::WriteFile(layout.maps() / (r.id + ".png"),
                       regional::RenderMap(MapForRecord(config, r, seg, cal)));
  }
}

void WriteReport(const RunLayout& layout, const metrics::EvalReport& report) {
  WriteJson(layout.report(), metrics::ReportToJson(report));
  metrics::EvalReport untimed = report;
  untimed.timing.clear();
  imageio::WriteFile(layout.report_table(), metrics::FormatTable(untimed));
  WriteJson(layout.timing(), metrics::TimingToJson(report));
}

metrics::EvalReport RunPipeline(const RunConfig& config, const LogFn& log) {
  config.Validate();
  const RunLayout layout{config.output_dir};
  // Runs one named stage, prefixing any failure with its name.
  auto run = [&log](const char* name, auto&& fn) {
    Log(log, "info", std::string("stage ") + name);
    try {
      return fn();
    } catch (const Error& e) {
      Fail(e.kind(), std::string("stage ") + name + ": " + e.what());
    }
  };

  const SyntheticCorpus corpus = run("gen-data", [&] {
    WriteJson(layout.config(), ConfigToJson(config));
    SyntheticCorpus c = GenerateCorpus(config);
    ExportCorpus(layout.data(), c);
    return c;
  });
  const Models models = run("train", [&] {
    Models m = TrainModels(config, corpus, log);
    WriteModels(layout, m);
    return m;
  });
  const std::vector<SampleRecord> records = run("score", [&] {
    std::vector<SampleRecord> r = ScoreCorpus(config, models, corpus);
    WriteRecords(layout.records(), r);
    return r;
  });
  const Calibration cal = run("calibrate", [&] {
    Calibration c = CalibrateRecords(config, records, corpus.classes);
    WriteCalibration(layout, c);
    return c;
  });
  run("segment", [&] {
    WriteSegments(layout, SegmentTestImages(config, corpus));
  });
  run("map", [&] {
    if (cal.regional.has_value()) WriteMaps(config, layout, records, corpus, cal);
  });
  const std::vector<SampleRecord> perturbed = run("perturb", [&] {
    std::vector<SampleRecord> p = PerturbationSweep(config, models, corpus);
    WriteRecords(layout.perturb_records(), p);
    return p;
  });
  return run("evaluate", [&] {
    metrics::EvalReport report =
        Evaluate(config, {records, perturbed, &corpus}, log);
    WriteReport(layout, report);
    return report;
  });
}

}  // namespace parce::io
