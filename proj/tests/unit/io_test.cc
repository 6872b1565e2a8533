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

#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "parce/error.h"
#include "parce/io/config.h"
#include "parce/io/corpus_files.h"
#include "parce/io/model_files.h"
#include "parce/io/pipeline.h"
#include "parce/io/records.h"
#include "parce/refmodels/corpus.h"

namespace parce::io {
namespace {

namespace fs = std::filesystem;

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("parce_io_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kIo;
}

SampleRecord RandomRecord(std::mt19937_64& g, int i) {
  std::uniform_real_distribution<double> u(0, 1);
  SampleRecord r;
  r.id = "img" + std::to_string(i);
  r.split = static_cast<Split>(i % 3);
  if (i % 5 != 0) r.label = i % 3;
  r.ood = i % 7 == 0;
  std::vector<double> p = {u(g), u(g), u(g)};
  const double s = p[0] + p[1] + p[2];
  for (double& v : p) v /= s;
  r.pred_probs = p;
  if (i % 2 == 0) r.logits = std::vector<double>{u(g) * 10 - 5, -u(g), 1e-300};
  if (i % 4 == 0) r.features = std::vector<double>{u(g), 1.0 / 3.0, -2.5e17};
  r.recon_loss = u(g) / 7.0;
  if (i % 3 == 1) {
    r.segment_losses = std::vector<SegmentLoss>{{0, u(g), 12}, {1, u(g) * 1e-9, 1012}};
  }
  return r;
}

TEST(Records, EmptyFileGivesNoRecords) {
  EXPECT_TRUE(ParseRecords("").empty());
  EXPECT_TRUE(ParseRecords("\n  \n").empty());
  EXPECT_EQ(SerializeRecords({}), "");
}

TEST(Records, MinimalRecordIsBitExact) {
  const std::string line =
      R"({"id":"a","split":"test","label":null,"ood":true,"pred_probs":[0.25,0.75],"recon_loss":0.1})";
  const auto records = ParseRecords(line + "\n");
  ASSERT_EQ(records.size(), 1u);
  const SampleRecord& r = records[0];
  EXPECT_EQ(r.id, "a");
  EXPECT_EQ(r.split, Split::kTest);
  EXPECT_FALSE(r.label.has_value());
  EXPECT_TRUE(r.ood);
  EXPECT_FALSE(r.logits.has_value());
  EXPECT_FALSE(r.segment_losses.has_value());
  EXPECT_EQ(r.recon_loss, 0.1);
  EXPECT_EQ(SerializeRecords(records), line + "\n");
}

TEST(Records, RoundTripThousandRecords) {
  std::mt19937_64 g(11);
  std::vector<SampleRecord> records;
  for (int i = 0; i < 1000; ++i) records.push_back(RandomRecord(g, i));
  const fs::path dir = TempDir("records");
  WriteRecords(dir / "r.jsonl", records);
  const auto back = ReadRecords(dir / "r.jsonl");
  ASSERT_EQ(back.size(), records.size());
  for (size_t i = 0; i < records.size(); ++i) EXPECT_EQ(back[i], records[i]) << i;
  EXPECT_EQ(SerializeRecords(back), SerializeRecords(records));
}

TEST(Records, ErrorsNameTheLineAndField) {
  const std::string good =
      R"({"id":"a","split":"test","label":0,"ood":false,"pred_probs":[1.0],"recon_loss":0})";
  try {
    ParseRecords(good + "\n{not json\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  try {
    ParseRecords(good + "\n" + good + "\n" +
                 R"({"id":"a","split":"test","label":0,"ood":false,"recon_loss":0})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSchema);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("pred_probs"), std::string::npos);
  }
  EXPECT_EQ(KindOf([] {
              ParseRecords(
                  R"({"id":"a","split":"val","label":0,"ood":false,"pred_probs":[1.0],"recon_loss":0})");
            }),
            ErrorKind::kSchema);
  EXPECT_EQ(KindOf([] {
              ParseRecords(
                  R"({"id":"a","split":"test","label":"x","ood":false,"pred_probs":[1.0],"recon_loss":0})");
            }),
            ErrorKind::kSchema);
  EXPECT_EQ(KindOf([] { ReadRecords("/nonexistent/records.jsonl"); }), ErrorKind::kIo);
}

TEST(Records, SchemaFieldNames) {
  std::mt19937_64 g(1);
  SampleRecord r = RandomRecord(g, 4);
  r.segment_losses = std::vector<SegmentLoss>{{3, 0.5, 9}};
  const auto j = RecordToJson(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"id", "split", "label", "ood", "pred_probs",
                                            "logits", "features", "recon_loss",
                                            "segment_losses"}));
  EXPECT_EQ(j["segment_losses"][0]["segment_id"], 3);
  EXPECT_EQ(j["segment_losses"][0]["pixel_count"], 9);
}

TEST(Config, TomlAndJsonAgree) {
  const std::string toml = R"(# run settings
seed = 7
methods = ["parce", "msp"]
benchmark_repetitions = 2

[corpus]
train = 90
holdout = 40

[segmentation]
k = 150.0
min_size = 10

[calibration]
lo = -3.0
hi = 3.0
step = 0.1

[perturbation]
properties = ["brightness", "noise"]
levels = [0, 10, 20]
)";
  const RunConfig t = ParseConfig(toml);
  EXPECT_EQ(t.seed, 7u);
  EXPECT_EQ(t.methods, (std::vector<std::string>{"parce", "msp"}));
  EXPECT_EQ(t.corpus.train, 90);
  EXPECT_EQ(t.corpus.test_id, 200);
  EXPECT_EQ(t.segmentation.k, 150.0);
  EXPECT_EQ(t.segmentation.min_size, 10);
  EXPECT_EQ(t.calibration.step, 0.1);
  EXPECT_EQ(t.perturbation.levels, (std::vector<int>{0, 10, 20}));
  EXPECT_EQ(t.perturbation.properties.size(), 2u);
  const RunConfig j = ParseConfig(ConfigToJson(t).dump());
  EXPECT_EQ(ConfigToJson(j).dump(), ConfigToJson(t).dump());
  const RunConfig d = ParseConfig("");
  EXPECT_EQ(ConfigToJson(d).dump(), ConfigToJson(RunConfig{}).dump());
}

TEST(Config, RejectsBadInput) {
  EXPECT_EQ(KindOf([] { ParseConfig("seeed = 3\n"); }), ErrorKind::kSchema);
  EXPECT_EQ(KindOf([] { ParseConfig(R"({"corpus": {"trian": 3}})"); }),
            ErrorKind::kSchema);
  EXPECT_EQ(KindOf([] { ParseConfig("methods = [\"foo\"]\n"); }),
            ErrorKind::kInvalidArgument);
  EXPECT_EQ(KindOf([] { ParseConfig("seed = \n"); }), ErrorKind::kParse);
  EXPECT_EQ(KindOf([] { ParseConfig("{\"seed\": "); }), ErrorKind::kParse);
  EXPECT_EQ(KindOf([] { ParseConfig("[segmentation]\nk = -1.0\n"); }),
            ErrorKind::kInvalidArgument);
}

TEST(ModelFiles, RoundTrips) {
  RunConfig config;
  config.corpus = {30, 24, 6, 6};
  config.autoencoder.epochs = 2;
  config.inpainter.epochs = 1;
  const auto corpus = GenerateCorpus(config);
  const Models models = TrainModels(config, corpus);
  const fs::path dir = TempDir("models");
  const RunLayout layout{dir};
  WriteModels(layout, models);
  const Models back = ReadModels(layout);
  EXPECT_EQ(ClassifierToJson(back.classifier).dump(),
            ClassifierToJson(models.classifier).dump());
  EXPECT_EQ(AutoencoderToJson(back.autoencoder).dump(),
            AutoencoderToJson(models.autoencoder).dump());
  EXPECT_EQ(InpainterToJson(back.inpainter).dump(),
            InpainterToJson(models.inpainter).dump());
  // Reloaded models must score bit-identically.
  const SampleRecord a = ScoreImage(models, corpus.test_id[0].image, "x", Split::kTest,
                                    0, false, &config.segmentation);
  const SampleRecord b = ScoreImage(back, corpus.test_id[0].image, "x", Split::kTest,
                                    0, false, &config.segmentation);
  EXPECT_EQ(a, b);

  const auto records = ScoreCorpus(config, models, corpus);
  const Calibration cal = CalibrateRecords(config, records, corpus.classes);
  WriteCalibration(layout, cal);
  const Calibration cal_back = ReadCalibration(layout);
  EXPECT_EQ(cal_back.classes.names(), cal.classes.names());
  EXPECT_EQ(cal_back.overall.z, cal.overall.z);
  EXPECT_TRUE(cal_back.stats == cal.stats);
  ASSERT_TRUE(cal_back.regional.has_value());
  EXPECT_EQ(cal_back.regional->z, cal.regional->z);
  EXPECT_EQ(KindOf([&] { ClassifierFromJson(nlohmann::json::object()); }),
            ErrorKind::kSchema);
}

TEST(CorpusFiles, ExportImportRoundTrip) {
  RunConfig config;
  config.corpus = {9, 6, 3, 3};
  const auto corpus = GenerateCorpus(config);
  const fs::path dir = TempDir("corpus");
  ExportCorpus(dir, corpus);
  const auto back = ImportCorpus(dir);
  EXPECT_EQ(back.classes.names(), corpus.classes.names());
  ASSERT_EQ(back.test_ood.size(), corpus.test_ood.size());
  for (size_t i = 0; i < corpus.test_ood.size(); ++i) {
    EXPECT_TRUE(back.test_ood[i] == corpus.test_ood[i]) << i;
  }
  ASSERT_EQ(back.train.size(), corpus.train.size());
  for (size_t i = 0; i < corpus.train.size(); ++i) {
    EXPECT_TRUE(back.train[i] == corpus.train[i]) << i;
  }
  EXPECT_TRUE(back.holdout == corpus.holdout);
  EXPECT_TRUE(back.test_id == corpus.test_id);
  EXPECT_EQ(KindOf([&] { ImportCorpus(dir / "missing"); }), ErrorKind::kIo);
}

// Records written by an external producer (hand-authored, not by this
// library's serializer) must be accepted and evaluated.
TEST(ExternalRecords, IngestedAndEvaluated) {
  const fs::path path = fs::path(PARCE_TEST_DATA_DIR) / "external_records.jsonl";
  const auto records = ReadRecords(path);
  size_t test_images = 0;
  for (const auto& r : records) {
    EXPECT_NO_THROW(ValidateRecord(r, 3)) << r.id;
    test_images += r.split == Split::kTest;
  }
  EXPECT_EQ(test_images, 3u);
  RunConfig config;
  std::vector<std::string> warnings;
  const LogFn log = [&](std::string_view level, std::string_view msg) {
    if (level == "warning") warnings.emplace_back(msg);
  };
  const metrics::EvalReport report = Evaluate(config, {records, {}, nullptr}, log);
  // Every method but the regional one (no images) produces rows.
  EXPECT_EQ(report.methods.size(), AllMethods().size() - 1);
  for (const auto& row : report.rows) {
    EXPECT_GE(row.metrics.auroc, 0.0);
    EXPECT_LE(row.metrics.auroc, 1.0);
  }
  ASSERT_NE(report.Find("parce", {"correct", "ood"}), nullptr);
  EXPECT_EQ(report.Find("parce", {"correct", "ood"})->metrics.auroc, 1.0);

  config.methods = {"msp"};
  const auto msp_only = Evaluate(config, {records, {}, nullptr});
  EXPECT_EQ(msp_only.methods, (std::vector<std::string>{"msp"}));
}

TEST(Evaluate, MissingFieldsAreReported) {
  auto records = ReadRecords(fs::path(PARCE_TEST_DATA_DIR) / "external_records.jsonl");
  for (auto& r : records) r.logits.reset();
  RunConfig config;
  config.methods = {"energy"};
  try {
    Evaluate(config, {records, {}, nullptr});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidRecord);
    EXPECT_NE(std::string(e.what()).find("energy"), std::string::npos);
  }
  std::vector<SampleRecord> test_only;
  for (const auto& r : records) {
    if (r.split == Split::kTest) test_only.push_back(r);
  }
  EXPECT_EQ(KindOf([&] { Evaluate(config, {test_only, {}, nullptr}); }),
            ErrorKind::kInsufficientData);
}

TEST(Pipeline, NamingHelpers) {
  EXPECT_EQ(AccuracyBin(0.9), "acc_high");
  EXPECT_EQ(AccuracyBin(0.8999), "acc_medium");
  EXPECT_EQ(AccuracyBin(0.5), "acc_medium");
  EXPECT_EQ(AccuracyBin(0.4999), "acc_low");
  const std::string id = PerturbedId("test_id_0003", refmodels::Perturbation::kNoise, 7);
  EXPECT_EQ(PerturbationKey(id), "noise:7");
  EXPECT_EQ(PerturbationKey("plain"), "");
}

}  // namespace
}  // namespace parce::io
