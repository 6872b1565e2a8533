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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"
#include "parce/error.h"
#include "parce/metrics/metrics.h"
#include "parce/metrics/report.h"

namespace parce::metrics {
namespace {

std::vector<double> Draw(std::mt19937_64& g, int n, bool coarse) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> v(n);
  // Coarse values force ties.
  for (double& x : v) x = coarse ? std::floor(u(g) * 5) / 5 : u(g);
  return v;
}

TEST(Ks, Examples) {
  EXPECT_EQ(KsStatistic(std::vector<double>{1, 2, 2}, std::vector<double>{2, 1, 2}), 0.0);
  EXPECT_EQ(KsStatistic(std::vector<double>{0, 0}, std::vector<double>{1, 1}), 1.0);
  EXPECT_EQ(KsStatistic(std::vector<double>{1, 2}, std::vector<double>{1.5, 2.5}), 0.5);
  EXPECT_THROW(KsStatistic({}, std::vector<double>{1}), Error);
}

TEST(Auroc, Examples) {
  EXPECT_EQ(Auroc(std::vector<double>{0.9, 0.8}, std::vector<double>{0.1, 0.2}), 1.0);
  EXPECT_EQ(Auroc(std::vector<double>{0.3, 0.6}, std::vector<double>{0.3, 0.6}), 0.5);
  EXPECT_THROW(Auroc(std::vector<double>{1}, {}), Error);
}

TEST(Fpr95, Examples) {
  EXPECT_EQ(FprAt95Tpr(std::vector<double>(5, 0.9), std::vector<double>(5, 0.1)), 0.0);
  EXPECT_EQ(FprAt95Tpr(std::vector<double>(5, 0.4), std::vector<double>(7, 0.4)), 1.0);
}

TEST(Metrics, MatchBruteForceOracles) {
  std::mt19937_64 g(99);
  std::uniform_int_distribution<int> size(1, 50);
  for (int i = 0; i < 100; ++i) {
    const bool coarse = i % 2 == 0;
    const std::vector<double> a = Draw(g, size(g), coarse);
    const std::vector<double> b = Draw(g, size(g), coarse);
    EXPECT_NEAR(KsStatistic(a, b), oracle::Ks(a, b), 1e-12);
    EXPECT_NEAR(Auroc(a, b), oracle::PairwiseAuroc(a, b), 1e-12);
    EXPECT_NEAR(FprAt95Tpr(a, b), oracle::SweepFpr95(a, b), 1e-12);
  }
}

TEST(Metrics, Properties) {
  std::mt19937_64 g(5);
  for (int i = 0; i < 50; ++i) {
    const std::vector<double> a = Draw(g, 30, false), b = Draw(g, 40, false);
    EXPECT_EQ(KsStatistic(a, b), KsStatistic(b, a));
    EXPECT_NEAR(Auroc(a, b) + Auroc(b, a), 1.0, 1e-12);
    std::vector<double> ta, tb;
    for (double v : a) ta.push_back(std::exp(3 * v));
    for (double v : b) tb.push_back(std::exp(3 * v));
    EXPECT_EQ(KsStatistic(a, b), KsStatistic(ta, tb));
    EXPECT_EQ(Auroc(a, b), Auroc(ta, tb));
    std::vector<double> up = a;
    for (double& v : up) v += 0.1;
    EXPECT_LE(FprAt95Tpr(up, b), FprAt95Tpr(a, b));
  }
}

TEST(EvaluateGroups, RowsAndErrors) {
  const std::vector<ScoredGroup> groups = {
      {"correct", {0.9, 0.8, 0.95}}, {"ood", {0.1, 0.2}}, {"incorrect", {0.5}}};
  const auto rows = EvaluateGroups(groups, std::vector<GroupPair>{{"correct", "ood"}});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].dist, 1.0);
  EXPECT_EQ(rows[0].auroc, 1.0);
  EXPECT_EQ(rows[0].fpr95, 0.0);
  const std::vector<ScoredGroup> same = {{"a", {0.3, 0.3}}, {"b", {0.3, 0.3}}};
  const auto flat = EvaluateGroups(same, std::vector<GroupPair>{{"a", "b"}});
  EXPECT_EQ(flat[0].dist, 0.0);
  EXPECT_EQ(flat[0].auroc, 0.5);
  EXPECT_EQ(flat[0].fpr95, 1.0);
  EXPECT_THROW(EvaluateGroups(groups, std::vector<GroupPair>{{"correct", "nope"}}),
               Error);
  const std::vector<ScoredGroup> empty = {{"a", {}}, {"b", {1.0}}};
  EXPECT_THROW(EvaluateGroups(empty, std::vector<GroupPair>{{"a", "b"}}), Error);
}

TEST(EvaluateGroups, PairSets) {
  EXPECT_EQ(OverallPairs().size(), 3u);
  EXPECT_EQ(OverallPairs()[1], (GroupPair{"correct", "ood"}));
  EXPECT_EQ(PerturbationPairs()[2], (GroupPair{"acc_medium", "acc_low"}));
  EXPECT_EQ(RegionalPairs()[1],
            (GroupPair{"ood_familiar_pixels", "ood_unfamiliar_pixels"}));
}

TEST(BenchmarkTime, PositiveAndStable) {
  volatile double sink = 0;
  auto work = [&](size_t i) {
    for (int r = 0; r < 200; ++r) sink = sink + std::sqrt(double(i + r));
  };
  const double a = BenchmarkTime(work, 2000, 3);
  const double b = BenchmarkTime(work, 2000, 3);
  EXPECT_GT(a, 0.0);
  EXPECT_GT(b, 0.0);
  EXPECT_LT(std::max(a, b) / std::min(a, b), 5.0);
  // Doubling the workload roughly doubles total time.
  const double per_small = BenchmarkTime(work, 2000, 5);
  const double per_large = BenchmarkTime(work, 4000, 5);
  const double ratio = (per_large * 4000) / (per_small * 2000);
  EXPECT_GT(ratio, 1.5);
  EXPECT_LT(ratio, 3.0);
}

EvalReport SampleReport() {
  EvalReport r;
  r.AddRows("parce", OverallPairs(), {{1, 1, 0}, {0.5, 0.75, 0.25}, {0.125, 0.5, 1}});
  r.AddRows("msp", {OverallPairs()[0]}, {{0.2, 0.6, 0.9}});
  r.timing = {{"parce", 1.5e-7}, {"msp", 2e-8}};
  return r;
}

TEST(Report, JsonRoundTripAndSchema) {
  const EvalReport r = SampleReport();
  const auto doc = ReportToJson(r);
  EXPECT_EQ(doc["methods"], nlohmann::json({"parce", "msp"}));
  EXPECT_EQ(doc["pairs"].size(), 3u);
  EXPECT_EQ(doc["rows"].size(), 4u);
  EXPECT_EQ(doc["rows"][1]["auroc"], 0.75);
  EXPECT_FALSE(doc.contains("timing"));
  const auto timing = TimingToJson(r);
  EXPECT_EQ(timing["timing"][0]["method"], "parce");
  const nlohmann::json plain = nlohmann::json::parse(doc.dump());
  const nlohmann::json plain_timing = nlohmann::json::parse(timing.dump());
  const EvalReport back = ReportFromJson(plain, &plain_timing);
  EXPECT_EQ(ReportToJson(back).dump(), doc.dump());
  EXPECT_EQ(back.timing.size(), 2u);
  EXPECT_EQ(back.timing[1].sec_per_sample, 2e-8);
  ASSERT_NE(back.Find("msp", OverallPairs()[0]), nullptr);
  EXPECT_EQ(back.Find("msp", OverallPairs()[1]), nullptr);
  EXPECT_THROW(ReportFromJson(nlohmann::json::object()), Error);
}

TEST(Report, TableLayout) {
  EvalReport r = SampleReport();
  const std::string with_time = FormatTable(r);
  EXPECT_NE(with_time.find("correct/ood"), std::string::npos);
  EXPECT_NE(with_time.find("0.750"), std::string::npos);
  EXPECT_NE(with_time.find("sec/sample"), std::string::npos);
  EXPECT_NE(with_time.find("1.500e-07"), std::string::npos);
  r.timing.clear();
  EXPECT_EQ(FormatTable(r).find("sec/sample"), std::string::npos);
  EXPECT_EQ(FormatTable(r), FormatTable(r));
}

}  // namespace
}  // namespace parce::metrics
