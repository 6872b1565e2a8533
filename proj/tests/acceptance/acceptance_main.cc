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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.h"
#include "oracles.h"
#include "parce/core/competency.h"
#include "parce/io/corpus_files.h"
#include "parce/io/model_files.h"
#include "parce/io/pipeline.h"
#include "parce/io/records.h"
#include "parce/metrics/metrics.h"
#include "parce/regional/regional.h"
#include "parce/regional/segmentation.h"

namespace parce::acceptance {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> RandomProbs(std::mt19937_64& g, int k) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> p(k);
  double s = 0;
  for (double& v : p) s += v = u(g);
  for (double& v : p) v /= s;
  return p;
}

// Artifacts of the default run shared by the corpus-level criteria.
struct DefaultRun {
  fs::path dir;
  double seconds = 0;
  int exit_code = -1;
  std::string err;
  std::vector<SampleRecord> records;
  std::vector<SampleRecord> perturb_records;
  io::Calibration calibration;
  nlohmann::json report;
};

int RunAll(const fs::path& dir, std::string* err) {
  fs::remove_all(dir);
  const std::vector<std::string> args = {"parce", "--seed", "42", "--out", dir.string(),
                                         "run-all"};
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, errs;
  const int code = cli::Run(static_cast<int>(argv.size()), argv.data(), out, errs);
  *err = errs.str();
  return code;
}

Outcome MetricOracles() {
  const auto start = Clock::now();
  std::mt19937_64 g(2024);
  std::uniform_int_distribution<int> size(1, 50);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const bool coarse = i % 2 == 0;  // coarse values force ties
    auto draw = [&](int n) {
      std::vector<double> v(n);
      for (double& x : v) x = coarse ? std::floor(u(g) * 6) / 6 : u(g);
      return v;
    };
    const std::vector<double> a = draw(size(g)), b = draw(size(g));
    worst = std::max(worst, std::fabs(metrics::KsStatistic(a, b) - oracle::Ks(a, b)));
    worst = std::max(worst, std::fabs(metrics::Auroc(a, b) - oracle::PairwiseAuroc(a, b)));
    worst = std::max(worst, std::fabs(metrics::FprAt95Tpr(a, b) - oracle::SweepFpr95(a, b)));
  }
  const double secs = Seconds(start);
  return {worst <= 1e-12 && secs < 5.0,
          Fmt("max deviation %.3g over 100 instances (tol 1e-12), %.3f s (limit 5 s)",
              worst, secs)};
}

Outcome FormulaFidelity() {
  std::mt19937_64 g(77);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    const int k = 1 + i % 5;
    ClassLossStats s;
    std::vector<double> means, sds;
    for (int c = 0; c < k; ++c) {
      means.push_back(0.2 * u(g));
      sds.push_back(0.005 + 0.1 * u(g));
      s.per_class.push_back({means.back(), sds.back(), 10});
    }
    const std::vector<double> p = RandomProbs(g, k);
    const double loss = 0.6 * u(g), z = -5 + 10 * u(g);
    const double got = OverallCompetency(p, loss, s, z).value;
    worst = std::max(worst, std::fabs(got - oracle::Competency(p, loss, means, sds, z)));
  }
  return {worst <= 1e-9, Fmt("max deviation %.3g over 1000 inputs (tol 1e-9)", worst)};
}

Outcome CalibrationContract(const DefaultRun& run) {
  std::vector<SampleRecord> holdout;
  for (const auto& r : run.records) {
    if (r.split == Split::kHoldout) holdout.push_back(r);
  }
  if (holdout.empty()) return {false, "default run has no holdout records"};
  const ClassLossStats& s = run.calibration.stats;
  const CalibrationResult& cal = run.calibration.overall;
  std::vector<double> means, sds;
  for (const auto& e : s.per_class) {
    means.push_back(e.mean);
    sds.push_back(e.stddev);
  }
  double correct = 0;
  for (const auto& r : holdout) correct += PredictedClass(r.pred_probs) == *r.label;
  const double acc = correct / static_cast<double>(holdout.size());
  const CalibrationGrid grid{cal.grid_lo, cal.grid_hi, cal.grid_step};
  double best = std::numeric_limits<double>::infinity(), at_returned = best;
  for (int i = 0; i < grid.size(); ++i) {
    const double z = grid.at(i);
    double mean = 0;
    for (const auto& r : holdout) {
      mean += oracle::Competency(r.pred_probs, r.recon_loss, means, sds, z);
    }
    const double res = std::fabs(mean / static_cast<double>(holdout.size()) - acc);
    best = std::min(best, res);
    if (std::fabs(z - cal.z) < 1e-12) at_returned = res;
  }
  const bool global = at_returned <= best + 1e-9;
  return {global && cal.residual <= 0.05,
          Fmt("z = %.2f, residual %.4g (limit 0.05), grid minimum %.4g, "
              "residual at returned z %.4g",
              cal.z, cal.residual, best, at_returned)};
}

Outcome BoundsAndMonotonicity(const DefaultRun& run) {
  size_t scored = 0, violations = 0;
  const auto& cal = run.calibration;
  auto check = [&](const SampleRecord& r) {
    const CompetencyScore c = OverallCompetency(r, cal.stats, cal.overall.z);
    ++scored;
    if (!(c.value >= 0.0 && c.value <= c.max_prob && c.max_prob <= 1.0)) ++violations;
    if (cal.regional && r.segment_losses) {
      for (const auto& seg : *r.segment_losses) {
        const double v =
            regional::SegmentScore(r.pred_probs, seg.loss, *cal.regional_stats,
                                   cal.regional->z);
        ++scored;
        if (!(v >= 0.0 && v <= 1.0)) ++violations;
      }
    }
  };
  for (const auto& r : run.records) check(r);
  for (const auto& r : run.perturb_records) check(r);

  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> mean(0.0, 1.0), sd(0.05, 1.0), zz(-3.0, 3.0),
      d(0.01, 0.5);
  int non_monotone = 0;
  for (int i = 0; i < 1000; ++i) {
    const ClassLossStats::Entry e{mean(g), sd(g), 2};
    const double z = zz(g);
    const double a = 2 * e.mean + z * e.stddev + zz(g) * e.stddev;
    const double b = a + d(g) * e.stddev;
    if (!(ClassIdProbability(a, e, z) > ClassIdProbability(b, e, z))) ++non_monotone;
  }
  return {scored > 0 && violations == 0 && non_monotone == 0,
          Fmt("%.0f scores checked, %.0f bound violations, %.0f of 1000 triples not "
              "strictly decreasing",
              double(scored), double(violations), double(non_monotone))};
}

const nlohmann::json* FindRow(const nlohmann::json& report, const std::string& method,
                              const std::string& first, const std::string& second) {
  for (const auto& row : report["rows"]) {
    if (row["method"] == method && row["pair"][0] == first && row["pair"][1] == second) {
      return &row;
    }
  }
  return nullptr;
}

Outcome DirectionalOverall(const DefaultRun& run) {
  const auto* parce = FindRow(run.report, "parce", "correct", "ood");
  const auto* msp = FindRow(run.report, "msp", "correct", "ood");
  if (parce == nullptr || msp == nullptr) return {false, "correct/ood rows missing"};
  const double a = (*parce)["auroc"], b = (*msp)["auroc"];
  return {a >= 0.90 && a >= b && run.seconds < 120.0,
          Fmt("PaRCE correct/ood AUROC %.3f (min 0.90), MSP %.3f, pipeline %.1f s "
              "(limit 120 s)",
              a, b, run.seconds)};
}

Outcome DirectionalPerturbation(const DefaultRun& run) {
  const auto& cal = run.calibration;
  std::map<std::string, std::vector<const SampleRecord*>> sets;
  for (const auto& r : run.perturb_records) {
    sets[std::string(io::PerturbationKey(r.id))].push_back(&r);
  }
  std::map<std::string, std::pair<double, size_t>> bins;
  for (const auto& [key, members] : sets) {
    size_t correct = 0;
    for (const auto* r : members) correct += PredictedClass(r->pred_probs) == *r->label;
    const std::string bin(io::AccuracyBin(double(correct) / double(members.size())));
    for (const auto* r : members) {
      bins[bin].first += OverallCompetency(*r, cal.stats, cal.overall.z).value;
      ++bins[bin].second;
    }
  }
  auto mean = [&](const char* name) {
    const auto it = bins.find(name);
    return it == bins.end() || it->second.second == 0
               ? std::numeric_limits<double>::quiet_NaN()
               : it->second.first / double(it->second.second);
  };
  const double hi = mean("acc_high"), med = mean("acc_medium"), lo = mean("acc_low");
  std::string detail = Fmt("mean score high %.3f > medium %.3f > low %.3f", hi, med, lo);
  detail += Fmt(" over %.0f perturbation sets", double(sets.size()));
  return {hi > med && med > lo, detail};
}

Outcome DirectionalRegional(const DefaultRun& run) {
  const auto* row = FindRow(run.report, "parce_regional", "ood_familiar_pixels",
                            "ood_unfamiliar_pixels");
  if (row == nullptr) return {false, "regional familiar/unfamiliar row missing"};
  const double a = (*row)["auroc"];
  return {a >= 0.85, Fmt("regional familiar/unfamiliar AUROC %.3f (min 0.85)", a)};
}

Outcome SegmentationInvariants(const DefaultRun& run) {
  const refmodels::SyntheticCorpus corpus = io::ImportCorpus(run.dir / "data");
  const regional::SegmentParams params;
  size_t images = 0, failures = 0;
  for (const auto* set : {&corpus.test_id, &corpus.test_ood}) {
    for (const auto& item : *set) {
      const regional::SegmentMap m = regional::FelzenszwalbSegment(item.image, params);
      int64_t total = 0;
      bool ok = regional::IsRasterOrderedPartition(m) && regional::SegmentsAreConnected(m);
      for (int64_t s : m.SegmentSizes()) {
        ok = ok && s >= std::min<int64_t>(params.min_size, item.image.pixel_count());
        total += s;
      }
      ok = ok && total == item.image.pixel_count() &&
           m == regional::FelzenszwalbSegment(item.image, params);
      ++images;
      failures += !ok;
    }
  }
  refmodels::ImageTensor half(4, 4, 0.0);
  for (int y = 0; y < 4; ++y) {
    for (int x = 2; x < 4; ++x) {
      for (int c = 0; c < 3; ++c) half.at(y, x, c) = 1.0;
    }
  }
  const regional::SegmentMap hm = regional::FelzenszwalbSegment(half, {10.0, 1, 0.0});
  bool half_ok = hm.segment_count == 2;
  for (int i = 0; i < 16 && half_ok; ++i) half_ok = hm.labels[i] == (i % 4 < 2 ? 0 : 1);
  return {images > 0 && failures == 0 && half_ok,
          Fmt("%.0f corpus images, %.0f invariant failures, half/half instance ",
              double(images), double(failures)) +
              (half_ok ? "exact" : "wrong")};
}

Outcome StructuralConsistency(const DefaultRun& run) {
  double worst = 0;
  size_t cases = 0;
  auto compare = [&](const std::vector<double>& p, double loss, const ClassLossStats& s,
                     double z) {
    const regional::SegmentMap one{2, 2, {0, 0, 0, 0}, 1};
    const std::vector<SegmentLoss> losses = {{0, loss, 4}};
    const regional::CompetencyMap map = regional::RegionalCompetency(p, one, losses, s, z);
    const CompetencyScore overall = OverallCompetency(p, loss, s, z);
    for (double v : map.pixel_scores) {
      worst = std::max(worst, std::fabs(v * overall.max_prob - overall.value));
    }
    ++cases;
  };
  std::mt19937_64 g(31);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 1000; ++i) {
    ClassLossStats s;
    for (int c = 0; c < 3; ++c) s.per_class.push_back({0.1 * u(g), 0.01 + 0.05 * u(g), 4});
    compare(RandomProbs(g, 3), 0.4 * u(g), s, -5 + 10 * u(g));
  }
  for (const auto& r : run.records) {
    if (r.split == Split::kTest) {
      compare(r.pred_probs, r.recon_loss, run.calibration.stats, run.calibration.overall.z);
    }
  }
  return {worst <= 1e-12,
          Fmt("max deviation %.3g over %.0f cases (tol 1e-12)", worst, double(cases))};
}

int Main() {
  const fs::path root = fs::temp_directory_path() / "parce_acceptance";
  DefaultRun run;
  run.dir = root / "run_a";
  const auto start = Clock::now();
  run.exit_code = RunAll(run.dir, &run.err);
  run.seconds = Seconds(start);
  const bool have_run = run.exit_code == cli::kExitOk;
  if (have_run) {
    const io::RunLayout layout{run.dir};
    run.records = io::ReadRecords(layout.records());
    run.perturb_records = io::ReadRecords(layout.perturb_records());
    run.calibration = io::ReadCalibration(layout);
    run.report = io::ReadJson(layout.report());
  } else {
    std::fprintf(stderr, "default run failed (exit %d): %s\n", run.exit_code,
                 run.err.c_str());
  }

  auto needs_run = [&](std::function<Outcome(const DefaultRun&)> fn) {
    return [&run, have_run, fn]() -> Outcome {
      if (!have_run) return {false, "default run failed"};
      return fn(run);
    };
  };
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"metric-oracle-equivalence", MetricOracles},
      {"formula-fidelity", FormulaFidelity},
      {"calibration-contract", needs_run(CalibrationContract)},
      {"score-bounds-and-monotonicity", needs_run(BoundsAndMonotonicity)},
      {"directional-overall-ood", needs_run(DirectionalOverall)},
      {"directional-perturbation-bins", needs_run(DirectionalPerturbation)},
      {"directional-regional-pixels", needs_run(DirectionalRegional)},
      {"segmentation-invariants", needs_run(SegmentationInvariants)},
      {"structural-consistency", needs_run(StructuralConsistency)},
      {"determinism",
       [&]() -> Outcome {
         if (!have_run) return {false, "default run failed"};
         std::string err;
         const fs::path second = root / "run_b";
         if (RunAll(second, &err) != cli::kExitOk) return {false, "second run failed"};
         const std::string a = Slurp(run.dir / "report.json");
         const std::string b = Slurp(second / "report.json");
         return {!a.empty() && a == b,
                 Fmt("two seed-42 runs, report.json %.0f bytes, ", double(a.size())) +
                     (a == b ? "byte-identical" : "different")};
       }},
  };

  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace parce::acceptance

int main() { return parce::acceptance::Main(); }
