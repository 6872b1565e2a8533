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

#include "cli.h"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "parce/error.h"
#include "parce/io/config.h"
#include "parce/io/corpus_files.h"
#include "parce/io/model_files.h"
#include "parce/io/pipeline.h"
#include "parce/io/records.h"
#include "parce/metrics/report.h"

namespace parce::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct GlobalOptions {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::string out_dir;
  std::string format = "json";
  bool verbose = false;
};

struct EvaluateOptions {
  std::string records;
  std::string perturb_records;
  std::string data;
};

void EmitLine(std::ostream& err, const char* level, std::string_view msg) {
  ordered_json line;
  line["level"] = level;
  line["message"] = std::string(msg);
  err << line.dump() << '\n';
}

void EmitError(std::ostream& err, const std::string& kind,
               const std::string& stage, const std::string& message) {
  ordered_json e;
  e["error"] = kind;
  if (!stage.empty()) e["stage"] = stage;
  e["message"] = message;
  err << e.dump() << '\n';
}

// The effective configuration: --config, else <out>/config.json when a
// previous stage wrote one, else defaults; --seed and --out override.
io::RunConfig ResolveConfig(const GlobalOptions& g, bool use_run_dir) {
  io::RunConfig config;
  if (!g.config_path.empty()) {
    config = io::LoadConfig(g.config_path);
  } else if (use_run_dir && !g.out_dir.empty() &&
             fs::exists(fs::path(g.out_dir) / "config.json")) {
    config = io::LoadConfig(fs::path(g.out_dir) / "config.json");
  }
  if (g.seed.has_value()) config.seed = *g.seed;
  if (!g.out_dir.empty()) config.output_dir = g.out_dir;
  config.Validate();
  return config;
}

void PrintReport(std::ostream& out, const metrics::EvalReport& report,
                 const std::string& format) {
  if (format == "table") {
    out << metrics::FormatTable(report);
    return;
  }
  ordered_json doc = metrics::ReportToJson(report);
  doc["timing"] = metrics::TimingToJson(report)["timing"];
  out << doc.dump(2) << '\n';
}

void PrintDone(std::ostream& out, const std::string& stage,
               const io::RunLayout& layout, const std::string& format) {
  if (format == "table") {
    out << stage << ": ok (" << layout.root.string() << ")\n";
    return;
  }
  ordered_json doc;
  doc["stage"] = stage;
  doc["status"] = "ok";
  doc["out"] = layout.root.string();
  out << doc.dump() << '\n';
}

ClassSet ClassesOf(const io::RunLayout& layout,
                   std::span<const SampleRecord> records) {
  if (fs::exists(layout.data() / "corpus.json")) {
    const nlohmann::json meta = io::ReadJson(layout.data() / "corpus.json");
    return ClassSet(meta.at("classes").get<std::vector<std::string>>());
  }
  Require(!records.empty(), ErrorKind::kInsufficientData, "no records");
  return ClassSet::Anonymous(static_cast<int>(records.front().pred_probs.size()));
}

int Dispatch(const std::string& stage, const GlobalOptions& g,
             const EvaluateOptions& ev, std::ostream& out, const io::LogFn& log) {
  const bool fresh = stage == "gen-data" || stage == "run-all";
  const io::RunConfig config = ResolveConfig(g, !fresh);
  const io::RunLayout layout{config.output_dir};

  if (stage == "run-all") {
    PrintReport(out, io::RunPipeline(config, log), g.format);
    return kExitOk;
  }
  if (stage == "gen-data") {
    io::WriteJson(layout.config(), io::ConfigToJson(config));
    io::ExportCorpus(layout.data(), io::GenerateCorpus(config));
  } else if (stage == "train") {
    io::WriteModels(layout,
                    io::TrainModels(config, io::ImportCorpus(layout.data()), log));
  } else if (stage == "score") {
    io::WriteRecords(layout.records(),
                     io::ScoreCorpus(config, io::ReadModels(layout),
                                     io::ImportCorpus(layout.data())));
  } else if (stage == "calibrate") {
    const auto records = io::ReadRecords(layout.records());
    io::WriteCalibration(layout, io::CalibrateRecords(
                                     config, records, ClassesOf(layout, records)));
  } else if (stage == "segment") {
    io::WriteSegments(layout,
                      io::SegmentTestImages(config, io::ImportCorpus(layout.data())));
  } else if (stage == "map") {
    const io::Calibration cal = io::ReadCalibration(layout);
    Require(cal.regional.has_value(), ErrorKind::kInsufficientData,
            "no regional calibration in " + layout.root.string());
    io::WriteMaps(config, layout, io::ReadRecords(layout.records()),
                  io::ImportCorpus(layout.data()), cal);
  } else if (stage == "perturb") {
    io::WriteRecords(layout.perturb_records(),
                     io::PerturbationSweep(config, io::ReadModels(layout),
                                           io::ImportCorpus(layout.data())));
  } else if (stage == "evaluate") {
    // Explicit --records runs on those files alone; otherwise the run
    // directory supplies records, perturbed records and the corpus.
    const bool fixture = !ev.records.empty();
    const auto records =
        io::ReadRecords(fixture ? fs::path(ev.records) : layout.records());
    std::vector<SampleRecord> perturbed;
    if (!ev.perturb_records.empty()) {
      perturbed = io::ReadRecords(ev.perturb_records);
    } else if (!fixture && fs::exists(layout.perturb_records())) {
      perturbed = io::ReadRecords(layout.perturb_records());
    }
    std::optional<refmodels::SyntheticCorpus> corpus;
    fs::path data = ev.data;
    if (data.empty() && !fixture) data = layout.data();
    if (!data.empty() && fs::exists(data / "manifest.jsonl")) {
      corpus = io::ImportCorpus(data);
    }
    const metrics::EvalReport report = io::Evaluate(
        config, {records, perturbed, corpus ? &*corpus : nullptr}, log);
    io::WriteReport(layout, report);
    PrintReport(out, report, g.format);
    return kExitOk;
  } else if (stage == "report") {
    std::optional<nlohmann::json> timing;
    if (fs::exists(layout.timing())) timing = io::ReadJson(layout.timing());
    PrintReport(out,
                metrics::ReportFromJson(io::ReadJson(layout.report()),
                                        timing ? &*timing : nullptr),
                g.format);
    return kExitOk;
  }
  PrintDone(out, stage, layout, g.format);
  return kExitOk;
}

}  // namespace

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Probabilistic and reconstruction-based competency estimation toolkit",
               "parce"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  EvaluateOptions ev;
  app.add_option("--config", g.config_path, "Run configuration (TOML or JSON)");
  app.add_option_function<uint64_t>(
      "--seed", [&g](const uint64_t& s) { g.seed = s; }, "Run seed");
  app.add_option("--out", g.out_dir, "Run directory");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "table"}));
  app.add_flag("-v,--verbose", g.verbose, "Log progress to stderr");

  const std::vector<std::pair<const char*, const char*>> stages = {
      {"gen-data", "Generate and export the synthetic corpus"},
      {"train", "Train classifier, autoencoder and inpainter"},
      {"score", "Score every corpus image into records.jsonl"},
      {"calibrate", "Fit loss statistics and calibrate z"},
      {"segment", "Segment test images into PGM label maps"},
      {"map", "Render competency maps for OOD test images"},
      {"perturb", "Score the perturbation sweep"},
      {"evaluate", "Score all methods and write the report"},
      {"report", "Print a stored report"},
      {"run-all", "Run every stage"},
  };
  for (const auto& [name, help] : stages) {
    CLI::App* sub = app.add_subcommand(name, help);
    if (std::string(name) == "evaluate") {
      sub->add_option("--records", ev.records,
                      "Record file to evaluate instead of the run directory");
      sub->add_option("--perturb-records", ev.perturb_records,
                      "Perturbed record file");
      sub->add_option("--data", ev.data, "Corpus directory for pixel evaluation");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    EmitError(err, "usage", "", e.what());
    err << app.help();
    return kExitValidation;
  }

  const std::string stage = app.get_subcommands().front()->get_name();
  const io::LogFn log = [&err, &g](std::string_view level, std::string_view msg) {
    if (level != "info" || g.verbose) EmitLine(err, std::string(level).c_str(), msg);
  };
  try {
    return Dispatch(stage, g, ev, out, log);
  } catch (const Error& e) {
    EmitError(err, std::string(ErrorKindName(e.kind())), stage, e.what());
    return e.is_validation() ? kExitValidation : kExitRuntime;
  } catch (const std::exception& e) {
    EmitError(err, "runtime", stage, e.what());
    return kExitRuntime;
  }
}

}  // namespace parce::cli
