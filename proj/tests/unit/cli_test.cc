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
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli.h"
#include "json.hpp"

namespace parce::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "parce");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = Run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  EXPECT_TRUE(in.good()) << p;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("parce_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path Data(const std::string& name) { return fs::path(PARCE_TEST_DATA_DIR) / name; }

// Last JSON line written to stderr.
nlohmann::json LastErrorLine(const std::string& err) {
  std::istringstream in(err);
  std::string line, last;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '{') last = line;
  }
  return nlohmann::json::parse(last);
}

TEST(Cli, UnknownFlagIsUsageError) {
  const Result r = RunCli({"--bogus", "report"});
  EXPECT_EQ(r.code, kExitValidation);
  EXPECT_EQ(LastErrorLine(r.err)["error"], "usage");
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(RunCli({}).code, kExitValidation);
  EXPECT_EQ(RunCli({"--format", "xml", "report"}).code, kExitValidation);
}

TEST(Cli, HelpExitsCleanly) {
  const Result r = RunCli({"--help"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("run-all"), std::string::npos);
}

TEST(Cli, ErrorsAreJsonOnStderr) {
  const fs::path dir = TempDir("errors");
  const Result missing = RunCli({"--out", dir.string(), "evaluate", "--records",
                                 (dir / "none.jsonl").string()});
  EXPECT_EQ(missing.code, kExitRuntime);
  const nlohmann::json e = LastErrorLine(missing.err);
  EXPECT_EQ(e["error"], "io_error");
  EXPECT_EQ(e["stage"], "evaluate");
  EXPECT_TRUE(e["message"].is_string());

  std::ofstream(dir / "bad.jsonl") << "{\"id\": 1}\n";
  const Result bad = RunCli({"--out", dir.string(), "evaluate", "--records",
                             (dir / "bad.jsonl").string()});
  EXPECT_EQ(bad.code, kExitValidation);
  EXPECT_EQ(LastErrorLine(bad.err)["error"], "schema_violation");

  std::ofstream(dir / "bad.toml") << "seed = \"x\"\n";
  const Result cfg = RunCli({"--config", (dir / "bad.toml").string(), "--out",
                             dir.string(), "gen-data"});
  EXPECT_EQ(cfg.code, kExitValidation);
  EXPECT_TRUE(cfg.out.empty());
}

TEST(Cli, GoldenFixtureReport) {
  const fs::path dir = TempDir("golden");
  const Result r = RunCli({"--out", dir.string(), "evaluate", "--records",
                           Data("fixture_records.jsonl").string(), "--perturb-records",
                           Data("fixture_perturb_records.jsonl").string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(Slurp(dir / "report.json"), Slurp(Data("golden_report.json")));
  // Printed output is the report plus timing.
  const nlohmann::json printed = nlohmann::json::parse(r.out);
  EXPECT_TRUE(printed.contains("timing"));
  EXPECT_EQ(printed["rows"], nlohmann::json::parse(Slurp(dir / "report.json"))["rows"]);

  const Result table = RunCli({"--out", dir.string(), "--format", "table", "report"});
  ASSERT_EQ(table.code, kExitOk) << table.err;
  EXPECT_NE(table.out.find("correct/ood"), std::string::npos);
  // The stored table omits timing; the printed one merges it back in.
  EXPECT_NE(table.out.find("sec/sample"), std::string::npos);
  EXPECT_EQ(Slurp(dir / "report.txt").find("sec/sample"), std::string::npos);
}

TEST(Cli, StagedRunMatchesRunAll) {
  const fs::path root = TempDir("staged");
  const fs::path config = root / "small.toml";
  std::ofstream(config) << "seed = 5\n"
                           "[corpus]\ntrain = 60\nholdout = 30\ntest_id = 15\n"
                           "test_ood = 15\n"
                           "[autoencoder]\nepochs = 20\n"
                           "[inpainter]\nepochs = 10\n"
                           "[perturbation]\nlevels = [0, 5, 10, 15, 20]\n";
  const std::string staged = (root / "staged").string();
  const std::string whole = (root / "whole").string();
  for (const char* stage : {"gen-data", "train", "score", "calibrate", "segment", "map",
                            "perturb", "evaluate"}) {
    const std::vector<std::string> args =
        std::string(stage) == "gen-data"
            ? std::vector<std::string>{"--config", config.string(), "--out", staged, stage}
            : std::vector<std::string>{"--out", staged, stage};
    const Result r = RunCli(args);
    ASSERT_EQ(r.code, kExitOk) << stage << ": " << r.err;
  }
  const Result all = RunCli({"--config", config.string(), "--out", whole, "run-all"});
  ASSERT_EQ(all.code, kExitOk) << all.err;
  for (const char* file : {"config.json", "records.jsonl", "perturb_records.jsonl",
                           "stats.json", "calibration.json", "regional_stats.json",
                           "regional_calibration.json", "report.json", "report.txt",
                           "models/classifier.json", "models/autoencoder.json",
                           "models/inpainter.json", "data/corpus.json"}) {
    const fs::path a = fs::path(staged) / file, b = fs::path(whole) / file;
    const std::string sa = Slurp(a), sb = Slurp(b);
    if (std::string(file) == "config.json") {
      auto ja = nlohmann::json::parse(sa), jb = nlohmann::json::parse(sb);
      ja.erase("output_dir");
      jb.erase("output_dir");
      EXPECT_EQ(ja, jb);
    } else {
      EXPECT_TRUE(sa == sb) << file << " differs";
    }
  }
  size_t maps = 0;
  for (const auto& entry : fs::directory_iterator(fs::path(whole) / "maps")) {
    ++maps;
    EXPECT_TRUE(Slurp(entry.path()) ==
                Slurp(fs::path(staged) / "maps" / entry.path().filename()));
  }
  EXPECT_EQ(maps, 15u);
  size_t segments = 0;
  for ([[maybe_unused]] const auto& e :
       fs::directory_iterator(fs::path(whole) / "segments")) {
    ++segments;
  }
  EXPECT_EQ(segments, 30u);
}

}  // namespace
}  // namespace parce::cli
