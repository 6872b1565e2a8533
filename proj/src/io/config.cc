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

#include "parce/io/config.h"

#include <algorithm>
#include <set>
#include <string>

#include "json_fields.h"
#include "parce/error.h"
#include "parce/imageio/imageio.h"

namespace parce::io {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Reads the keys of one table and rejects any that were not consumed.
class Section {
 public:
  Section(const json& value, std::string where)
      : value_(value), where_(std::move(where)) {
    Require(value.is_object(), ErrorKind::kSchema,
            where_ + ": expected a table");
  }

  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, v] : value_.items()) {
      Require(seen_.count(key) > 0, ErrorKind::kSchema,
              where_ + ": unknown key '" + key + "'");
    }
  }

  const json* Get(const std::string& key) {
    seen_.insert(key);
    auto it = value_.find(key);
    return it == value_.end() ? nullptr : &*it;
  }

  template <typename T>
  void Number(const std::string& key, T& out) {
    if (const json* v = Get(key)) {
      if constexpr (std::is_integral_v<T>) {
        const int64_t i = internal::AsInteger(*v, key, where_);
        if constexpr (std::is_unsigned_v<T>) {
          Require(i >= 0, ErrorKind::kSchema,
                  where_ + ": field '" + key + "' must be non-negative");
        }
        out = static_cast<T>(i);
      } else {
        out = static_cast<T>(internal::AsNumber(*v, key, where_));
      }
    }
  }

  void Bool(const std::string& key, bool& out) {
    if (const json* v = Get(key)) out = internal::AsBool(*v, key, where_);
  }

  void String(const std::string& key, std::string& out) {
    if (const json* v = Get(key)) out = internal::AsString(*v, key, where_);
  }

  const std::string& where() const { return where_; }

 private:
  const json& value_;
  std::string where_;
  std::set<std::string> seen_;
};

void ReadGrid(Section& parent, const std::string& key, CalibrationGrid& grid) {
  if (const json* v = parent.Get(key)) {
    Section s(*v, parent.where() + "." + key);
    s.Number("lo", grid.lo);
    s.Number("hi", grid.hi);
    s.Number("step", grid.step);
  }
}

ordered_json GridToJson(const CalibrationGrid& g) {
  ordered_json out;
  out["lo"] = g.lo;
  out["hi"] = g.hi;
  out["step"] = g.step;
  return out;
}

}  // namespace

const std::vector<std::string>& AllMethods() {
  static const std::vector<std::string> kAll = {
      std::string(kMethodParce),       std::string(kMethodParceRegional),
      std::string(kMethodMsp),         std::string(kMethodTemperature),
      std::string(kMethodEnergy),      std::string(kMethodKlMatching),
      std::string(kMethodMahalanobis), std::string(kMethodKnn)};
  return kAll;
}

bool IsKnownMethod(std::string_view name) {
  const auto& all = AllMethods();
  return std::find(all.begin(), all.end(), name) != all.end();
}

PerturbationConfig::PerturbationConfig()
    : properties(refmodels::kAllPerturbations.begin(),
                 refmodels::kAllPerturbations.end()) {
  for (int i = 0; i < refmodels::kPerturbationLevels; ++i) levels.push_back(i);
}

void RunConfig::Validate() const {
  auto check = [](bool ok, const std::string& msg) {
    Require(ok, ErrorKind::kInvalidArgument, "config: " + msg);
  };
  check(corpus.train >= 1 && corpus.holdout >= 1 && corpus.test_id >= 1 &&
            corpus.test_ood >= 1,
        "corpus sizes must be >= 1");
  check(classifier.learning_rate > 0 && classifier.epochs >= 1 &&
            classifier.l2 >= 0,
        "invalid classifier settings");
  check(autoencoder.latent_dim >= 1 && autoencoder.learning_rate > 0 &&
            autoencoder.epochs >= 1 && autoencoder.batch_size >= 1,
        "invalid autoencoder settings");
  check(inpainter.latent_dim >= 1 && inpainter.learning_rate > 0 &&
            inpainter.epochs >= 1 && inpainter.batch_size >= 1,
        "invalid inpainter settings");
  check(segmentation.k > 0 && segmentation.min_size >= 1 &&
            segmentation.smooth_sigma >= 0,
        "invalid segmentation settings");
  calibration.Validate();
  baselines.temperature_grid.Validate();
  check(baselines.temperature_grid.lo > 0, "temperature grid must be positive");
  check(baselines.knn_k >= 1, "knn_k must be >= 1");
  check(baselines.mahalanobis_ridge >= 0, "mahalanobis_ridge must be >= 0");
  check(!methods.empty(), "method list is empty");
  for (const auto& m : methods) {
    check(IsKnownMethod(m), "unknown method '" + m + "'");
  }
  std::set<std::string> unique(methods.begin(), methods.end());
  check(unique.size() == methods.size(), "method list has duplicates");
  for (int l : perturbation.levels) {
    check(l >= 0 && l < refmodels::kPerturbationLevels,
          "perturbation level out of range");
  }
  check(benchmark_repetitions >= 1, "benchmark_repetitions must be >= 1");
  check(!output_dir.empty(), "output_dir is empty");
}

ordered_json ConfigToJson(const RunConfig& c) {
  ordered_json out;
  out["seed"] = c.seed;
  out["corpus"] = {{"train", c.corpus.train},
                   {"holdout", c.corpus.holdout},
                   {"test_id", c.corpus.test_id},
                   {"test_ood", c.corpus.test_ood}};
  out["classifier"] = {{"learning_rate", c.classifier.learning_rate},
                       {"epochs", c.classifier.epochs},
                       {"l2", c.classifier.l2}};
  out["autoencoder"] = {{"latent_dim", c.autoencoder.latent_dim},
                        {"learning_rate", c.autoencoder.learning_rate},
                        {"epochs", c.autoencoder.epochs},
                        {"batch_size", c.autoencoder.batch_size}};
  out["inpainter"] = {{"latent_dim", c.inpainter.latent_dim},
                      {"learning_rate", c.inpainter.learning_rate},
                      {"epochs", c.inpainter.epochs},
                      {"batch_size", c.inpainter.batch_size}};
  out["segmentation"] = {{"k", c.segmentation.k},
                         {"min_size", c.segmentation.min_size},
                         {"smooth_sigma", c.segmentation.smooth_sigma}};
  out["calibration"] = GridToJson(c.calibration);
  out["regional"] = {{"apply_max_prob", c.regional.apply_max_prob}};
  ordered_json props = ordered_json::array();
  for (auto p : c.perturbation.properties) {
    props.push_back(std::string(refmodels::PerturbationName(p)));
  }
  out["perturbation"] = {{"properties", props}, {"levels", c.perturbation.levels}};
  out["baselines"] = {{"knn_k", c.baselines.knn_k},
                      {"mahalanobis_ridge", c.baselines.mahalanobis_ridge},
                      {"temperature_grid", GridToJson(c.baselines.temperature_grid)}};
  out["methods"] = c.methods;
  out["benchmark_repetitions"] = c.benchmark_repetitions;
  out["output_dir"] = c.output_dir;
  return out;
}

RunConfig ConfigFromJson(const json& value) {
  RunConfig c;
  Section root(value, "config");
  root.Number("seed", c.seed);
  if (const json* v = root.Get("corpus")) {
    Section s(*v, "config.corpus");
    s.Number("train", c.corpus.train);
    s.Number("holdout", c.corpus.holdout);
    s.Number("test_id", c.corpus.test_id);
    s.Number("test_ood", c.corpus.test_ood);
  }
  if (const json* v = root.Get("classifier")) {
    Section s(*v, "config.classifier");
    s.Number("learning_rate", c.classifier.learning_rate);
    s.Number("epochs", c.classifier.epochs);
    s.Number("l2", c.classifier.l2);
  }
  if (const json* v = root.Get("autoencoder")) {
    Section s(*v, "config.autoencoder");
    s.Number("latent_dim", c.autoencoder.latent_dim);
    s.Number("learning_rate", c.autoencoder.learning_rate);
    s.Number("epochs", c.autoencoder.epochs);
    s.Number("batch_size", c.autoencoder.batch_size);
  }
  if (const json* v = root.Get("inpainter")) {
    Section s(*v, "config.inpainter");
    s.Number("latent_dim", c.inpainter.latent_dim);
    s.Number("learning_rate", c.inpainter.learning_rate);
    s.Number("epochs", c.inpainter.epochs);
    s.Number("batch_size", c.inpainter.batch_size);
  }
  if (const json* v = root.Get("segmentation")) {
    Section s(*v, "config.segmentation");
    s.Number("k", c.segmentation.k);
    s.Number("min_size", c.segmentation.min_size);
    s.Number("smooth_sigma", c.segmentation.smooth_sigma);
  }
  ReadGrid(root, "calibration", c.calibration);
  if (const json* v = root.Get("regional")) {
    Section s(*v, "config.regional");
    s.Bool("apply_max_prob", c.regional.apply_max_prob);
  }
  if (const json* v = root.Get("perturbation")) {
    Section s(*v, "config.perturbation");
    if (const json* props = s.Get("properties")) {
      Require(props->is_array(), ErrorKind::kSchema,
              "config.perturbation: field 'properties' must be an array");
      c.perturbation.properties.clear();
      for (const auto& p : *props) {
        const std::string name =
            internal::AsString(p, "properties", "config.perturbation");
        try {
          c.perturbation.properties.push_back(refmodels::ParsePerturbation(name));
        } catch (const Error& e) {
          Fail(ErrorKind::kSchema, std::string("config.perturbation: ") + e.what());
        }
      }
    }
    if (const json* levels = s.Get("levels")) {
      Require(levels->is_array(), ErrorKind::kSchema,
              "config.perturbation: field 'levels' must be an array");
      c.perturbation.levels.clear();
      for (const auto& l : *levels) {
        c.perturbation.levels.push_back(static_cast<int>(
            internal::AsInteger(l, "levels", "config.perturbation")));
      }
    }
  }
  if (const json* v = root.Get("baselines")) {
    Section s(*v, "config.baselines");
    s.Number("knn_k", c.baselines.knn_k);
    s.Number("mahalanobis_ridge", c.baselines.mahalanobis_ridge);
    ReadGrid(s, "temperature_grid", c.baselines.temperature_grid);
  }
  if (const json* v = root.Get("methods")) {
    Require(v->is_array(), ErrorKind::kSchema,
            "config: field 'methods' must be an array");
    c.methods.clear();
    for (const auto& m : *v) {
      c.methods.push_back(internal::AsString(m, "methods", "config"));
    }
  }
  root.Number("benchmark_repetitions", c.benchmark_repetitions);
  root.String("output_dir", c.output_dir);
  return c;
}

RunConfig ParseConfig(std::string_view text) {
  const size_t first = text.find_first_not_of(" \t\r\n");
  json value;
  if (first != std::string_view::npos && text[first] == '{') {
    try {
      value = json::parse(text);
    } catch (const json::parse_error& e) {
      Fail(ErrorKind::kParse, std::string("config: ") + e.what());
    }
  } else {
    value = ParseToml(text);
  }
  RunConfig config = ConfigFromJson(value);
  config.Validate();
  return config;
}

RunConfig LoadConfig(const std::filesystem::path& path) {
  const std::vector<uint8_t> bytes = imageio::ReadFile(path);
  try {
    return ParseConfig(
        std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  } catch (const Error& e) {
    Fail(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace parce::io
