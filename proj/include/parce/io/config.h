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

// Run configuration. A config file is JSON or TOML with the same nested
// layout; every field is optional and falls back to the defaults below.
// Unknown keys are rejected so typos do not pass silently.

#ifndef PARCE_IO_CONFIG_H_
#define PARCE_IO_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "parce/core/types.h"
#include "parce/refmodels/autoencoder.h"
#include "parce/refmodels/classifier.h"
#include "parce/refmodels/corpus.h"
#include "parce/refmodels/inpainter.h"
#include "parce/refmodels/perturb.h"
#include "parce/regional/regional.h"
#include "parce/regional/segmentation.h"

namespace parce::io {

// Scoring methods known to the pipeline.
inline constexpr std::string_view kMethodParce = "parce";
inline constexpr std::string_view kMethodParceRegional = "parce_regional";
inline constexpr std::string_view kMethodMsp = "msp";
inline constexpr std::string_view kMethodTemperature = "temperature";
inline constexpr std::string_view kMethodEnergy = "energy";
inline constexpr std::string_view kMethodKlMatching = "kl_matching";
inline constexpr std::string_view kMethodMahalanobis = "mahalanobis";
inline constexpr std::string_view kMethodKnn = "knn";

const std::vector<std::string>& AllMethods();
bool IsKnownMethod(std::string_view name);

struct PerturbationConfig {
  std::vector<refmodels::Perturbation> properties;  // default: all five
  std::vector<int> levels;                          // default: 0..20

  PerturbationConfig();
};

struct BaselineConfig {
  int knn_k = 10;
  double mahalanobis_ridge = 1e-3;
  CalibrationGrid temperature_grid{0.05, 10.0, 0.05};
};

struct RunConfig {
  uint64_t seed = 42;
  refmodels::CorpusSizes corpus;
  refmodels::ClassifierConfig classifier;
  // Seeds inside these two are ignored; they are derived from `seed`.
  refmodels::AutoencoderConfig autoencoder;
  refmodels::InpainterConfig inpainter;
  regional::SegmentParams segmentation;
  CalibrationGrid calibration;
  regional::RegionalOptions regional;
  PerturbationConfig perturbation;
  BaselineConfig baselines;
  std::vector<std::string> methods = AllMethods();
  int benchmark_repetitions = 3;
  std::string output_dir = "parce_run";

  // Throws kInvalidArgument on out-of-range values or unknown methods.
  void Validate() const;
};

nlohmann::ordered_json ConfigToJson(const RunConfig& config);
// Overlays `value` on the defaults. Throws kSchema for unknown keys or
// mistyped values.
RunConfig ConfigFromJson(const nlohmann::json& value);

// Parses the TOML subset used by config files: [table] and [a.b] headers,
// bare or quoted keys, dotted keys, strings, integers, floats, booleans,
// and (possibly multi-line) arrays of those. Throws kParse with the line
// number.
nlohmann::json ParseToml(std::string_view text);

// JSON when the first non-blank character is '{', TOML otherwise.
RunConfig ParseConfig(std::string_view text);
RunConfig LoadConfig(const std::filesystem::path& path);

}  // namespace parce::io

#endif  // PARCE_IO_CONFIG_H_
