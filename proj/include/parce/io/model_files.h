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

// JSON documents for fitted models, loss statistics and calibration
// results. Matrices are stored as {rows, cols, data} with row-major data.
// All conversions round-trip exactly.

#ifndef PARCE_IO_MODEL_FILES_H_
#define PARCE_IO_MODEL_FILES_H_

#include <filesystem>
#include <utility>

#include "json.hpp"
#include "parce/core/types.h"
#include "parce/refmodels/autoencoder.h"
#include "parce/refmodels/classifier.h"
#include "parce/refmodels/inpainter.h"

namespace parce::io {

nlohmann::ordered_json ClassifierToJson(const refmodels::LinearClassifier& m);
refmodels::LinearClassifier ClassifierFromJson(const nlohmann::json& v);

nlohmann::ordered_json AutoencoderToJson(const refmodels::LinearAutoencoder& m);
refmodels::LinearAutoencoder AutoencoderFromJson(const nlohmann::json& v);

nlohmann::ordered_json InpainterToJson(const refmodels::Inpainter& m);
refmodels::Inpainter InpainterFromJson(const nlohmann::json& v);

// {classes: [names], per_class: [{name, mean, stddev, sample_count}]}.
nlohmann::ordered_json StatsToJson(const ClassLossStats& stats,
                                   const ClassSet& classes);
std::pair<ClassLossStats, ClassSet> StatsFromJson(const nlohmann::json& v);

nlohmann::ordered_json CalibrationToJson(const CalibrationResult& result);
CalibrationResult CalibrationFromJson(const nlohmann::json& v);

// Pretty-printed (2-space indent) with a trailing newline.
void WriteJson(const std::filesystem::path& path,
               const nlohmann::ordered_json& value);
// Throws kParse naming the file on malformed input.
nlohmann::json ReadJson(const std::filesystem::path& path);

}  // namespace parce::io

#endif  // PARCE_IO_MODEL_FILES_H_
