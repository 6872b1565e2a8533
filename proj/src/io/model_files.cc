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

#include "parce/io/model_files.h"

#include <string>
#include <vector>

#include "json_fields.h"
#include "parce/error.h"
#include "parce/imageio/imageio.h"

namespace parce::io {
namespace {

using internal::Field;
using internal::IntegerField;
using internal::NumberField;
using nlohmann::json;
using nlohmann::ordered_json;

ordered_json MatrixToJson(const Eigen::MatrixXd& m) {
  ordered_json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  std::vector<double> data;
  data.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  out["data"] = std::move(data);
  return out;
}

Eigen::MatrixXd MatrixFromJson(const json& v, const std::string& where) {
  const int64_t rows = IntegerField(v, "rows", where);
  const int64_t cols = IntegerField(v, "cols", where);
  Require(rows >= 0 && cols >= 0, ErrorKind::kSchema,
          where + ": negative matrix shape");
  const std::vector<double> data =
      internal::AsNumbers(Field(v, "data", where), "data", where);
  Require(static_cast<int64_t>(data.size()) == rows * cols, ErrorKind::kSchema,
          where + ": field 'data' has the wrong length");
  Eigen::MatrixXd m(rows, cols);
  size_t i = 0;
  for (int64_t r = 0; r < rows; ++r) {
    for (int64_t c = 0; c < cols; ++c) m(r, c) = data[i++];
  }
  return m;
}

Eigen::VectorXd VectorFromJson(const json& v, const std::string& name,
                               const std::string& where) {
  const std::vector<double> data = internal::AsNumbers(v, name, where);
  return Eigen::Map<const Eigen::VectorXd>(data.data(), data.size());
}

std::vector<double> ToStd(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

void CheckKind(const json& v, const char* kind) {
  const std::string k = internal::StringField(v, "kind", kind);
  Require(k == kind, ErrorKind::kSchema,
          std::string("expected a '") + kind + "' document, found '" + k + "'");
}

}  // namespace

ordered_json ClassifierToJson(const refmodels::LinearClassifier& m) {
  ordered_json out;
  out["kind"] = "linear_classifier";
  out["weights"] = MatrixToJson(m.weights());
  out["bias"] = ToStd(m.bias());
  out["input_mean"] = ToStd(m.input_mean());
  return out;
}

refmodels::LinearClassifier ClassifierFromJson(const json& v) {
  const std::string w = "linear_classifier";
  CheckKind(v, "linear_classifier");
  return refmodels::LinearClassifier(
      MatrixFromJson(Field(v, "weights", w), w + ".weights"),
      VectorFromJson(Field(v, "bias", w), "bias", w),
      VectorFromJson(Field(v, "input_mean", w), "input_mean", w));
}

ordered_json AutoencoderToJson(const refmodels::LinearAutoencoder& m) {
  ordered_json out;
  out["kind"] = "linear_autoencoder";
  out["encoder"] = MatrixToJson(m.encoder());
  out["encoder_bias"] = ToStd(m.encoder_bias());
  out["decoder"] = MatrixToJson(m.decoder());
  out["decoder_bias"] = ToStd(m.decoder_bias());
  out["input_mean"] = ToStd(m.input_mean());
  return out;
}

refmodels::LinearAutoencoder AutoencoderFromJson(const json& v) {
  const std::string w = "linear_autoencoder";
  CheckKind(v, "linear_autoencoder");
  return refmodels::LinearAutoencoder(
      MatrixFromJson(Field(v, "encoder", w), w + ".encoder"),
      VectorFromJson(Field(v, "encoder_bias", w), "encoder_bias", w),
      MatrixFromJson(Field(v, "decoder", w), w + ".decoder"),
      VectorFromJson(Field(v, "decoder_bias", w), "decoder_bias", w),
      VectorFromJson(Field(v, "input_mean", w), "input_mean", w));
}

ordered_json InpainterToJson(const refmodels::Inpainter& m) {
  ordered_json out;
  out["kind"] = "inpainter";
  out["height"] = m.height();
  out["width"] = m.width();
  out["encoder"] = MatrixToJson(m.encoder());
  out["encoder_bias"] = ToStd(m.encoder_bias());
  out["decoder"] = MatrixToJson(m.decoder());
  out["decoder_bias"] = ToStd(m.decoder_bias());
  out["input_mean"] = ToStd(m.input_mean());
  return out;
}

refmodels::Inpainter InpainterFromJson(const json& v) {
  const std::string w = "inpainter";
  CheckKind(v, "inpainter");
  return refmodels::Inpainter(
      static_cast<int>(IntegerField(v, "height", w)),
      static_cast<int>(IntegerField(v, "width", w)),
      MatrixFromJson(Field(v, "encoder", w), w + ".encoder"),
      VectorFromJson(Field(v, "encoder_bias", w), "encoder_bias", w),
      MatrixFromJson(Field(v, "decoder", w), w + ".decoder"),
      VectorFromJson(Field(v, "decoder_bias", w), "decoder_bias", w),
      VectorFromJson(Field(v, "input_mean", w), "input_mean", w));
}

ordered_json StatsToJson(const ClassLossStats& stats, const ClassSet& classes) {
  Require(stats.class_count() == classes.size(), ErrorKind::kInvalidArgument,
          "stats and class set differ in size");
  ordered_json out;
  out["classes"] = classes.names();
  ordered_json per = ordered_json::array();
  for (int c = 0; c < stats.class_count(); ++c) {
    ordered_json e;
    e["name"] = classes.name(c);
    e["mean"] = stats.at(c).mean;
    e["stddev"] = stats.at(c).stddev;
    e["sample_count"] = stats.at(c).sample_count;
    per.push_back(std::move(e));
  }
  out["per_class"] = std::move(per);
  return out;
}

std::pair<ClassLossStats, ClassSet> StatsFromJson(const json& v) {
  const std::string w = "stats";
  const json& names = Field(v, "classes", w);
  Require(names.is_array(), ErrorKind::kSchema,
          w + ": field 'classes' must be an array");
  std::vector<std::string> class_names;
  for (const auto& n : names) {
    class_names.push_back(internal::AsString(n, "classes", w));
  }
  ClassSet classes(std::move(class_names));
  const json& per = Field(v, "per_class", w);
  Require(per.is_array() && static_cast<int>(per.size()) == classes.size(),
          ErrorKind::kSchema,
          w + ": field 'per_class' must have one entry per class");
  ClassLossStats stats;
  for (size_t i = 0; i < per.size(); ++i) {
    const std::string we = w + ".per_class[" + std::to_string(i) + "]";
    ClassLossStats::Entry e;
    e.mean = NumberField(per[i], "mean", we);
    e.stddev = NumberField(per[i], "stddev", we);
    e.sample_count = IntegerField(per[i], "sample_count", we);
    Require(e.stddev > 0.0, ErrorKind::kInvalidStats,
            we + ": stddev must be positive");
    stats.per_class.push_back(e);
  }
  return {std::move(stats), std::move(classes)};
}

ordered_json CalibrationToJson(const CalibrationResult& r) {
  ordered_json out;
  out["z"] = r.z;
  out["residual"] = r.residual;
  out["grid_lo"] = r.grid_lo;
  out["grid_hi"] = r.grid_hi;
  out["grid_step"] = r.grid_step;
  out["implied_percentile"] = r.implied_percentile;
  out["accuracy"] = r.accuracy;
  out["mean_scores"] = r.mean_scores;
  return out;
}

CalibrationResult CalibrationFromJson(const json& v) {
  const std::string w = "calibration";
  CalibrationResult r;
  r.z = NumberField(v, "z", w);
  r.residual = NumberField(v, "residual", w);
  r.grid_lo = NumberField(v, "grid_lo", w);
  r.grid_hi = NumberField(v, "grid_hi", w);
  r.grid_step = NumberField(v, "grid_step", w);
  r.implied_percentile = NumberField(v, "implied_percentile", w);
  r.accuracy = NumberField(v, "accuracy", w);
  r.mean_scores =
      internal::AsNumbers(Field(v, "mean_scores", w), "mean_scores", w);
  return r;
}

void WriteJson(const std::filesystem::path& path, const ordered_json& value) {
  imageio::WriteFile(path, value.dump(2) + "\n");
}

json ReadJson(const std::filesystem::path& path) {
  const std::vector<uint8_t> bytes = imageio::ReadFile(path);
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    Fail(ErrorKind::kParse, path.string() + ": " + e.what());
  }
}

}  // namespace parce::io
