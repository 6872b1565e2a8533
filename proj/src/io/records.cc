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

#include "parce/io/records.h"

#include <string>

#include "json_fields.h"
#include "parce/error.h"
#include "parce/imageio/imageio.h"

namespace parce::io {

using internal::AsInteger;
using internal::AsNumbers;
using internal::Field;
using internal::OptionalField;
using nlohmann::json;
using nlohmann::ordered_json;

ordered_json RecordToJson(const SampleRecord& r) {
  ordered_json out;
  out["id"] = r.id;
  out["split"] = SplitName(r.split);
  out["label"] = r.label ? ordered_json(*r.label) : ordered_json(nullptr);
  out["ood"] = r.ood;
  out["pred_probs"] = r.pred_probs;
  if (r.logits) out["logits"] = *r.logits;
  if (r.features) out["features"] = *r.features;
  out["recon_loss"] = r.recon_loss;
  if (r.segment_losses) {
    ordered_json segs = ordered_json::array();
    for (const auto& s : *r.segment_losses) {
      ordered_json e;
      e["segment_id"] = s.segment_id;
      e["loss"] = s.loss;
      e["pixel_count"] = s.pixel_count;
      segs.push_back(std::move(e));
    }
    out["segment_losses"] = std::move(segs);
  }
  return out;
}

SampleRecord RecordFromJson(const json& v, const std::string& where) {
  Require(v.is_object(), ErrorKind::kSchema,
          where + ": a record must be a JSON object");
  SampleRecord r;
  r.id = internal::StringField(v, "id", where);
  try {
    r.split = ParseSplit(internal::StringField(v, "split", where));
  } catch (const Error& e) {
    Fail(ErrorKind::kSchema, where + ": field 'split': " + e.what());
  }
  const json& label = Field(v, "label", where);
  if (!label.is_null()) r.label = static_cast<int>(AsInteger(label, "label", where));
  r.ood = internal::AsBool(Field(v, "ood", where), "ood", where);
  r.pred_probs = AsNumbers(Field(v, "pred_probs", where), "pred_probs", where);
  if (const json* l = OptionalField(v, "logits")) {
    r.logits = AsNumbers(*l, "logits", where);
  }
  if (const json* f = OptionalField(v, "features")) {
    r.features = AsNumbers(*f, "features", where);
  }
  r.recon_loss = internal::NumberField(v, "recon_loss", where);
  if (const json* segs = OptionalField(v, "segment_losses")) {
    Require(segs->is_array(), ErrorKind::kSchema,
            where + ": field 'segment_losses' must be an array");
    std::vector<SegmentLoss> losses;
    for (size_t i = 0; i < segs->size(); ++i) {
      const std::string w = where + ": segment_losses[" + std::to_string(i) + "]";
      const json& e = (*segs)[i];
      SegmentLoss s;
      s.segment_id = static_cast<int>(internal::IntegerField(e, "segment_id", w));
      s.loss = internal::NumberField(e, "loss", w);
      s.pixel_count = internal::IntegerField(e, "pixel_count", w);
      losses.push_back(s);
    }
    r.segment_losses = std::move(losses);
  }
  try {
    ValidateRecord(r);
  } catch (const Error& e) {
    Fail(e.kind(), where + ": " + e.what());
  }
  return r;
}

std::string SerializeRecords(const std::vector<SampleRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += RecordToJson(r).dump();
    out += '\n';
  }
  return out;
}

std::vector<SampleRecord> ParseRecords(std::string_view text) {
  std::vector<SampleRecord> out;
  size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    json value;
    try {
      value = json::parse(line);
    } catch (const json::parse_error& e) {
      Fail(ErrorKind::kParse, where + ": " + e.what());
    }
    out.push_back(RecordFromJson(value, where));
  }
  return out;
}

std::vector<SampleRecord> ReadRecords(const std::filesystem::path& path) {
  const std::vector<uint8_t> bytes = imageio::ReadFile(path);
  try {
    return ParseRecords(
        std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  } catch (const Error& e) {
    Fail(e.kind(), path.string() + ": " + e.what());
  }
}

void WriteRecords(const std::filesystem::path& path,
                  const std::vector<SampleRecord>& records) {
  imageio::WriteFile(path, SerializeRecords(records));
}

}  // namespace parce::io
