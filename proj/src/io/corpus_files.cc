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

#include "parce/io/corpus_files.h"

#include <string>
#include <vector>

#include "json_fields.h"
#include "parce/error.h"
#include "parce/imageio/imageio.h"
#include "parce/io/model_files.h"

namespace parce::io {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using refmodels::CorpusItem;

constexpr const char* kSplitNames[] = {"train", "holdout", "test_id", "test_ood"};

std::vector<CorpusItem>* SplitOf(refmodels::SyntheticCorpus& c,
                                 const std::string& name) {
  if (name == "train") return &c.train;
  if (name == "holdout") return &c.holdout;
  if (name == "test_id") return &c.test_id;
  if (name == "test_ood") return &c.test_ood;
  return nullptr;
}

}  // namespace

void ExportCorpus(const std::filesystem::path& dir,
                  const refmodels::SyntheticCorpus& corpus) {
  ordered_json meta;
  meta["seed"] = corpus.seed;
  meta["classes"] = corpus.classes.names();
  WriteJson(dir / "corpus.json", meta);

  const std::vector<CorpusItem>* splits[] = {&corpus.train, &corpus.holdout,
                                             &corpus.test_id, &corpus.test_ood};
  std::string manifest;
  for (int s = 0; s < 4; ++s) {
    for (const CorpusItem& item : *splits[s]) {
      const std::string image_rel = "images/" + item.id + ".png";
      imageio::WriteFile(dir / image_rel,
                         imageio::EncodePng(imageio::ToRaw(item.image)));
      ordered_json line;
      line["id"] = item.id;
      line["split"] = kSplitNames[s];
      line["label"] = item.label;
      line["ood"] = item.ood;
      line["image"] = image_rel;
      if (item.anomaly_mask.empty()) {
        line["mask"] = nullptr;
      } else {
        const std::string mask_rel = "masks/" + item.id + ".png";
        imageio::WriteFile(
            dir / mask_rel,
            imageio::EncodePng(imageio::MaskToRaw(
                item.anomaly_mask, item.image.width, item.image.height)));
        line["mask"] = mask_rel;
      }
      manifest += line.dump();
      manifest += '\n';
    }
  }
  imageio::WriteFile(dir / "manifest.jsonl", manifest);
}

refmodels::SyntheticCorpus ImportCorpus(const std::filesystem::path& dir) {
  refmodels::SyntheticCorpus corpus;
  const json meta = ReadJson(dir / "corpus.json");
  corpus.seed = static_cast<uint64_t>(
      internal::IntegerField(meta, "seed", "corpus.json"));
  const json& names = internal::Field(meta, "classes", "corpus.json");
  Require(names.is_array(), ErrorKind::kSchema,
          "corpus.json: field 'classes' must be an array");
  std::vector<std::string> class_names;
  for (const auto& n : names) {
    class_names.push_back(internal::AsString(n, "classes", "corpus.json"));
  }
  corpus.classes = ClassSet(std::move(class_names));

  const std::vector<uint8_t> bytes = imageio::ReadFile(dir / "manifest.jsonl");
  const std::string text(bytes.begin(), bytes.end());
  size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "manifest.jsonl line " + std::to_string(line_no);
    json v;
    try {
      v = json::parse(line);
    } catch (const json::parse_error& e) {
      Fail(ErrorKind::kParse, where + ": " + e.what());
    }
    CorpusItem item;
    item.id = internal::StringField(v, "id", where);
    const std::string split = internal::StringField(v, "split", where);
    std::vector<CorpusItem>* target = SplitOf(corpus, split);
    Require(target != nullptr, ErrorKind::kSchema,
            where + ": unknown split '" + split + "'");
    item.label = static_cast<int>(internal::IntegerField(v, "label", where));
    Require(item.label >= 0 && item.label < corpus.classes.size(),
            ErrorKind::kSchema, where + ": label out of range");
    item.ood = internal::AsBool(internal::Field(v, "ood", where), "ood", where);
    const std::string image_rel = internal::StringField(v, "image", where);
    item.image = imageio::FromRaw(
        imageio::DecodePng(imageio::ReadFile(dir / image_rel), 3));
    if (const json* mask = internal::OptionalField(v, "mask")) {
      const std::string mask_rel = internal::AsString(*mask, "mask", where);
      const imageio::RawImage raw =
          imageio::DecodePng(imageio::ReadFile(dir / mask_rel), 1);
      Require(raw.width == item.image.width && raw.height == item.image.height,
              ErrorKind::kSchema, where + ": mask size does not match image");
      item.anomaly_mask = imageio::MaskFromRaw(raw);
    }
    target->push_back(std::move(item));
  }
  return corpus;
}

}  // namespace parce::io
