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

// JSON Lines record files. One SampleRecord per line:
//
//   {"id":..., "split":"train"|"holdout"|"test", "label":int|null,
//    "ood":bool, "pred_probs":[...], "logits":[...]?, "features":[...]?,
//    "recon_loss":number, "segment_losses":[{segment_id, loss,
//    pixel_count}]?}
//
// Numbers are written as shortest round-trip decimals, so write followed by
// read is the identity. Unknown keys are ignored on input.

#ifndef PARCE_IO_RECORDS_H_
#define PARCE_IO_RECORDS_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "parce/core/types.h"

namespace parce::io {

nlohmann::ordered_json RecordToJson(const SampleRecord& record);

// Throws kSchema naming the field, or kInvalidRecord when the values break
// a record invariant. `where` prefixes the message (e.g. "line 3").
SampleRecord RecordFromJson(const nlohmann::json& value,
                            const std::string& where = "record");

std::string SerializeRecords(const std::vector<SampleRecord>& records);

// Parses a whole JSON Lines document. Blank lines are skipped; errors carry
// the 1-based line number.
std::vector<SampleRecord> ParseRecords(std::string_view text);

std::vector<SampleRecord> ReadRecords(const std::filesystem::path& path);
void WriteRecords(const std::filesystem::path& path,
                  const std::vector<SampleRecord>& records);

}  // namespace parce::io

#endif  // PARCE_IO_RECORDS_H_
