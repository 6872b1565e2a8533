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

#include "parce/error.h"

namespace parce {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return "invalid_argument";
    case ErrorKind::kInvalidRecord:
      return "invalid_record";
    case ErrorKind::kInvalidStats:
      return "invalid_stats";
    case ErrorKind::kInsufficientData:
      return "insufficient_data";
    case ErrorKind::kTrainingFailure:
      return "training_failure";
    case ErrorKind::kParse:
      return "parse_error";
    case ErrorKind::kSchema:
      return "schema_violation";
    case ErrorKind::kIo:
      return "io_error";
  }
  return "unknown";
}

bool Error::is_validation() const {
  switch (kind_) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kInvalidRecord:
    case ErrorKind::kParse:
    case ErrorKind::kSchema:
      return true;
    default:
      return false;
  }
}

}  // namespace parce
