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

#ifndef PARCE_ERROR_H_
#define PARCE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace parce {

enum class ErrorKind {
  kInvalidArgument,
  kInvalidRecord,
  kInvalidStats,
  kInsufficientData,
  kTrainingFailure,
  kParse,
  kSchema,
  kIo,
};

std::string_view ErrorKindName(ErrorKind kind);

// All library failures are reported through this exception. The CLI maps
// validation kinds to exit code 1 and the rest to exit code 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  // True for failures caused by bad user input rather than a failed run.
  bool is_validation() const;

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void Require(bool condition, ErrorKind kind,
                    const std::string& message) {
  if (!condition) Fail(kind, message);
}

}  // namespace parce

#endif  // PARCE_ERROR_H_
