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

#ifndef PARCE_TOOLS_CLI_H_
#define PARCE_TOOLS_CLI_H_

#include <ostream>

namespace parce::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

// Runs the `parce` command line. Results go to `out`; errors and warnings
// go to `err` as single-line JSON objects.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace parce::cli

#endif  // PARCE_TOOLS_CLI_H_
