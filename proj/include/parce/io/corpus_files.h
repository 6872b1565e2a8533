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

// On-disk corpus layout:
//
//   <dir>/corpus.json        {seed, classes}
//   <dir>/manifest.jsonl     {id, split, label, ood, image, mask}
//   <dir>/images/<id>.png    8-bit RGB
//   <dir>/masks/<id>.png     8-bit gray anomaly mask (OOD items only)
//
// `split` is one of train, holdout, test_id, test_ood. Paths are relative
// to <dir>.

#ifndef PARCE_IO_CORPUS_FILES_H_
#define PARCE_IO_CORPUS_FILES_H_

#include <filesystem>

#include "parce/refmodels/corpus.h"

namespace parce::io {

void ExportCorpus(const std::filesystem::path& dir,
                  const refmodels::SyntheticCorpus& corpus);

// Throws kParse / kSchema naming the manifest line, kIo for missing files.
refmodels::SyntheticCorpus ImportCorpus(const std::filesystem::path& dir);

}  // namespace parce::io

#endif  // PARCE_IO_CORPUS_FILES_H_
