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

// PNG (8-bit gray/RGB) and binary PGM (16-bit) codecs plus whole-file I/O.

#ifndef PARCE_IMAGEIO_IMAGEIO_H_
#define PARCE_IMAGEIO_IMAGEIO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "parce/refmodels/image.h"

namespace parce::imageio {

struct RawImage {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 (gray) or 3 (RGB)
  std::vector<uint8_t> data;  // row-major, interleaved
};

std::vector<uint8_t> EncodePng(const RawImage& image);
// Decodes to the requested channel count (1 or 3). Throws kParse.
RawImage DecodePng(std::span<const uint8_t> bytes, int channels);

// "P5 <w> <h> 65535" with big-endian samples.
std::vector<uint8_t> EncodePgm16(int width, int height,
                                 std::span<const uint16_t> values);
std::vector<uint16_t> DecodePgm16(std::span<const uint8_t> bytes, int* width,
                                  int* height);

// ImageTensor <-> 8-bit RGB. Values are rounded half-up after clamping.
RawImage ToRaw(const refmodels::ImageTensor& image);
refmodels::ImageTensor FromRaw(const RawImage& raw);

// Mask <-> 8-bit gray PNG (0 / 255).
RawImage MaskToRaw(const refmodels::PixelMask& mask, int width, int height);
refmodels::PixelMask MaskFromRaw(const RawImage& raw);

std::vector<uint8_t> ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::span<const uint8_t> bytes);
void WriteFile(const std::filesystem::path& path, std::string_view text);

}  // namespace parce::imageio

#endif  // PARCE_IMAGEIO_IMAGEIO_H_
