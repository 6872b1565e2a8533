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

#include "parce/imageio/imageio.h"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "parce/error.h"

namespace parce::imageio {

std::vector<uint8_t> EncodePng(const RawImage& image) {
  Require(image.channels == 1 || image.channels == 3,
          ErrorKind::kInvalidArgument, "PNG encoder supports 1 or 3 channels");
  Require(image.width > 0 && image.height > 0 &&
              image.data.size() == static_cast<size_t>(image.width) *
                                       image.height * image.channels,
          ErrorKind::kInvalidArgument, "PNG encoder: buffer size mismatch");
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  img.width = image.width;
  img.height = image.height;
  img.format = image.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&img, nullptr, &size, 0, image.data.data(), 0,
                                 nullptr)) {
    Fail(ErrorKind::kIo, std::string("PNG encode failed: ") + img.message);
  }
  std::vector<uint8_t> out(size);
  if (!png_image_write_to_memory(&img, out.data(), &size, 0, image.data.data(),
                                 0, nullptr)) {
    Fail(ErrorKind::kIo, std::string("PNG encode failed: ") + img.message);
  }
  out.resize(size);
  return out;
}

RawImage DecodePng(std::span<const uint8_t> bytes, int channels) {
  Require(channels == 1 || channels == 3, ErrorKind::kInvalidArgument,
          "PNG decoder supports 1 or 3 channels");
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    Fail(ErrorKind::kParse, std::string("PNG decode failed: ") + img.message);
  }
  img.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  RawImage out;
  out.width = static_cast<int>(img.width);
  out.height = static_cast<int>(img.height);
  out.channels = channels;
  out.data.resize(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, out.data.data(), 0, nullptr)) {
    png_image_free(&img);
    Fail(ErrorKind::kParse, std::string("PNG decode failed: ") + img.message);
  }
  return out;
}

std::vector<uint8_t> EncodePgm16(int width, int height,
                                 std::span<const uint16_t> values) {
  Require(width > 0 && height > 0 &&
              values.size() == static_cast<size_t>(width) * height,
          ErrorKind::kInvalidArgument, "PGM encoder: buffer size mismatch");
  const std::string header = "P5\n" + std::to_string(width) + " " +
                             std::to_string(height) + "\n65535\n";
  std::vector<uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + values.size() * 2);
  for (uint16_t v : values) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v & 0xff));
  }
  return out;
}

std::vector<uint16_t> DecodePgm16(std::span<const uint8_t> bytes, int* width,
                                  int* height) {
  // Header tokens are separated by single whitespace characters; comments
  // are not supported.
  size_t pos = 0;
  auto token = [&]() {
    while (pos < bytes.size() && std::isspace(bytes[pos])) ++pos;
    std::string t;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) {
      t.push_back(static_cast<char>(bytes[pos++]));
    }
    return t;
  };
  Require(token() == "P5", ErrorKind::kParse, "PGM: expected P5 header");
  int w = 0, h = 0, maxval = 0;
  try {
    w = std::stoi(token());
    h = std::stoi(token());
    maxval = std::stoi(token());
  } catch (const std::exception&) {
    Fail(ErrorKind::kParse, "PGM: malformed header");
  }
  Require(w > 0 && h > 0 && maxval == 65535, ErrorKind::kParse,
          "PGM: only 16-bit images are supported");
  ++pos;  // single whitespace after maxval
  const size_t n = static_cast<size_t>(w) * h;
  Require(bytes.size() >= pos + 2 * n, ErrorKind::kParse, "PGM: truncated");
  std::vector<uint16_t> values(n);
  for (size_t i = 0; i < n; ++i) {
    values[i] = static_cast<uint16_t>((bytes[pos + 2 * i] << 8) |
                                      bytes[pos + 2 * i + 1]);
  }
  *width = w;
  *height = h;
  return values;
}

RawImage ToRaw(const refmodels::ImageTensor& image) {
  RawImage raw;
  raw.width = image.width;
  raw.height = image.height;
  raw.channels = 3;
  raw.data.resize(image.pixels.size());
  for (size_t i = 0; i < image.pixels.size(); ++i) {
    raw.data[i] = static_cast<uint8_t>(
        std::floor(std::clamp(image.pixels[i], 0.0, 1.0) * 255.0 + 0.5));
  }
  return raw;
}

refmodels::ImageTensor FromRaw(const RawImage& raw) {
  Require(raw.channels == 3, ErrorKind::kInvalidArgument,
          "expected an RGB image");
  refmodels::ImageTensor image(raw.height, raw.width);
  for (size_t i = 0; i < raw.data.size(); ++i) image.pixels[i] = raw.data[i] / 255.0;
  return image;
}

RawImage MaskToRaw(const refmodels::PixelMask& mask, int width, int height) {
  Require(mask.size() == static_cast<size_t>(width) * height,
          ErrorKind::kInvalidArgument, "mask size mismatch");
  RawImage raw{width, height, 1, {}};
  raw.data.resize(mask.size());
  for (size_t i = 0; i < mask.size(); ++i) raw.data[i] = mask[i] ? 255 : 0;
  return raw;
}

refmodels::PixelMask MaskFromRaw(const RawImage& raw) {
  refmodels::PixelMask mask(raw.data.size());
  for (size_t i = 0; i < raw.data.size(); ++i) mask[i] = raw.data[i] >= 128;
  return mask;
}

std::vector<uint8_t> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  Require(static_cast<bool>(in), ErrorKind::kIo,
          "cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void WriteFile(const std::filesystem::path& path,
               std::span<const uint8_t> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  Require(static_cast<bool>(out), ErrorKind::kIo,
          "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  Require(static_cast<bool>(out), ErrorKind::kIo,
          "write to '" + path.string() + "' failed");
}

void WriteFile(const std::filesystem::path& path, std::string_view text) {
  WriteFile(path, std::span<const uint8_t>(
                      reinterpret_cast<const uint8_t*>(text.data()), text.size()));
}

}  // namespace parce::imageio
