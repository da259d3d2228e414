// Copyright 2026 The groupscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef GROUPSCOPE_IMAGE_H_
#define GROUPSCOPE_IMAGE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "groupscope/geometry.h"

namespace groupscope {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
};

// Interleaved 8-bit image with 1 (gray) or 3 (RGB) channels, row-major.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<std::uint8_t> pixels;

  static Image Filled(int width, int height, int channels, std::uint8_t value);

  ImageGeometry geometry() const { return {width, height}; }
  std::uint8_t& at(int x, int y, int c = 0) {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint8_t at(int x, int y, int c = 0) const {
    return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  bool operator==(const Image&) const = default;
};

// Decodes PNG (8-bit gray, gray+alpha, RGB, RGBA) or binary PGM/PPM with
// maxval <= 255. Alpha channels are dropped. Throws kMissingFile when the
// file cannot be opened and kUnsupportedFormat for anything else.
Image ReadImage(const std::filesystem::path& path);

std::vector<std::uint8_t> EncodePng(const Image& image);
void WritePng(const Image& image, const std::filesystem::path& path);
void WritePgm(const Image& image, const std::filesystem::path& path);

Image Crop(const Image& image, const PixelRect& rect);
Image GrayToRgb(const Image& gray);

// Draws the 1-pixel outline of `rect` (half-open) clipped to the image.
void DrawRectangle(Image& image, const PixelRect& rect, Rgb color);
void FillRectangle(Image& image, const PixelRect& rect, Rgb color);

std::string Base64Encode(const std::vector<std::uint8_t>& bytes);

}  // namespace groupscope

#endif  // GROUPSCOPE_IMAGE_H_
