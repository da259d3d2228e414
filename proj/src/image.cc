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


#include "groupscope/image.h"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>

#include <fmt/format.h>

#include "groupscope/error.h"

namespace groupscope {
namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G',
                                           '\r', '\n', 0x1a, '\n'};

[[noreturn]] void Unsupported(const std::filesystem::path& path,
                              std::string_view why) {
  throw Error(ErrorCode::kUnsupportedFormat,
              fmt::format("{}: {}", path.string(), why));
}

struct ReadCursor {
  const std::vector<std::uint8_t>* bytes;
  std::size_t offset;
};

void PngReadFromVector(png_structp png, png_bytep out, png_size_t count) {
  auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cursor->offset + count > cursor->bytes->size()) {
    png_error(png, "truncated PNG stream");
  }
  std::memcpy(out, cursor->bytes->data() + cursor->offset, count);
  cursor->offset += count;
}

void PngErrorFn(png_structp png, png_const_charp message) {
  auto* slot = static_cast<std::string*>(png_get_error_ptr(png));
  if (slot != nullptr) *slot = message;
  png_longjmp(png, 1);
}

void PngWarningFn(png_structp, png_const_charp) {}

Image DecodePng(const std::vector<std::uint8_t>& bytes,
                const std::filesystem::path& path) {
  std::string error;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &error,
                                           PngErrorFn, PngWarningFn);
  if (png == nullptr) Unsupported(path, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  ReadCursor cursor{&bytes, 0};
  Image image;
  std::vector<png_bytep> rows;
  volatile bool bad_depth = false;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    Unsupported(path, error.empty() ? "corrupt PNG" : error);
  }
  png_set_read_fn(png, &cursor, PngReadFromVector);
  png_read_info(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (bit_depth > 8) {
    bad_depth = true;
  } else {
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
      png_set_expand_gray_1_2_4_to_8(png);
    }
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);
    image.width = static_cast<int>(png_get_image_width(png, info));
    image.height = static_cast<int>(png_get_image_height(png, info));
    image.channels = png_get_channels(png, info);
    const std::size_t stride = png_get_rowbytes(png, info);
    image.pixels.resize(stride * image.height);
    rows.resize(image.height);
    for (int y = 0; y < image.height; ++y) {
      rows[y] = image.pixels.data() + stride * y;
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (bad_depth) Unsupported(path, "only 8-bit PNG images are supported");
  if (image.channels != 1 && image.channels != 3) {
    Unsupported(path, fmt::format("{} channels", image.channels));
  }
  return image;
}

// Reads the next whitespace-delimited header token, skipping comments.
std::string NextPnmToken(const std::vector<std::uint8_t>& bytes,
                         std::size_t& pos) {
  while (pos < bytes.size()) {
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(bytes[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  std::string token;
  while (pos < bytes.size() && !std::isspace(bytes[pos])) {
    token.push_back(static_cast<char>(bytes[pos++]));
  }
  return token;
}

Image DecodePnm(const std::vector<std::uint8_t>& bytes,
                const std::filesystem::path& path) {
  std::size_t pos = 0;
  const std::string magic = NextPnmToken(bytes, pos);
  if (magic != "P5" && magic != "P6") {
    Unsupported(path, "only binary PGM (P5) and PPM (P6) are supported");
  }
  int width = 0, height = 0, maxval = 0;
  try {
    width = std::stoi(NextPnmToken(bytes, pos));
    height = std::stoi(NextPnmToken(bytes, pos));
    maxval = std::stoi(NextPnmToken(bytes, pos));
  } catch (const std::exception&) {
    Unsupported(path, "malformed PNM header");
  }
  if (width < 1 || height < 1) Unsupported(path, "empty PNM image");
  if (maxval < 1 || maxval > 255) {
    Unsupported(path, "only 8-bit PNM images are supported");
  }
  ++pos;  // single whitespace after maxval
  Image image;
  image.width = width;
  image.height = height;
  image.channels = magic == "P5" ? 1 : 3;
  const std::size_t size =
      static_cast<std::size_t>(width) * height * image.channels;
  if (pos + size > bytes.size()) Unsupported(path, "truncated PNM data");
  image.pixels.assign(bytes.begin() + pos, bytes.begin() + pos + size);
  return image;
}

void PngWriteToVector(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void PngFlushNoop(png_structp) {}

void WriteBytes(const std::vector<std::uint8_t>& bytes,
                const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot open {} for writing", path.string()));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw Error(ErrorCode::kIoError,
                fmt::format("failed writing {}", path.string()));
  }
}

}  // namespace

Image Image::Filled(int width, int height, int channels, std::uint8_t value) {
  Image image;
  image.width = width;
  image.height = height;
  image.channels = channels;
  image.pixels.assign(static_cast<std::size_t>(width) * height * channels,
                      value);
  return image;
}

Image ReadImage(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingFile,
                fmt::format("cannot open {}", path.string()));
  }
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() >= 8 &&
      std::equal(std::begin(kPngSignature), std::end(kPngSignature),
                 bytes.begin())) {
    return DecodePng(bytes, path);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P') return DecodePnm(bytes, path);
  Unsupported(path, "unrecognized image format");
}

std::vector<std::uint8_t> EncodePng(const Image& image) {
  if (image.channels != 1 && image.channels != 3) {
    throw Error(ErrorCode::kUnsupportedFormat,
                fmt::format("cannot encode {}-channel image", image.channels));
  }
  std::vector<std::uint8_t> out;
  std::string error;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &error,
                                            PngErrorFn, PngWarningFn);
  if (png == nullptr) throw Error(ErrorCode::kIoError, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  std::vector<png_bytep> rows(image.height);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIoError, "PNG encoding failed: " + error);
  }
  png_set_write_fn(png, &out, PngWriteToVector, PngFlushNoop);
  png_set_IHDR(png, info, image.width, image.height, 8,
               image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  const std::size_t stride =
      static_cast<std::size_t>(image.width) * image.channels;
  for (int y = 0; y < image.height; ++y) {
    rows[y] = const_cast<png_bytep>(image.pixels.data() + stride * y);
  }
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void WritePng(const Image& image, const std::filesystem::path& path) {
  WriteBytes(EncodePng(image), path);
}

void WritePgm(const Image& image, const std::filesystem::path& path) {
  if (image.channels != 1) {
    throw Error(ErrorCode::kUnsupportedFormat, "PGM requires a gray image");
  }
  const std::string header =
      fmt::format("P5\n{} {}\n255\n", image.width, image.height);
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.insert(bytes.end(), image.pixels.begin(), image.pixels.end());
  WriteBytes(bytes, path);
}

Image Crop(const Image& image, const PixelRect& rect) {
  if (rect.empty() || rect.x0 < 0 || rect.y0 < 0 || rect.x1 > image.width ||
      rect.y1 > image.height) {
    throw Error(ErrorCode::kEmptyRegion,
                fmt::format("crop [{}, {}, {}, {}) outside {}x{} image",
                            rect.x0, rect.y0, rect.x1, rect.y1, image.width,
                            image.height));
  }
  Image out = Image::Filled(rect.width(), rect.height(), image.channels, 0);
  const std::size_t row_bytes =
      static_cast<std::size_t>(rect.width()) * image.channels;
  for (int y = 0; y < rect.height(); ++y) {
    const auto* src = &image.pixels[(static_cast<std::size_t>(rect.y0 + y) *
                                         image.width +
                                     rect.x0) *
                                    image.channels];
    std::memcpy(&out.pixels[y * row_bytes], src, row_bytes);
  }
  return out;
}

Image GrayToRgb(const Image& gray) {
  if (gray.channels == 3) return gray;
  Image out = Image::Filled(gray.width, gray.height, 3, 0);
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) {
    out.pixels[3 * i] = out.pixels[3 * i + 1] = out.pixels[3 * i + 2] =
        gray.pixels[i];
  }
  return out;
}

namespace {

void PutPixel(Image& image, int x, int y, Rgb color) {
  if (x < 0 || y < 0 || x >= image.width || y >= image.height) return;
  if (image.channels == 1) {
    image.at(x, y) = static_cast<std::uint8_t>(
        (299 * color.r + 587 * color.g + 114 * color.b) / 1000);
    return;
  }
  image.at(x, y, 0) = color.r;
  image.at(x, y, 1) = color.g;
  image.at(x, y, 2) = color.b;
}

}  // namespace

void DrawRectangle(Image& image, const PixelRect& rect, Rgb color) {
  if (rect.empty()) return;
  const int right = rect.x1 - 1;
  const int bottom = rect.y1 - 1;
  for (int x = rect.x0; x <= right; ++x) {
    PutPixel(image, x, rect.y0, color);
    PutPixel(image, x, bottom, color);
  }
  for (int y = rect.y0; y <= bottom; ++y) {
    PutPixel(image, rect.x0, y, color);
    PutPixel(image, right, y, color);
  }
}

void FillRectangle(Image& image, const PixelRect& rect, Rgb color) {
  for (int y = std::max(rect.y0, 0); y < std::min(rect.y1, image.height); ++y) {
    for (int x = std::max(rect.x0, 0); x < std::min(rect.x1, image.width);
         ++x) {
      PutPixel(image, x, y, color);
    }
  }
}

std::string Base64Encode(const std::vector<std::uint8_t>& bytes) {
  static constexpr char kAlphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.push_back(kAlphabet[(v >> 6) & 63]);
    out.push_back(kAlphabet[v & 63]);
  }
  if (i + 1 == bytes.size()) {
    const std::uint32_t v = bytes[i] << 16;
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.append("==");
  } else if (i + 2 == bytes.size()) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.push_back(kAlphabet[(v >> 6) & 63]);
    out.push_back('=');
  }
  return out;
}

}  // namespace groupscope
