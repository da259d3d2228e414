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


#include "groupscope/depth.h"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

#include "doctest.h"
#include "groupscope/error.h"
#include "oracles.h"
#include "test_util.h"

namespace groupscope {
namespace {

using testing::TempDir;

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kInvalidArgument;
}

// Depth map whose pixels inside `rect` take `values` in row-major order.
DepthMap MapWithRegion(int w, int h, const PixelRect& rect,
                       const std::vector<int>& values, std::uint8_t fill = 0) {
  Image img = Image::Filled(w, h, 1, fill);
  std::size_t k = 0;
  for (int y = rect.y0; y < rect.y1; ++y) {
    for (int x = rect.x0; x < rect.x1; ++x) {
      img.at(x, y) = static_cast<std::uint8_t>(values[k++]);
    }
  }
  return DepthMap(std::move(img));
}

// Writes a 16-bit grayscale PNG with libpng directly.
void WriteSixteenBitPng(const std::filesystem::path& path, int w, int h) {
  FILE* fp = std::fopen(path.c_str(), "wb");
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  png_init_io(png, fp);
  png_set_IHDR(png, info, w, h, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_byte> row(2 * w, 0);
  for (int y = 0; y < h; ++y) png_write_row(png, row.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

TEST_CASE("median_depth examples") {
  const DepthMap constant(Image::Filled(20, 10, 1, 77));
  CHECK(MedianDepth(constant, BBox::Create(2, 2, 9, 7)) == 77);

  // 2x2 region {10, 20, 30, 40}: sorted index (4 - 1) / 2 = 1.
  const DepthMap even =
      MapWithRegion(10, 10, {3, 3, 5, 5}, {40, 10, 30, 20}, 99);
  CHECK(testing::SortedLowerMedian({10, 20, 30, 40}) == 20);
  CHECK(MedianDepth(even, BBox::Create(3, 3, 5, 5)) == 20);

  // 3x1 region {5, 200, 5}.
  const DepthMap odd = MapWithRegion(10, 10, {1, 1, 4, 2}, {5, 200, 5}, 99);
  CHECK(testing::SortedLowerMedian({5, 200, 5}) == 5);
  CHECK(MedianDepth(odd, BBox::Create(1, 1, 4, 2)) == 5);
}

TEST_CASE("median_depth rounds fractional boxes outward") {
  const DepthMap m = MapWithRegion(10, 10, {2, 2, 4, 3}, {50, 60}, 0);
  // (2.4, 2.2)-(3.6, 2.9) rounds to [2, 4) x [2, 3).
  CHECK(MedianDepth(m, BBox::Create(2.4, 2.2, 3.6, 2.9)) == 50);
}

TEST_CASE("median_depth of a box outside the map is EmptyRegion") {
  const DepthMap m(Image::Filled(10, 10, 1, 1));
  CHECK(CodeOf([&] { MedianDepth(m, BBox::Create(20, 20, 30, 30)); }) ==
        ErrorCode::kEmptyRegion);
}

TEST_CASE("depth_cue examples") {
  Image img = Image::Filled(20, 10, 1, 0);
  FillRectangle(img, {0, 0, 5, 5}, Rgb{120, 120, 120});
  FillRectangle(img, {10, 0, 15, 5}, Rgb{130, 130, 130});
  FillRectangle(img, {0, 5, 5, 10}, Rgb{255, 255, 255});
  const DepthMap m(std::move(img));
  const BBox a = BBox::Create(0, 0, 5, 5);
  const BBox b = BBox::Create(10, 0, 15, 5);
  CHECK(ComputeDepthCue(m, a, b) == DepthCue{120, 130, 10});
  CHECK(ComputeDepthCue(m, a, a).abs_diff == 0);
  CHECK(ComputeDepthCue(m, BBox::Create(0, 5, 5, 10),
                        BBox::Create(15, 5, 20, 10)) ==
        DepthCue{255, 0, 255});
}

TEST_CASE("property: median matches sort oracle, bounded, permutation invariant") {
  Rng rng(21);
  for (int t = 0; t < 10000; ++t) {
    const int w = rng.UniformInt(1, 7);
    const int h = rng.UniformInt(1, 7);
    std::vector<int> values(static_cast<std::size_t>(w) * h);
    const int lo = rng.UniformInt(0, 255);
    const int hi = rng.UniformInt(lo, 255);
    for (int& v : values) v = rng.UniformInt(lo, hi);
    const PixelRect rect{1, 1, 1 + w, 1 + h};
    const BBox box = BBox::Create(1, 1, 1 + w, 1 + h);
    const int median = MedianDepth(MapWithRegion(9, 9, rect, values, 255), box);
    REQUIRE(median == testing::SortedLowerMedian(values));
    REQUIRE(median >= *std::min_element(values.begin(), values.end()));
    REQUIRE(median <= *std::max_element(values.begin(), values.end()));
    std::vector<int> shuffled = values;
    for (std::size_t k = shuffled.size(); k > 1; --k) {
      std::swap(shuffled[k - 1],
                shuffled[rng.UniformInt(0, static_cast<int>(k) - 1)]);
    }
    REQUIRE(MedianDepth(MapWithRegion(9, 9, rect, shuffled, 0), box) == median);
  }
}

TEST_CASE("property: depth cue is symmetric in its boxes") {
  Rng rng(22);
  Image img = Image::Filled(64, 48, 1, 0);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.UniformInt(0, 255));
  const DepthMap m(std::move(img));
  for (int t = 0; t < 10000; ++t) {
    const BBox a = testing::RandomBox(rng, 64, 48);
    const BBox b = testing::RandomBox(rng, 64, 48);
    const DepthCue ab = ComputeDepthCue(m, a, b);
    const DepthCue ba = ComputeDepthCue(m, b, a);
    REQUIRE(ab.abs_diff == ba.abs_diff);
    REQUIRE(ab.z_a == ba.z_b);
    REQUIRE(ab.abs_diff == std::abs(ab.z_a - ab.z_b));
  }
}

TEST_CASE("load_depth_map accepts 8-bit gray PNG and PGM") {
  TempDir dir;
  Image img = Image::Filled(64, 48, 1, 0);
  for (int y = 0; y < 48; ++y) {
    for (int x = 0; x < 64; ++x) img.at(x, y) = static_cast<std::uint8_t>(x + y);
  }
  WritePng(img, dir / "d.png");
  WritePgm(img, dir / "d.pgm");
  const DepthMap png = LoadDepthMap(dir / "d.png", {64, 48});
  const DepthMap pgm = LoadDepthMap(dir / "d.pgm", {64, 48});
  CHECK(png.image() == img);
  CHECK(pgm.image() == img);
}

TEST_CASE("load_depth_map errors") {
  TempDir dir;
  WritePng(Image::Filled(64, 48, 1, 3), dir / "small.png");
  WritePng(Image::Filled(64, 48, 3, 3), dir / "rgb.png");
  WriteSixteenBitPng(dir / "deep.png", 8, 8);
  testing::WriteFile(dir / "junk.png", "not an image");

  CHECK(CodeOf([&] { LoadDepthMap(dir / "missing.png", {64, 48}); }) ==
        ErrorCode::kMissingFile);
  CHECK(CodeOf([&] { LoadDepthMap(dir / "small.png", {128, 96}); }) ==
        ErrorCode::kDimensionMismatch);
  CHECK(CodeOf([&] { LoadDepthMap(dir / "rgb.png", {64, 48}); }) ==
        ErrorCode::kUnsupportedFormat);
  CHECK(CodeOf([&] { LoadDepthMap(dir / "deep.png", {8, 8}); }) ==
        ErrorCode::kUnsupportedFormat);
  CHECK(CodeOf([&] { LoadDepthMap(dir / "junk.png", {8, 8}); }) ==
        ErrorCode::kUnsupportedFormat);
}

}  // namespace
}  // namespace groupscope
