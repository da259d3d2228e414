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

#include <array>
#include <cstdlib>
#include <utility>

#include <fmt/format.h>

#include "groupscope/error.h"

namespace groupscope {

DepthMap::DepthMap(Image image) : image_(std::move(image)) {
  if (image_.channels != 1) {
    throw Error(ErrorCode::kUnsupportedFormat,
                fmt::format("depth map must be single-channel, got {} channels",
                            image_.channels));
  }
}

DepthMap LoadDepthMap(const std::filesystem::path& path,
                      const ImageGeometry& expected) {
  Image image = ReadImage(path);
  if (image.channels != 1) {
    throw Error(ErrorCode::kUnsupportedFormat,
                fmt::format("{}: depth map has {} channels, expected 1",
                            path.string(), image.channels));
  }
  if (image.width != expected.width || image.height != expected.height) {
    throw Error(ErrorCode::kDimensionMismatch,
                fmt::format("{}: depth map is {}x{}, scene expects {}x{}",
                            path.string(), image.width, image.height,
                            expected.width, expected.height));
  }
  return DepthMap(std::move(image));
}

int MedianDepth(const DepthMap& depth, const BBox& box) {
  const PixelRect r = ToPixelRect(box, depth.geometry());
  if (r.empty()) {
    throw Error(ErrorCode::kEmptyRegion,
                fmt::format("box [{}, {}, {}, {}] covers no depth pixels",
                            box.x1(), box.y1(), box.x2(), box.y2()));
  }
  // Counting sort over the 256 possible values.
  std::array<std::size_t, 256> histogram{};
  for (int y = r.y0; y < r.y1; ++y) {
    for (int x = r.x0; x < r.x1; ++x) ++histogram[depth.at(x, y)];
  }
  const std::size_t n = static_cast<std::size_t>(r.width()) * r.height();
  const std::size_t target = (n - 1) / 2;
  std::size_t seen = 0;
  for (int v = 0; v < 256; ++v) {
    seen += histogram[v];
    if (seen > target) return v;
  }
  return 255;
}

DepthCue ComputeDepthCue(const DepthMap& depth, const BBox& a, const BBox& b) {
  DepthCue cue;
  cue.z_a = MedianDepth(depth, a);
  cue.z_b = MedianDepth(depth, b);
  cue.abs_diff = std::abs(cue.z_a - cue.z_b);
  return cue;
}

}  // namespace groupscope
