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


#ifndef GROUPSCOPE_DEPTH_H_
#define GROUPSCOPE_DEPTH_H_

#include <cstdint>
#include <filesystem>

#include "groupscope/geometry.h"
#include "groupscope/image.h"

namespace groupscope {

// Single-channel 8-bit depth map. Immutable once constructed.
class DepthMap {
 public:
  // Throws kUnsupportedFormat unless `image` has exactly one channel.
  explicit DepthMap(Image image);

  int width() const { return image_.width; }
  int height() const { return image_.height; }
  ImageGeometry geometry() const { return image_.geometry(); }
  std::uint8_t at(int x, int y) const { return image_.at(x, y); }
  const Image& image() const { return image_; }

 private:
  Image image_;
};

struct DepthCue {
  int z_a = 0;
  int z_b = 0;
  int abs_diff = 0;

  bool operator==(const DepthCue&) const = default;
};

// Loads an 8-bit grayscale PNG or PGM and checks its size against
// `expected`. Throws kMissingFile, kDimensionMismatch, kUnsupportedFormat.
DepthMap LoadDepthMap(const std::filesystem::path& path,
                      const ImageGeometry& expected);

// Lower median (sorted index (n - 1) / 2) of the pixels covered by `box`
// after outward rounding. Throws kEmptyRegion when no pixel is covered.
int MedianDepth(const DepthMap& depth, const BBox& box);

DepthCue ComputeDepthCue(const DepthMap& depth, const BBox& a, const BBox& b);

}  // namespace groupscope

#endif  // GROUPSCOPE_DEPTH_H_
