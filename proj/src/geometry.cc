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


#include "groupscope/geometry.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "groupscope/error.h"

namespace groupscope {

ImageGeometry ImageGeometry::Create(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::kValidationError,
                fmt::format("image geometry must be at least 1x1, got {}x{}",
                            width, height));
  }
  return ImageGeometry{width, height};
}

double ImageGeometry::Diagonal() const {
  return std::hypot(static_cast<double>(width), static_cast<double>(height));
}

bool BBox::IsValid(double x1, double y1, double x2, double y2) {
  for (double v : {x1, y1, x2, y2}) {
    if (!std::isfinite(v) || v < 0.0) return false;
  }
  return x1 < x2 && y1 < y2;
}

BBox BBox::Create(double x1, double y1, double x2, double y2) {
  if (!IsValid(x1, y1, x2, y2)) {
    throw Error(ErrorCode::kValidationError,
                fmt::format("invalid box [{}, {}, {}, {}]", x1, y1, x2, y2));
  }
  return BBox(x1, y1, x2, y2);
}

bool BBox::Contains(const BBox& other) const {
  return x1_ <= other.x1_ && y1_ <= other.y1_ && x2_ >= other.x2_ &&
         y2_ >= other.y2_;
}

double Iou(const BBox& a, const BBox& b) {
  const double iw = std::min(a.x2(), b.x2()) - std::max(a.x1(), b.x1());
  const double ih = std::min(a.y2(), b.y2()) - std::max(a.y1(), b.y1());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return std::clamp(inter / uni, 0.0, 1.0);
}

BBox BBoxUnion(const BBox& a, const BBox& b) {
  return BBox::Create(std::min(a.x1(), b.x1()), std::min(a.y1(), b.y1()),
                      std::max(a.x2(), b.x2()), std::max(a.y2(), b.y2()));
}

BBox PadBBox(const BBox& box, double fraction, const ImageGeometry& image) {
  if (!(fraction >= 0.0) || !std::isfinite(fraction)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("padding fraction must be >= 0, got {}", fraction));
  }
  const double dx = fraction * box.width();
  const double dy = fraction * box.height();
  const double w = image.width;
  const double h = image.height;
  const double x1 = std::clamp(box.x1() - dx, 0.0, w);
  const double y1 = std::clamp(box.y1() - dy, 0.0, h);
  const double x2 = std::clamp(box.x2() + dx, 0.0, w);
  const double y2 = std::clamp(box.y2() + dy, 0.0, h);
  if (!BBox::IsValid(x1, y1, x2, y2)) {
    throw Error(ErrorCode::kEmptyRegion,
                fmt::format("box [{}, {}, {}, {}] does not overlap {}x{} image",
                            box.x1(), box.y1(), box.x2(), box.y2(), image.width,
                            image.height));
  }
  return BBox::Create(x1, y1, x2, y2);
}

double CenterDistance(const BBox& a, const BBox& b,
                      const ImageGeometry& image) {
  const double dx = a.center_x() - b.center_x();
  const double dy = a.center_y() - b.center_y();
  return std::hypot(dx, dy) / image.Diagonal();
}

BBox EnclosingBBox(std::span<const BBox> boxes) {
  if (boxes.empty()) {
    throw Error(ErrorCode::kEmptyGroup, "cannot enclose an empty box list");
  }
  BBox out = boxes.front();
  for (const BBox& b : boxes.subspan(1)) out = BBoxUnion(out, b);
  return out;
}

PixelRect ToPixelRect(const BBox& box, const ImageGeometry& image) {
  PixelRect r;
  r.x0 = static_cast<int>(std::clamp(std::floor(box.x1()), 0.0,
                                     static_cast<double>(image.width)));
  r.y0 = static_cast<int>(std::clamp(std::floor(box.y1()), 0.0,
                                     static_cast<double>(image.height)));
  r.x1 = static_cast<int>(std::clamp(std::ceil(box.x2()), 0.0,
                                     static_cast<double>(image.width)));
  r.y1 = static_cast<int>(std::clamp(std::ceil(box.y2()), 0.0,
                                     static_cast<double>(image.height)));
  return r;
}

}  // namespace groupscope
