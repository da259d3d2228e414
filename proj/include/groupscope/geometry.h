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


#ifndef GROUPSCOPE_GEOMETRY_H_
#define GROUPSCOPE_GEOMETRY_H_

#include <array>
#include <span>

namespace groupscope {

// Width and height of an image in pixels. Both are at least 1.
struct ImageGeometry {
  int width = 1;
  int height = 1;

  static ImageGeometry Create(int width, int height);
  double Diagonal() const;
  bool operator==(const ImageGeometry&) const = default;
};

// Axis-aligned box in real-valued pixel coordinates, (x1, y1) top-left and
// (x2, y2) bottom-right. Always finite, non-negative, and of positive area;
// `Create` throws kValidationError otherwise.
class BBox {
 public:
  // Unit box at the origin.
  BBox() : BBox(0.0, 0.0, 1.0, 1.0) {}

  static BBox Create(double x1, double y1, double x2, double y2);
  static bool IsValid(double x1, double y1, double x2, double y2);

  double x1() const { return x1_; }
  double y1() const { return y1_; }
  double x2() const { return x2_; }
  double y2() const { return y2_; }

  double width() const { return x2_ - x1_; }
  double height() const { return y2_ - y1_; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x1_ + x2_); }
  double center_y() const { return 0.5 * (y1_ + y2_); }

  std::array<double, 4> coords() const { return {x1_, y1_, x2_, y2_}; }
  bool Contains(const BBox& other) const;

  bool operator==(const BBox&) const = default;

 private:
  BBox(double x1, double y1, double x2, double y2)
      : x1_(x1), y1_(y1), x2_(x2), y2_(y2) {}

  double x1_, y1_, x2_, y2_;
};

// Half-open integer pixel rectangle [x0, x1) x [y0, y1).
struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  bool empty() const { return x1 <= x0 || y1 <= y0; }
  bool operator==(const PixelRect&) const = default;
};

double Iou(const BBox& a, const BBox& b);

BBox BBoxUnion(const BBox& a, const BBox& b);

// Expands each side by `fraction` times the box extent along that axis, then
// clamps to [0, width] x [0, height]. Requires fraction >= 0 and the box to
// overlap the image.
BBox PadBBox(const BBox& box, double fraction, const ImageGeometry& image);

// Euclidean distance between box centers divided by the image diagonal.
double CenterDistance(const BBox& a, const BBox& b, const ImageGeometry& image);

// (min x1, min y1, max x2, max y2) over `boxes`. Throws kEmptyGroup when
// `boxes` is empty.
BBox EnclosingBBox(std::span<const BBox> boxes);

// Pixel region covered by `box`, rounded outward (floor for mins, ceil for
// maxes) and clamped to the image. May be empty when the box lies outside.
PixelRect ToPixelRect(const BBox& box, const ImageGeometry& image);

}  // namespace groupscope

#endif  // GROUPSCOPE_GEOMETRY_H_
