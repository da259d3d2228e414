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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "groupscope/error.h"
#include "oracles.h"
#include "test_util.h"

namespace groupscope {
namespace {

using testing::RandomBox;

constexpr int kPropertyCases = 10000;

TEST_CASE("BBox rejects degenerate and invalid coordinates") {
  CHECK_THROWS_AS(BBox::Create(5, 5, 5, 10), Error);
  CHECK_THROWS_AS(BBox::Create(5, 5, 4, 10), Error);
  CHECK_THROWS_AS(BBox::Create(-1, 0, 4, 10), Error);
  CHECK_THROWS_AS(BBox::Create(0, 0, NAN, 10), Error);
  CHECK_THROWS_AS(BBox::Create(0, 0, INFINITY, 10), Error);
  CHECK_NOTHROW(BBox::Create(0, 0, 0.5, 0.5));
  CHECK_THROWS_AS(ImageGeometry::Create(0, 10), Error);
}

TEST_CASE("iou examples") {
  const BBox a = BBox::Create(0, 0, 10, 10);
  CHECK(Iou(a, a) == 1.0);
  CHECK(Iou(a, BBox::Create(20, 20, 30, 30)) == 0.0);
  // Touching edges share no area.
  CHECK(Iou(a, BBox::Create(10, 0, 20, 10)) == 0.0);

  const BBox b = BBox::Create(5, 0, 15, 10);
  const double oracle = testing::RasterIou(0, 0, 10, 10, 5, 0, 15, 10);
  CHECK(oracle == doctest::Approx(50.0 / 150.0).epsilon(1e-12));
  CHECK(Iou(a, b) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("iou agrees with cell counting on integer boxes") {
  Rng rng(11);
  for (int t = 0; t < 2000; ++t) {
    int c[8];
    for (int k = 0; k < 8; k += 4) {
      c[k] = rng.UniformInt(0, 18);
      c[k + 1] = rng.UniformInt(0, 18);
      c[k + 2] = rng.UniformInt(c[k] + 1, 20);
      c[k + 3] = rng.UniformInt(c[k + 1] + 1, 20);
    }
    const double expected =
        testing::RasterIou(c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7]);
    const double got = Iou(BBox::Create(c[0], c[1], c[2], c[3]),
                           BBox::Create(c[4], c[5], c[6], c[7]));
    REQUIRE(got == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("bbox_union examples") {
  const BBox unit = BBox::Create(0, 0, 1, 1);
  CHECK(BBoxUnion(unit, unit) == unit);
  CHECK(BBoxUnion(BBox::Create(0, 0, 2, 2), BBox::Create(3, 3, 5, 5)) ==
        BBox::Create(0, 0, 5, 5));
  CHECK(BBoxUnion(BBox::Create(1, 4, 3, 9), BBox::Create(2, 1, 8, 5)) ==
        BBox::Create(1, 1, 8, 9));
}

TEST_CASE("pad_bbox examples") {
  const ImageGeometry img{100, 100};
  const BBox b = BBox::Create(10, 10, 20, 20);
  CHECK(PadBBox(b, 0.0, img) == b);
  const BBox padded = PadBBox(b, 0.1, img);
  CHECK(padded.x1() == doctest::Approx(9));
  CHECK(padded.y1() == doctest::Approx(9));
  CHECK(padded.x2() == doctest::Approx(21));
  CHECK(padded.y2() == doctest::Approx(21));
  CHECK(PadBBox(BBox::Create(0, 0, 50, 50), 0.5, ImageGeometry{60, 60}) ==
        BBox::Create(0, 0, 60, 60));
  CHECK_THROWS_AS(PadBBox(b, -0.1, img), Error);
}

TEST_CASE("center_distance examples") {
  const ImageGeometry img{100, 100};
  const BBox a = BBox::Create(10, 10, 20, 20);
  CHECK(CenterDistance(a, a, img) == 0.0);
  // Degenerate-free boxes centred on opposite image corners.
  const BBox top_left = BBox::Create(0, 0, 1e-9 * 2, 1e-9 * 2);
  const BBox bottom_right = BBox::Create(100 - 2e-9, 100 - 2e-9, 100, 100);
  CHECK(CenterDistance(top_left, bottom_right, img) ==
        doctest::Approx(1.0).epsilon(1e-9));
  const BBox b = BBox::Create(60, 10, 70, 20);  // centres 50 px apart
  CHECK(CenterDistance(a, b, img) ==
        doctest::Approx(50.0 / std::sqrt(20000.0)).epsilon(1e-12));
  CHECK(CenterDistance(a, b, img) == doctest::Approx(0.3536).epsilon(1e-4));
}

TEST_CASE("enclosing_bbox examples") {
  const BBox single = BBox::Create(3, 4, 5, 6);
  CHECK(EnclosingBBox(std::vector<BBox>{single}) == single);
  CHECK(EnclosingBBox(std::vector<BBox>{BBox::Create(10, 20, 30, 60),
                                        BBox::Create(40, 25, 55, 70)}) ==
        BBox::Create(10, 20, 55, 70));
  CHECK(EnclosingBBox(std::vector<BBox>{BBox::Create(5, 5, 6, 6),
                                        BBox::Create(1, 9, 2, 10),
                                        BBox::Create(8, 1, 9, 2)}) ==
        BBox::Create(1, 1, 9, 10));
  try {
    EnclosingBBox(std::vector<BBox>{});
    FAIL("expected EmptyGroup");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kEmptyGroup);
  }
}

TEST_CASE("ToPixelRect rounds outward and clamps") {
  const ImageGeometry img{10, 8};
  CHECK(ToPixelRect(BBox::Create(1.2, 2.7, 3.1, 4.0), img) ==
        PixelRect{1, 2, 4, 4});
  CHECK(ToPixelRect(BBox::Create(8.5, 6.5, 12, 9), img) ==
        PixelRect{8, 6, 10, 8});
  CHECK(ToPixelRect(BBox::Create(20, 20, 30, 30), img).empty());
}

TEST_CASE("property: iou symmetric, bounded, reflexive") {
  Rng rng(1);
  for (int t = 0; t < kPropertyCases; ++t) {
    const BBox a = RandomBox(rng, 200, 150);
    const BBox b = RandomBox(rng, 200, 150);
    const double ab = Iou(a, b);
    REQUIRE(ab == Iou(b, a));
    REQUIRE(ab >= 0.0);
    REQUIRE(ab <= 1.0);
    REQUIRE(Iou(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("property: union commutative, associative, idempotent, containing") {
  Rng rng(2);
  for (int t = 0; t < kPropertyCases; ++t) {
    const BBox a = RandomBox(rng, 200, 150);
    const BBox b = RandomBox(rng, 200, 150);
    const BBox c = RandomBox(rng, 200, 150);
    REQUIRE(BBoxUnion(a, b) == BBoxUnion(b, a));
    REQUIRE(BBoxUnion(BBoxUnion(a, b), c) == BBoxUnion(a, BBoxUnion(b, c)));
    REQUIRE(BBoxUnion(a, a) == a);
    REQUIRE(BBoxUnion(a, b).Contains(a));
    REQUIRE(BBoxUnion(a, b).Contains(b));
  }
}

TEST_CASE("property: padding identity, containment, image bounds") {
  Rng rng(3);
  for (int t = 0; t < kPropertyCases; ++t) {
    const int w = rng.UniformInt(2, 400);
    const int h = rng.UniformInt(2, 400);
    const ImageGeometry img{w, h};
    const BBox b = RandomBox(rng, w, h);
    REQUIRE(PadBBox(b, 0.0, img) == b);
    const BBox p = PadBBox(b, rng.Uniform(0.0, 2.0), img);
    REQUIRE(p.Contains(b));  // b lies inside the image already
    REQUIRE(p.x1() >= 0.0);
    REQUIRE(p.y1() >= 0.0);
    REQUIRE(p.x2() <= w);
    REQUIRE(p.y2() <= h);
  }
}

TEST_CASE("property: center distance symmetric, triangle, unit range") {
  Rng rng(4);
  for (int t = 0; t < kPropertyCases; ++t) {
    const int w = rng.UniformInt(2, 400);
    const int h = rng.UniformInt(2, 400);
    const ImageGeometry img{w, h};
    const BBox a = RandomBox(rng, w, h);
    const BBox b = RandomBox(rng, w, h);
    const BBox c = RandomBox(rng, w, h);
    const double ab = CenterDistance(a, b, img);
    REQUIRE(ab == CenterDistance(b, a, img));
    REQUIRE(ab >= 0.0);
    REQUIRE(ab <= 1.0);
    REQUIRE(CenterDistance(a, c, img) <=
            ab + CenterDistance(b, c, img) + 1e-12);
  }
}

TEST_CASE("property: enclosing box contains members and folds union") {
  Rng rng(5);
  for (int t = 0; t < kPropertyCases; ++t) {
    std::vector<BBox> boxes;
    const int n = rng.UniformInt(1, 6);
    for (int k = 0; k < n; ++k) boxes.push_back(RandomBox(rng, 300, 300));
    const BBox e = EnclosingBBox(boxes);
    BBox fold = boxes[0];
    for (const BBox& b : boxes) {
      REQUIRE(e.Contains(b));
      fold = BBoxUnion(fold, b);
    }
    REQUIRE(e == fold);
  }
}

}  // namespace
}  // namespace groupscope
