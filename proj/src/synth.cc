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


#include "groupscope/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "groupscope/error.h"
#include "groupscope/random.h"
#include "groupscope/scene_io.h"

namespace groupscope {
namespace {

constexpr int kMaxLayoutAttempts = 64;
constexpr int kMaxPlacementTries = 400;
constexpr std::uint8_t kBackgroundFar = 10;

struct PlacedPerson {
  PixelRect box;
  int depth = 0;
  int unit = 0;
  Rgb color;
};

struct Unit {
  std::vector<PixelRect> members;  // relative to the unit origin
  int width = 0;
  int height = 0;
};

// Composition of one scene: sizes of planted units (1 = singleton).
std::vector<int> DrawComposition(const SynthConfig& cfg, Rng& rng) {
  int remaining = rng.UniformInt(cfg.min_persons, cfg.max_persons);
  std::vector<int> units;
  while (remaining > 0) {
    int size = 1;
    if (remaining > 1 && rng.Uniform() >= cfg.singleton_probability) {
      double u = rng.Uniform();
      size = cfg.group_sizes.back().size;
      for (const GroupSizeWeight& g : cfg.group_sizes) {
        if (u < g.probability) {
          size = g.size;
          break;
        }
        u -= g.probability;
      }
      size = std::min(size, remaining);
    }
    units.push_back(size);
    remaining -= size;
  }
  return units;
}

double MaxCenterSpread(const Unit& unit) {
  double spread = 0.0;
  for (const PixelRect& a : unit.members) {
    for (const PixelRect& b : unit.members) {
      spread = std::max(spread, std::hypot(0.5 * (a.x0 + a.x1 - b.x0 - b.x1),
                                           0.5 * (a.y0 + a.y1 - b.y0 - b.y1)));
    }
  }
  return spread;
}

// Members side by side with small gaps and a little vertical jitter.
Unit LayoutUnit(int size, const SynthConfig& cfg, Rng& rng) {
  const ImageGeometry& img = cfg.image;
  double scale = 1.0;
  while (true) {
    Unit unit;
    int x = 0;
    for (int k = 0; k < size; ++k) {
      const int w = std::max(
          2, static_cast<int>(std::lround(scale * rng.Uniform(0.03, 0.04) *
                                          img.width)));
      const int h = std::max(
          2, static_cast<int>(std::lround(w * rng.Uniform(2.2, 2.8))));
      const int dy = static_cast<int>(std::lround(rng.Uniform(0.0, 0.1) * h));
      unit.members.push_back({x, dy, x + w, dy + h});
      x += w + std::max(1, static_cast<int>(std::lround(rng.Uniform(0.05, 0.2) * w)));
      unit.height = std::max(unit.height, dy + h);
    }
    unit.width = unit.members.back().x1;
    if (MaxCenterSpread(unit) <= cfg.max_group_spread * img.Diagonal() ||
        scale < 0.05) {
      return unit;
    }
    scale *= 0.8;
  }
}

bool Overlaps(const PixelRect& a, const PixelRect& b) {
  return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

// Places every unit at a random spot whose margin-padded footprint is
// disjoint from the others. Returns false when the image is too crowded.
bool PlaceUnits(const std::vector<Unit>& units, const SynthConfig& cfg,
                Rng& rng, std::vector<PixelRect>& origins) {
  const ImageGeometry& img = cfg.image;
  const int margin =
      std::max(1, static_cast<int>(std::lround(0.03 * img.Diagonal())));
  std::vector<PixelRect> footprints;
  origins.clear();
  for (const Unit& u : units) {
    if (u.width + 2 > img.width || u.height + 2 > img.height) return false;
    bool placed = false;
    for (int t = 0; t < kMaxPlacementTries && !placed; ++t) {
      const int x = rng.UniformInt(1, img.width - u.width - 1);
      const int y = rng.UniformInt(1, img.height - u.height - 1);
      const PixelRect fp{x - margin, y - margin, x + u.width + margin,
                         y + u.height + margin};
      if (std::none_of(footprints.begin(), footprints.end(),
                       [&](const PixelRect& o) { return Overlaps(fp, o); })) {
        footprints.push_back(fp);
        origins.push_back({x, y, x + u.width, y + u.height});
        placed = true;
      }
    }
    if (!placed) return false;
  }
  return true;
}

SynthScene GenerateOne(const SynthConfig& cfg, int index, Rng& rng) {
  const ImageGeometry& img = cfg.image;
  std::vector<int> composition;
  std::vector<Unit> units;
  std::vector<PixelRect> origins;
  bool ok = false;
  for (int attempt = 0; attempt < kMaxLayoutAttempts && !ok; ++attempt) {
    composition = DrawComposition(cfg, rng);
    units.clear();
    for (int size : composition) units.push_back(LayoutUnit(size, cfg, rng));
    ok = PlaceUnits(units, cfg, rng, origins);
  }
  if (!ok) {
    throw Error(ErrorCode::kConfigError,
                fmt::format("cannot fit {} to {} persons into a {}x{} image",
                            cfg.min_persons, cfg.max_persons, img.width,
                            img.height));
  }

  std::vector<PlacedPerson> people;
  for (std::size_t u = 0; u < units.size(); ++u) {
    const int base = rng.UniformInt(40, 230);
    for (const PixelRect& r : units[u].members) {
      PlacedPerson p;
      p.box = {origins[u].x0 + r.x0, origins[u].y0 + r.y0,
               origins[u].x0 + r.x1, origins[u].y0 + r.y1};
      p.depth = std::clamp(base + rng.UniformInt(-3, 3), 0, 255);
      p.unit = static_cast<int>(u);
      p.color = Rgb{static_cast<std::uint8_t>(rng.UniformInt(30, 225)),
                    static_cast<std::uint8_t>(rng.UniformInt(30, 225)),
                    static_cast<std::uint8_t>(rng.UniformInt(30, 225))};
      people.push_back(p);
    }
  }
  // Detector-like ordering: left to right, then top to bottom.
  std::stable_sort(people.begin(), people.end(),
                   [](const PlacedPerson& a, const PlacedPerson& b) {
                     return std::tie(a.box.x0, a.box.y0) <
                            std::tie(b.box.x0, b.box.y0);
                   });

  SynthScene out;
  Scene& scene = out.scene;
  scene.scene_id = fmt::format("synth_{:05d}", index);
  scene.image = img;
  scene.rgb_path = fmt::format("rgb/{}.png", scene.scene_id);
  scene.depth_path = fmt::format("depth/{}.png", scene.scene_id);

  out.rgb = Image::Filled(img.width, img.height, 3, 0);
  out.depth = Image::Filled(img.width, img.height, 1, kBackgroundFar);
  for (int y = 0; y < img.height; ++y) {
    const auto far = static_cast<std::uint8_t>(kBackgroundFar + (20 * y) / img.height);
    const auto shade = static_cast<std::uint8_t>(150 + (60 * y) / img.height);
    for (int x = 0; x < img.width; ++x) {
      out.depth.at(x, y) = far;
      out.rgb.at(x, y, 0) = out.rgb.at(x, y, 1) = out.rgb.at(x, y, 2) = shade;
    }
  }

  std::vector<std::vector<int>> unit_members(units.size());
  for (std::size_t k = 0; k < people.size(); ++k) {
    const PlacedPerson& p = people[k];
    PersonDetection det;
    det.person_id = static_cast<int>(k);
    det.bbox = BBox::Create(p.box.x0, p.box.y0, p.box.x1, p.box.y1);
    det.confidence = std::round(rng.Uniform(0.55, 1.0) * 1000.0) / 1000.0;
    scene.persons.push_back(det);
    unit_members[p.unit].push_back(det.person_id);
    // Gray conversion of (z, z, z) is exactly z.
    const auto z = static_cast<std::uint8_t>(p.depth);
    FillRectangle(out.depth, p.box, Rgb{z, z, z});
    FillRectangle(out.rgb, p.box, p.color);
    DrawRectangle(out.rgb, p.box, Rgb{20, 20, 20});
  }
  std::vector<GroupAnnotation> groups;
  std::sort(unit_members.begin(), unit_members.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  for (auto& members : unit_members) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end());
    std::vector<BBox> boxes;
    for (int id : members) boxes.push_back(scene.persons[id].bbox);
    GroupAnnotation g;
    g.group_id = static_cast<int>(groups.size());
    g.bbox = EnclosingBBox(boxes);
    g.member_ids = members;
    groups.push_back(std::move(g));
  }
  scene.gt_groups = std::move(groups);
  return out;
}

}  // namespace

void SynthConfig::Validate() const {
  auto fail = [](const std::string& message) {
    throw Error(ErrorCode::kConfigError, "synth config: " + message);
  };
  if (n_scenes < 0) fail("n_scenes must be >= 0");
  if (image.width < 16 || image.height < 16) fail("image must be at least 16x16");
  if (min_persons < 0 || max_persons < min_persons) {
    fail("persons range must satisfy 0 <= min <= max");
  }
  if (group_sizes.empty()) fail("group size distribution is empty");
  double total = 0.0;
  for (const GroupSizeWeight& g : group_sizes) {
    if (g.size < 2) fail("group sizes must be >= 2");
    if (!(g.probability >= 0.0)) fail("group size probabilities must be >= 0");
    total += g.probability;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    fail(fmt::format("group size probabilities sum to {}, not 1", total));
  }
  for (double rate : {singleton_probability, flip_rate, notsure_rate}) {
    if (!(rate >= 0.0 && rate <= 1.0)) fail("rates must lie in [0, 1]");
  }
  if (flip_rate + notsure_rate > 1.0) {
    fail("flip_rate + notsure_rate must not exceed 1");
  }
  if (!(max_group_spread > 0.0 && max_group_spread <= 1.0)) {
    fail("max_group_spread must lie in (0, 1]");
  }
}

std::vector<SynthScene> GenerateScenes(const SynthConfig& config) {
  config.Validate();
  Rng rng(config.seed);
  std::vector<SynthScene> scenes;
  scenes.reserve(config.n_scenes);
  for (int k = 0; k < config.n_scenes; ++k) {
    scenes.push_back(GenerateOne(config, k, rng));
  }
  return scenes;
}

std::filesystem::path WriteSynthCorpus(std::span<const SynthScene> scenes,
                                       const std::filesystem::path& dir,
                                       DepthFormat depth_format) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "rgb", ec);
  std::filesystem::create_directories(dir / "depth", ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  }
  std::vector<Scene> manifest;
  for (const SynthScene& s : scenes) {
    Scene scene = s.scene;
    if (depth_format == DepthFormat::kPgm) {
      scene.depth_path = fmt::format("depth/{}.pgm", scene.scene_id);
      WritePgm(s.depth, dir / scene.depth_path);
    } else {
      WritePng(s.depth, dir / scene.depth_path);
    }
    WritePng(s.rgb, dir / scene.rgb_path);
    manifest.push_back(std::move(scene));
  }
  const auto path = dir / "manifest.jsonl";
  WriteManifest(manifest, path);
  return path;
}

RelationMatrix CorruptJudgments(const RelationMatrix& m, double flip_rate,
                                double notsure_rate, std::uint64_t seed) {
  if (!(flip_rate >= 0.0 && flip_rate <= 1.0) ||
      !(notsure_rate >= 0.0 && notsure_rate <= 1.0) ||
      flip_rate + notsure_rate > 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("bad corruption rates {} / {}", flip_rate,
                            notsure_rate));
  }
  Rng rng(seed);
  RelationMatrix out = m;
  for (int i = 0; i < m.size(); ++i) {
    for (int j = i + 1; j < m.size(); ++j) {
      if (m.provenance(i, j) != Provenance::kClassified) continue;
      const double u = rng.Uniform();
      Judgment j_new = m.at(i, j);
      if (u < flip_rate) {
        if (j_new == Judgment::kYes) {
          j_new = Judgment::kNo;
        } else if (j_new == Judgment::kNo) {
          j_new = Judgment::kYes;
        }
      } else if (u < flip_rate + notsure_rate) {
        j_new = Judgment::kNotSure;
      }
      out.Set(i, j, j_new, Provenance::kClassified);
    }
  }
  return out;
}

}  // namespace groupscope
