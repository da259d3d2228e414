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


#include "groupscope/scene_io.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "groupscope/error.h"

namespace groupscope {
namespace {

using nlohmann::json;

[[noreturn]] void Invalid(const std::string& scene_id,
                          const std::string& message) {
  throw Error(ErrorCode::kValidationError,
              fmt::format("scene '{}': {}", scene_id, message));
}

BBox ParseBox(const json& j, const std::string& scene_id) {
  if (!j.is_array() || j.size() != 4) {
    throw Error(ErrorCode::kParseError, "bbox must be an array of 4 numbers");
  }
  const double x1 = j[0].get<double>(), y1 = j[1].get<double>();
  const double x2 = j[2].get<double>(), y2 = j[3].get<double>();
  if (!BBox::IsValid(x1, y1, x2, y2)) {
    Invalid(scene_id, fmt::format("degenerate or negative box [{}, {}, {}, {}]",
                                  x1, y1, x2, y2));
  }
  return BBox::Create(x1, y1, x2, y2);
}

json BoxToJson(const BBox& b) { return json::array({b.x1(), b.y1(), b.x2(), b.y2()}); }

std::ofstream OpenForWrite(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot open {} for writing", path.string()));
  }
  return out;
}

void CheckWritten(const std::ofstream& out, const std::filesystem::path& path) {
  if (!out) {
    throw Error(ErrorCode::kIoError,
                fmt::format("failed writing {}", path.string()));
  }
}

std::ifstream OpenForRead(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, fmt::format("cannot open {}", path.string()));
  }
  return in;
}

bool IsBlank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

// Runs `parse` on every non-blank line, prefixing thrown errors with
// "path:line:".
template <typename F>
void ForEachJsonLine(const std::filesystem::path& path, F&& parse) {
  std::ifstream in = OpenForRead(path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    try {
      parse(json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParseError,
                  fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    } catch (const Error& e) {
      throw Error(e.code(),
                  fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
}

}  // namespace

int Scene::IndexOf(int person_id) const {
  for (std::size_t i = 0; i < persons.size(); ++i) {
    if (persons[i].person_id == person_id) return static_cast<int>(i);
  }
  return -1;
}

bool Scene::operator==(const Scene& other) const {
  return scene_id == other.scene_id && image == other.image &&
         rgb_path == other.rgb_path && depth_path == other.depth_path &&
         persons == other.persons && gt_groups == other.gt_groups;
}

void ValidateScene(const Scene& scene) {
  const std::string& id = scene.scene_id;
  if (id.empty()) Invalid(id, "empty scene_id");
  if (scene.image.width < 1 || scene.image.height < 1) {
    Invalid(id, "image dimensions must be positive");
  }
  std::set<int> ids;
  for (const PersonDetection& p : scene.persons) {
    if (!ids.insert(p.person_id).second) {
      Invalid(id, fmt::format("duplicate person_id {}", p.person_id));
    }
    if (!(p.confidence >= 0.0 && p.confidence <= 1.0)) {
      Invalid(id, fmt::format("person {} confidence {} outside [0, 1]",
                              p.person_id, p.confidence));
    }
    if (p.bbox.x2() > scene.image.width || p.bbox.y2() > scene.image.height) {
      Invalid(id, fmt::format("person {} box exceeds {}x{} image", p.person_id,
                              scene.image.width, scene.image.height));
    }
    if (p.median_depth && (*p.median_depth < 0 || *p.median_depth > 255)) {
      Invalid(id, fmt::format("person {} median depth out of range",
                              p.person_id));
    }
  }
  if (!scene.gt_groups) return;
  std::set<int> group_ids;
  for (const GroupAnnotation& g : *scene.gt_groups) {
    if (!group_ids.insert(g.group_id).second) {
      Invalid(id, fmt::format("duplicate group_id {}", g.group_id));
    }
    if (!g.member_ids) continue;
    const auto& members = *g.member_ids;
    if (members.size() < 2) {
      Invalid(id, fmt::format("group {} has fewer than 2 members", g.group_id));
    }
    if (std::set<int>(members.begin(), members.end()).size() != members.size()) {
      Invalid(id, fmt::format("group {} repeats a member", g.group_id));
    }
    for (int m : members) {
      if (!ids.contains(m)) {
        Invalid(id, fmt::format("group {} references unknown person {}",
                                g.group_id, m));
      }
    }
  }
}

Scene ParseSceneLine(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  Scene scene;
  try {
    if (!j.is_object()) {
      throw Error(ErrorCode::kParseError, "scene line must be a JSON object");
    }
    scene.scene_id = j.at("scene_id").get<std::string>();
    const int width = j.at("width").get<int>();
    const int height = j.at("height").get<int>();
    if (width < 1 || height < 1) {
      Invalid(scene.scene_id, fmt::format("bad image size {}x{}", width, height));
    }
    scene.image = ImageGeometry{width, height};
    scene.rgb_path = j.at("rgb_path").get<std::string>();
    scene.depth_path = j.at("depth_path").get<std::string>();
    for (const json& p : j.at("persons")) {
      PersonDetection person;
      person.person_id = p.at("person_id").get<int>();
      person.bbox = ParseBox(p.at("bbox"), scene.scene_id);
      person.confidence = p.at("confidence").get<double>();
      scene.persons.push_back(std::move(person));
    }
    if (auto it = j.find("gt_groups"); it != j.end() && !it->is_null()) {
      std::vector<GroupAnnotation> groups;
      for (const json& g : *it) {
        GroupAnnotation group;
        group.group_id = g.at("group_id").get<int>();
        if (auto m = g.find("member_ids"); m != g.end() && !m->is_null()) {
          auto members = m->get<std::vector<int>>();
          std::sort(members.begin(), members.end());
          if (!members.empty()) group.member_ids = std::move(members);
        }
        group.bbox = ParseBox(g.at("bbox"), scene.scene_id);
        groups.push_back(std::move(group));
      }
      scene.gt_groups = std::move(groups);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParseError,
                scene.scene_id.empty()
                    ? std::string(e.what())
                    : fmt::format("scene '{}': {}", scene.scene_id, e.what()));
  }
  ValidateScene(scene);
  return scene;
}

json SceneToJson(const Scene& scene) {
  json persons = json::array();
  for (const PersonDetection& p : scene.persons) {
    persons.push_back({{"person_id", p.person_id},
                       {"bbox", BoxToJson(p.bbox)},
                       {"confidence", p.confidence}});
  }
  json out = {{"scene_id", scene.scene_id},
              {"width", scene.image.width},
              {"height", scene.image.height},
              {"rgb_path", scene.rgb_path},
              {"depth_path", scene.depth_path},
              {"persons", std::move(persons)}};
  if (scene.gt_groups) {
    json groups = json::array();
    for (const GroupAnnotation& g : *scene.gt_groups) {
      groups.push_back(
          {{"group_id", g.group_id},
           {"member_ids", g.member_ids ? json(*g.member_ids) : json(nullptr)},
           {"bbox", BoxToJson(g.bbox)}});
    }
    out["gt_groups"] = std::move(groups);
  }
  return out;
}

std::vector<Scene> LoadScenes(const std::filesystem::path& manifest,
                              std::vector<ManifestIssue>* issues) {
  std::ifstream in(manifest, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError,
                fmt::format("cannot open manifest {}", manifest.string()));
  }
  const std::filesystem::path root = manifest.parent_path();
  std::vector<Scene> scenes;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    try {
      Scene scene = ParseSceneLine(line);
      if (!seen.insert(scene.scene_id).second) {
        Invalid(scene.scene_id, "duplicate scene_id");
      }
      scene.asset_root = root;
      scenes.push_back(std::move(scene));
    } catch (const Error& e) {
      if (issues == nullptr) {
        throw Error(e.code(), fmt::format("{}:{}: {}", manifest.string(),
                                          line_no, e.what()));
      }
      std::string scene_id;
      try {
        scene_id = json::parse(line).value("scene_id", "");
      } catch (const json::exception&) {
      }
      issues->push_back({line_no, std::move(scene_id), e.what()});
    }
  }
  return scenes;
}

void WriteManifest(std::span<const Scene> scenes,
                   const std::filesystem::path& path) {
  std::ofstream out = OpenForWrite(path);
  for (const Scene& scene : scenes) out << SceneToJson(scene).dump() << '\n';
  CheckWritten(out, path);
}

std::vector<PersonDetection> FilterDetections(
    std::span<const PersonDetection> persons, double tau_det) {
  if (!(tau_det >= 0.0 && tau_det <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("tau_det {} outside [0, 1]", tau_det));
  }
  std::vector<PersonDetection> kept;
  std::copy_if(persons.begin(), persons.end(), std::back_inserter(kept),
               [&](const PersonDetection& p) { return p.confidence >= tau_det; });
  return kept;
}

void WriteResults(std::span<const SceneGroups> results,
                  const std::filesystem::path& path) {
  std::vector<const SceneGroups*> sorted;
  for (const SceneGroups& r : results) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->scene_id < b->scene_id; });
  std::ofstream out = OpenForWrite(path);
  for (const SceneGroups* r : sorted) {
    json groups = json::array();
    for (const GroupRegion& g : r->groups) {
      groups.push_back({{"member_ids", g.member_ids}, {"bbox", BoxToJson(g.bbox)}});
    }
    out << json{{"scene_id", r->scene_id}, {"groups", std::move(groups)}}.dump()
        << '\n';
  }
  CheckWritten(out, path);
}

std::vector<SceneGroups> LoadResults(const std::filesystem::path& path) {
  std::vector<SceneGroups> results;
  ForEachJsonLine(path, [&](const json& j) {
    SceneGroups r;
    r.scene_id = j.at("scene_id").get<std::string>();
    for (const json& g : j.at("groups")) {
      GroupRegion region;
      region.member_ids = g.at("member_ids").get<std::vector<int>>();
      region.bbox = ParseBox(g.at("bbox"), r.scene_id);
      r.groups.push_back(std::move(region));
    }
    results.push_back(std::move(r));
  });
  return results;
}

std::vector<PairAnnotationRecord> CollectPairRecords(
    std::span<const Scene> scenes, std::span<const RelationMatrix> matrices) {
  if (scenes.size() != matrices.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "scene and matrix counts differ in pair export");
  }
  std::vector<PairAnnotationRecord> records;
  for (std::size_t k = 0; k < scenes.size(); ++k) {
    const Scene& scene = scenes[k];
    const RelationMatrix& m = matrices[k];
    if (m.size() != static_cast<int>(scene.persons.size())) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("scene '{}': matrix size {} for {} persons",
                              scene.scene_id, m.size(), scene.persons.size()));
    }
    for (int i = 0; i < m.size(); ++i) {
      for (int j = i + 1; j < m.size(); ++j) {
        if (m.provenance(i, j) != Provenance::kClassified) continue;
        int a = scene.persons[i].person_id;
        int b = scene.persons[j].person_id;
        if (a > b) std::swap(a, b);
        records.push_back(
            {scene.scene_id, a, b, m.at(i, j), AnnotatorSource::kPipeline});
      }
    }
  }
  return records;
}

void ExportPairRecords(std::span<const Scene> scenes,
                       std::span<const RelationMatrix> matrices,
                       const std::filesystem::path& path) {
  const auto records = CollectPairRecords(scenes, matrices);
  std::ofstream out = OpenForWrite(path);
  for (const PairAnnotationRecord& r : records) {
    out << json{{"scene_id", r.scene_id},
                {"person_a", r.person_a},
                {"person_b", r.person_b},
                {"label", JudgmentName(r.label)},
                {"annotator_source",
                 r.annotator_source == AnnotatorSource::kHuman ? "human"
                                                                : "pipeline"}}
               .dump()
        << '\n';
  }
  CheckWritten(out, path);
}

std::vector<PairAnnotationRecord> LoadPairRecords(
    const std::filesystem::path& path) {
  std::vector<PairAnnotationRecord> records;
  ForEachJsonLine(path, [&](const json& j) {
    PairAnnotationRecord r;
    r.scene_id = j.at("scene_id").get<std::string>();
    r.person_a = j.at("person_a").get<int>();
    r.person_b = j.at("person_b").get<int>();
    if (r.person_a >= r.person_b) {
      throw Error(ErrorCode::kValidationError,
                  "pair record requires person_a < person_b");
    }
    const auto label = JudgmentFromName(j.at("label").get<std::string>());
    if (!label) throw Error(ErrorCode::kParseError, "unknown judgment label");
    r.label = *label;
    const auto source = j.at("annotator_source").get<std::string>();
    if (source == "human") {
      r.annotator_source = AnnotatorSource::kHuman;
    } else if (source == "pipeline") {
      r.annotator_source = AnnotatorSource::kPipeline;
    } else {
      throw Error(ErrorCode::kParseError, "unknown annotator_source " + source);
    }
    records.push_back(std::move(r));
  });
  return records;
}

}  // namespace groupscope
