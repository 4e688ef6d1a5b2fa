// Copyright 2026 The Embodied Authors
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

#include "support/synthetic_scene.h"

#include <fstream>

#include "embodied/image.h"
#include "embodied/motion.h"
#include "embodied/serialization.h"

namespace embodied::testing {
namespace {

using Eigen::Vector3d;

struct Builder {
  std::vector<Vector3d> points;
  std::vector<Rgb> colors;

  // Axis-aligned grid of points filling [lo, hi] with the given spacing.
  PointMask Box(const Vector3d& lo, const Vector3d& hi, double step, Rgb color) {
    std::vector<std::size_t> indices;
    const Eigen::Vector3i n =
        ((hi - lo) / step).array().floor().cast<int>().max(0) + 1;
    for (int i = 0; i < n.x(); ++i) {
      for (int j = 0; j < n.y(); ++j) {
        for (int k = 0; k < n.z(); ++k) {
          indices.push_back(points.size());
          points.push_back(lo + step * Vector3d(i, j, k));
          colors.push_back(color);
        }
      }
    }
    return PointMask::FromSorted(std::move(indices));
  }

  PointCloud Build() const {
    Eigen::Matrix3Xd xyz(3, static_cast<Eigen::Index>(points.size()));
    Colors3X rgb(3, static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto c = static_cast<Eigen::Index>(i);
      xyz.col(c) = points[i];
      rgb.col(c) << colors[i][0], colors[i][1], colors[i][2];
    }
    return PointCloud(std::move(xyz), std::move(rgb));
  }
};

void WriteLines(const std::filesystem::path& path,
                const std::vector<nlohmann::json>& lines) {
  std::ofstream out(path);
  for (const auto& line : lines) out << line.dump() << "\n";
}

}  // namespace

AxisPrimitive Flip(AxisPrimitive axis) {
  switch (axis) {
    case AxisPrimitive::kHorizontalInwards:
      return AxisPrimitive::kHorizontalOutwards;
    case AxisPrimitive::kHorizontalOutwards:
      return AxisPrimitive::kHorizontalInwards;
    case AxisPrimitive::kVerticalInwards:
      return AxisPrimitive::kVerticalOutwards;
    case AxisPrimitive::kVerticalOutwards:
      return AxisPrimitive::kVerticalInwards;
    case AxisPrimitive::kHorizontal:
      return AxisPrimitive::kVertical;
    case AxisPrimitive::kVertical:
      return AxisPrimitive::kHorizontal;
  }
  return axis;
}

SyntheticScene MakeApartmentScene() {
  Builder b;
  const Rgb floor{205, 190, 160}, wall{225, 225, 220}, wood{150, 105, 60},
      metal{90, 90, 100}, plastic{240, 240, 240}, red{200, 40, 40};

  // Shell: 6 m x 5 m x 2.6 m room.
  b.Box({0, 0, 0}, {6, 5, 0}, 0.1, floor);
  b.Box({0, 0, 0.1}, {0, 5, 2.6}, 0.1, wall);
  b.Box({6, 0, 0.1}, {6, 5, 2.6}, 0.1, wall);
  b.Box({0.1, 0, 0.1}, {5.9, 0, 2.6}, 0.1, wall);
  b.Box({0.1, 5, 0.1}, {5.9, 5, 2.6}, 0.1, wall);
  // Furniture: cabinet by the east wall, counter by the north wall, bin.
  b.Box({5.5, 1.1, 0.1}, {5.9, 1.9, 0.9}, 0.05, wood);
  b.Box({3.4, 4.4, 0.1}, {4.6, 4.9, 0.85}, 0.05, wood);
  b.Box({1.8, 0.8, 0.1}, {2.2, 1.2, 0.6}, 0.05, metal);

  SyntheticScene scene;
  scene.room_center = {3.0, 2.5, 1.3};
  auto plant = [&](std::string name, const Vector3d& lo, const Vector3d& hi,
                   Rgb color, AffordanceType type, MotionType motion,
                   const Vector3d& axis) {
    PlantedElement e;
    e.name = std::move(name);
    e.mask = b.Box(lo, hi, 0.01, color);
    e.affordance_type = type;
    e.motion.motion_type = motion;
    e.motion.axis = axis.normalized();
    e.motion.origin = 0.5 * (lo + hi);
    e.axis_primitive =
        DiscretizeAxis(axis, motion, e.motion.origin, scene.room_center);
    scene.elements.push_back(std::move(e));
  };
  plant("upper drawer handle", {5.46, 1.42, 0.70}, {5.48, 1.58, 0.72}, metal,
        AffordanceType::kHookPull, MotionType::kTranslation, {-1, 0, 0});
  plant("lower drawer handle", {5.46, 1.42, 0.40}, {5.48, 1.58, 0.42}, metal,
        AffordanceType::kHookPull, MotionType::kTranslation, {-1, 0, 0});
  plant("door knob", {0.02, 2.46, 0.98}, {0.07, 2.52, 1.04}, metal,
        AffordanceType::kRotate, MotionType::kRotation, {1, 0, 0});
  plant("light switch", {0.98, 4.96, 1.28}, {1.03, 4.98, 1.35}, plastic,
        AffordanceType::kKeyPress, MotionType::kTranslation, {0, 1, 0});
  plant("wall socket", {2.96, 0.02, 0.28}, {3.04, 0.04, 0.34}, plastic,
        AffordanceType::kPlugIn, MotionType::kTranslation, {0, -1, 0});
  plant("faucet lever", {3.96, 4.66, 0.90}, {4.04, 4.70, 0.95}, metal,
        AffordanceType::kHookTurn, MotionType::kRotation, {0, 0, 1});
  plant("bin pedal", {1.95, 0.70, 0.02}, {2.05, 0.78, 0.05}, red,
        AffordanceType::kFootPush, MotionType::kTranslation, {0, 0, -1});
  scene.cloud = b.Build();

  const double confidences[] = {0.95, 0.90, 0.85, 0.80, 0.75, 0.70, 0.65};
  for (std::size_t i = 0; i < scene.elements.size(); ++i) {
    scene.proposals.push_back({scene.elements[i].mask,
                               scene.elements[i].affordance_type,
                               confidences[i]});
  }

  auto task = [&](std::string id, std::string text, std::vector<int> ids) {
    scene.tasks.push_back({{std::move(id), "apartment", std::move(text)},
                           std::move(ids)});
  };
  task("t01", "open both drawers of the cabinet", {1, 2});
  task("t02", "open the door", {3});
  task("t03", "turn on the ceiling light", {4});
  task("t04", "charge the phone", {5});
  task("t05", "turn on the tap", {6});
  task("t06", "open the lid of the bin", {7});
  return scene;
}

std::vector<GroundTruthTask> SyntheticScene::GroundTruth() const {
  std::vector<GroundTruthTask> out;
  for (const SyntheticTask& t : tasks) {
    GroundTruthTask g{t.instruction.task_id, {}};
    for (const int id : t.element_ids) {
      const PlantedElement& e = elements[static_cast<std::size_t>(id - 1)];
      g.triplets.push_back({e.mask, e.motion.motion_type, e.axis_primitive,
                            e.affordance_type});
    }
    out.push_back(std::move(g));
  }
  return out;
}

nlohmann::json SyntheticScene::CorrectScript(
    const std::map<std::string, int>& wrong_axis) const {
  nlohmann::json script = {{"tasks", nlohmann::json::object()}};
  for (const SyntheticTask& t : tasks) {
    const std::string& id = t.instruction.task_id;
    nlohmann::json motions = nlohmann::json::array();
    for (const int e : t.element_ids) {
      const PlantedElement& el = elements[static_cast<std::size_t>(e - 1)];
      AxisPrimitive axis = el.axis_primitive;
      auto it = wrong_axis.find(id);
      if (it != wrong_axis.end() && it->second == e) {
        axis = Flip(axis);
      }
      motions.push_back(
          {{"id", e}, {"type", el.motion.motion_type}, {"axis", axis}});
    }
    script["tasks"][id] = {
        {"select", {nlohmann::json{{"view", 1}}.dump()}},
        {"ground", {nlohmann::json{{"elements", t.element_ids}}.dump()}},
        {"motion", {nlohmann::json{{"motions", motions}}.dump()}}};
  }
  return script;
}

void SyntheticScene::WriteInputs(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  SavePly(cloud, dir / "cloud.ply");
  SaveProposals(proposals, dir / "proposals.json");
  std::vector<nlohmann::json> task_lines, gt_lines;
  for (const SyntheticTask& t : tasks) {
    task_lines.push_back({{"task_id", t.instruction.task_id},
                          {"scene_id", t.instruction.scene_id},
                          {"text", t.instruction.text}});
  }
  for (const GroundTruthTask& g : GroundTruth()) {
    gt_lines.push_back({{"task_id", g.task_id}, {"triplets", g.triplets}});
  }
  WriteLines(dir / "tasks.jsonl", task_lines);
  WriteLines(dir / "ground_truth.jsonl", gt_lines);
}

std::filesystem::path FreshTempDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("embodied_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace embodied::testing
