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

#include "embodied/serialization.h"

#include <fmt/format.h>

#include "embodied/error.h"
#include "embodied/eval.h"
#include "embodied/projection.h"
#include "embodied/reasoning.h"

namespace embodied {
namespace {

nlohmann::json Vec3(const Eigen::Vector3d& v) {
  return nlohmann::json::array({v.x(), v.y(), v.z()});
}

Eigen::Vector3d ReadVec3(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3) {
    Throw(ErrorKind::kFormat, "expected a 3-element array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

void to_json(nlohmann::json& j, const PointMask& mask) { j = mask.indices(); }

void from_json(const nlohmann::json& j, PointMask& mask) {
  if (!j.is_array()) Throw(ErrorKind::kFormat, "mask must be an array");
  std::vector<std::size_t> indices;
  indices.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      Throw(ErrorKind::kFormat,
            fmt::format("mask entry {} is not a non-negative integer",
                        v.dump()));
    }
    indices.push_back(v.get<std::size_t>());
  }
  mask = PointMask(std::move(indices));
}

void to_json(nlohmann::json& j, AffordanceType type) { j = ToString(type); }
void from_json(const nlohmann::json& j, AffordanceType& type) {
  type = ParseAffordanceType(j.get<std::string>());
}
void to_json(nlohmann::json& j, MotionType type) { j = ToString(type); }
void from_json(const nlohmann::json& j, MotionType& type) {
  type = ParseMotionType(j.get<std::string>());
}
void to_json(nlohmann::json& j, AxisPrimitive axis) { j = ToString(axis); }
void from_json(const nlohmann::json& j, AxisPrimitive& axis) {
  axis = ParseAxisPrimitive(j.get<std::string>());
}

void to_json(nlohmann::json& j, const ElementProposal& p) {
  j = {{"mask", p.mask},
       {"affordance_type", p.affordance_type},
       {"confidence", p.confidence}};
}

void from_json(const nlohmann::json& j, ElementProposal& p) {
  if (!j.is_object()) Throw(ErrorKind::kFormat, "proposal must be an object");
  p.mask = j.at("mask").get<PointMask>();
  p.affordance_type = j.at("affordance_type").get<AffordanceType>();
  p.confidence = j.contains("confidence") ? j["confidence"].get<double>() : 1.0;
  if (!(p.confidence >= 0.0 && p.confidence <= 1.0)) {
    Throw(ErrorKind::kRange,
          fmt::format("confidence {} outside [0, 1]", p.confidence));
  }
  if (p.mask.empty()) Throw(ErrorKind::kData, "proposal mask is empty");
}

void to_json(nlohmann::json& j, const Descriptor& d) {
  j = {{"id", d.id},
       {"centroid", Vec3(d.centroid)},
       {"extents", Vec3(d.extents)},
       {"affordance_type", d.affordance_type},
       {"confidence", d.confidence}};
}

void to_json(nlohmann::json& j, const Intrinsics& intr) {
  j = {{"width", intr.width}, {"height", intr.height}, {"fx", intr.fx},
       {"fy", intr.fy},       {"cx", intr.cx},         {"cy", intr.cy}};
}

void from_json(const nlohmann::json& j, Intrinsics& intr) {
  intr.width = j.at("width").get<int>();
  intr.height = j.at("height").get<int>();
  intr.fx = j.at("fx").get<double>();
  intr.fy = j.at("fy").get<double>();
  intr.cx = j.at("cx").get<double>();
  intr.cy = j.at("cy").get<double>();
}

void to_json(nlohmann::json& j, const CameraPose& pose) {
  j = {{"position", Vec3(pose.position)}, {"yaw", pose.yaw}};
}

void from_json(const nlohmann::json& j, CameraPose& pose) {
  pose.position = ReadVec3(j.at("position"));
  pose.yaw = j.at("yaw").get<double>();
}

void to_json(nlohmann::json& j, const Box2D& box) {
  j = {{"x_min", box.x_min},
       {"y_min", box.y_min},
       {"x_max", box.x_max},
       {"y_max", box.y_max}};
}

void from_json(const nlohmann::json& j, Box2D& box) {
  box.x_min = j.at("x_min").get<int>();
  box.y_min = j.at("y_min").get<int>();
  box.x_max = j.at("x_max").get<int>();
  box.y_max = j.at("y_max").get<int>();
}

void to_json(nlohmann::json& j, const LabelPlacement& label) {
  j = {{"id", label.element_id},
       {"rect", label.rect},
       {"anchor", ToString(label.anchor_used)}};
}

void from_json(const nlohmann::json& j, LabelPlacement& label) {
  label.element_id = j.at("id").get<int>();
  label.rect = j.at("rect").get<Box2D>();
  label.anchor_used = ParseAnchor(j.at("anchor").get<std::string>());
}

void to_json(nlohmann::json& j, const TripletPrediction& p) {
  j = {{"element_id", p.element_id},
       {"mask", p.mask},
       {"motion_type", p.motion_type},
       {"axis_primitive", p.axis_primitive},
       {"confidence", p.confidence}};
}

void from_json(const nlohmann::json& j, TripletPrediction& p) {
  p.element_id = j.at("element_id").get<int>();
  p.mask = j.at("mask").get<PointMask>();
  p.motion_type = j.at("motion_type").get<MotionType>();
  p.axis_primitive = j.at("axis_primitive").get<AxisPrimitive>();
  p.confidence = j.value("confidence", 1.0);
  if (!IsConsistent(p.motion_type, p.axis_primitive)) {
    Throw(ErrorKind::kData,
          fmt::format("prediction {}: axis {} inconsistent with {}",
                      p.element_id, ToString(p.axis_primitive),
                      ToString(p.motion_type)));
  }
}

void to_json(nlohmann::json& j, const GroundTruthTriplet& g) {
  j = {{"mask", g.mask},
       {"motion_type", g.motion_type},
       {"axis_primitive", g.axis_primitive},
       {"affordance_type", g.affordance_type}};
}

void from_json(const nlohmann::json& j, GroundTruthTriplet& g) {
  g.mask = j.at("mask").get<PointMask>();
  g.motion_type = j.at("motion_type").get<MotionType>();
  g.axis_primitive = j.at("axis_primitive").get<AxisPrimitive>();
  g.affordance_type = j.at("affordance_type").get<AffordanceType>();
  if (!IsConsistent(g.motion_type, g.axis_primitive)) {
    Throw(ErrorKind::kData,
          fmt::format("ground truth axis {} inconsistent with {}",
                      ToString(g.axis_primitive), ToString(g.motion_type)));
  }
}

void to_json(nlohmann::json& j, const TraceRecord& r) {
  j = {{"step", r.step},
       {"system", r.system_text},
       {"user", r.user_text},
       {"image_views", r.image_views},
       {"replies", r.replies},
       {"result", r.result}};
  if (!r.error.empty()) j["error"] = r.error;
}

void to_json(nlohmann::json& j, const MetricRow& row) {
  j = {{"tasks", row.num_tasks}, {"miou", row.miou},     {"ap", row.ap},
       {"ap50", row.ap50},       {"ap25", row.ap25},     {"ap25_t", row.ap25_t},
       {"ap25_td", row.ap25_td}};
}

void to_json(nlohmann::json& j, const EvalReport& report) {
  j = report.overall;
  nlohmann::json per_type = nlohmann::json::object();
  for (const auto& [type, ap50] : report.per_type_ap50) {
    per_type[std::string(ToString(type))] = ap50;
  }
  j["per_type"] = per_type;
  j["per_cardinality"] = {{"unique", report.unique},
                          {"multiple", report.multiple}};
  j["warnings"] = report.warnings;
}

}  // namespace embodied
