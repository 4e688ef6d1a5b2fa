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

// nlohmann::json conversions for the on-disk formats. Enumerations travel as
// their lowercase snake_case names; masks as arrays of point indices.

#ifndef EMBODIED_SERIALIZATION_H_
#define EMBODIED_SERIALIZATION_H_

#include "embodied/camera.h"
#include "embodied/descriptors.h"
#include "embodied/motion.h"
#include "embodied/pointcloud.h"
#include "json.hpp"

namespace embodied {

struct Box2D;
struct LabelPlacement;
struct TripletPrediction;
struct TraceRecord;
struct GroundTruthTriplet;
struct MetricRow;
struct EvalReport;

void to_json(nlohmann::json& j, const PointMask& mask);
void from_json(const nlohmann::json& j, PointMask& mask);

void to_json(nlohmann::json& j, AffordanceType type);
void from_json(const nlohmann::json& j, AffordanceType& type);
void to_json(nlohmann::json& j, MotionType type);
void from_json(const nlohmann::json& j, MotionType& type);
void to_json(nlohmann::json& j, AxisPrimitive axis);
void from_json(const nlohmann::json& j, AxisPrimitive& axis);

// {"mask": [...], "affordance_type": "...", "confidence": x}; confidence is
// optional (1.0) and must lie in [0, 1].
void to_json(nlohmann::json& j, const ElementProposal& p);
void from_json(const nlohmann::json& j, ElementProposal& p);

void to_json(nlohmann::json& j, const Descriptor& d);

void to_json(nlohmann::json& j, const Intrinsics& intr);
void from_json(const nlohmann::json& j, Intrinsics& intr);
void to_json(nlohmann::json& j, const CameraPose& pose);
void from_json(const nlohmann::json& j, CameraPose& pose);

void to_json(nlohmann::json& j, const Box2D& box);
void from_json(const nlohmann::json& j, Box2D& box);
void to_json(nlohmann::json& j, const LabelPlacement& label);
void from_json(const nlohmann::json& j, LabelPlacement& label);

void to_json(nlohmann::json& j, const TripletPrediction& p);
void from_json(const nlohmann::json& j, TripletPrediction& p);
void to_json(nlohmann::json& j, const GroundTruthTriplet& g);
void from_json(const nlohmann::json& j, GroundTruthTriplet& g);
void to_json(nlohmann::json& j, const TraceRecord& r);

void to_json(nlohmann::json& j, const MetricRow& row);
void to_json(nlohmann::json& j, const EvalReport& report);

}  // namespace embodied

#endif  // EMBODIED_SERIALIZATION_H_
