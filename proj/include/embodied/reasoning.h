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

// Three-step reasoning over annotated surround views:
//   1. select  - pick the view in which the referenced elements are visible
//   2. ground  - name the element ids the instruction refers to
//   3. motion  - motion type and axis primitive for every grounded id
// Each step sends one request; a reply that violates the step's JSON
// contract is re-asked once, then fails with a protocol error.

#ifndef EMBODIED_REASONING_H_
#define EMBODIED_REASONING_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "embodied/chat.h"
#include "embodied/descriptors.h"
#include "embodied/motion.h"
#include "embodied/projection.h"
#include "json.hpp"

namespace embodied {

struct TaskInstruction {
  std::string task_id;
  std::string scene_id;
  std::string text;
};

struct TripletPrediction {
  int element_id = 0;
  PointMask mask;
  MotionType motion_type = MotionType::kTranslation;
  AxisPrimitive axis_primitive = AxisPrimitive::kHorizontalOutwards;
  double confidence = 1.0;

  friend bool operator==(const TripletPrediction&,
                         const TripletPrediction&) = default;
};

struct MotionEstimate {
  int element_id = 0;
  MotionType motion_type = MotionType::kTranslation;
  AxisPrimitive axis_primitive = AxisPrimitive::kHorizontalOutwards;

  friend bool operator==(const MotionEstimate&,
                         const MotionEstimate&) = default;
};

// One backend exchange (including a possible re-ask).
struct TraceRecord {
  std::string step;
  std::string system_text;
  std::string user_text;
  std::vector<int> image_views;  // view_index of every attached image
  std::vector<std::string> replies;
  nlohmann::json result;  // parsed outcome, null on failure
  std::string error;
};

using Trace = std::vector<TraceRecord>;

namespace step {
inline constexpr std::string_view kSelect = "select";
inline constexpr std::string_view kZoom = "zoom";
inline constexpr std::string_view kGround = "ground";
inline constexpr std::string_view kMotion = "motion";
}  // namespace step

// First balanced {...} in `text` that parses as JSON.
std::optional<nlohmann::json> ExtractJsonObject(std::string_view text);

// Returns the 1-based view_index of the chosen view. With `zoom`, a second
// round shows a 2x center crop of the chosen view and may revise the choice.
int SelectView(const std::vector<AnnotatedView>& views,
               const TaskInstruction& instr, VisionChatBackend& backend,
               Trace* trace = nullptr, bool zoom = false);

// Ids of the referenced elements; empty means the backend found none.
std::vector<int> GroundAffordance(const AnnotatedView& view,
                                  const TaskInstruction& instr,
                                  const std::vector<Descriptor>& descriptors,
                                  VisionChatBackend& backend,
                                  Trace* trace = nullptr);

// One estimate per grounded descriptor, in grounded order.
std::vector<MotionEstimate> EstimateMotion(
    const AnnotatedView& view, const TaskInstruction& instr,
    const std::vector<Descriptor>& grounded, VisionChatBackend& backend,
    Trace* trace = nullptr);

struct SceneArtifacts {
  std::vector<ElementProposal> proposals;
  std::vector<Descriptor> descriptors;  // ids index into proposals (1-based)
  std::vector<AnnotatedView> views;
};

struct ReasoningOptions {
  bool zoom = false;
};

struct TaskResult {
  std::vector<TripletPrediction> predictions;
  bool grounding_failed = false;
  int selected_view = 0;
};

// Runs select, ground and motion in order and joins the grounded ids back to
// the proposal masks. Backend and protocol errors propagate; a grounding
// failure returns an empty prediction list. `trace` receives one record per
// exchange, including the failing one when an error propagates.
TaskResult RunTask(const SceneArtifacts& scene, const TaskInstruction& instr,
                   VisionChatBackend& backend,
                   const ReasoningOptions& options = {},
                   Trace* trace = nullptr);

}  // namespace embodied

#endif  // EMBODIED_REASONING_H_
