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

// A small furnished room with planted interactive elements whose masks,
// motion types and axes are known exactly.

#ifndef EMBODIED_TESTS_SUPPORT_SYNTHETIC_SCENE_H_
#define EMBODIED_TESTS_SUPPORT_SYNTHETIC_SCENE_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "embodied/descriptors.h"
#include "embodied/eval.h"
#include "embodied/pipeline.h"
#include "embodied/pointcloud.h"
#include "json.hpp"

namespace embodied::testing {

struct PlantedElement {
  std::string name;
  PointMask mask;
  AffordanceType affordance_type;
  MotionGroundTruth motion;
  AxisPrimitive axis_primitive;  // discretized from motion.axis
};

struct SyntheticTask {
  TaskInstruction instruction;
  std::vector<int> element_ids;  // 1-based, into elements / proposals
};

struct SyntheticScene {
  PointCloud cloud;
  std::vector<PlantedElement> elements;
  std::vector<ElementProposal> proposals;  // one per element, same order
  std::vector<SyntheticTask> tasks;
  Eigen::Vector3d room_center;

  std::vector<GroundTruthTask> GroundTruth() const;

  // Scripted replies that answer every task correctly. Each entry of
  // `wrong_axis` (task id -> element id) swaps that element's direction.
  nlohmann::json CorrectScript(
      const std::map<std::string, int>& wrong_axis = {}) const;

  // cloud.ply, proposals.json, tasks.jsonl, ground_truth.jsonl
  void WriteInputs(const std::filesystem::path& dir) const;
};

SyntheticScene MakeApartmentScene();

// Inverts the direction of a translation primitive; rotations swap
// horizontal and vertical.
AxisPrimitive Flip(AxisPrimitive axis);

std::filesystem::path FreshTempDir(const std::string& name);

}  // namespace embodied::testing

#endif  // EMBODIED_TESTS_SUPPORT_SYNTHETIC_SCENE_H_
