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

#ifndef EMBODIED_DESCRIPTORS_H_
#define EMBODIED_DESCRIPTORS_H_

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "embodied/pointcloud.h"

namespace embodied {

enum class AffordanceType {
  kRotate,
  kKeyPress,
  kTipPush,
  kHookPull,
  kPinchPull,
  kHookTurn,
  kFootPush,
  kPlugIn,
  kUnplug,
};

inline constexpr std::array<AffordanceType, 9> kAllAffordanceTypes = {
    AffordanceType::kRotate,    AffordanceType::kKeyPress,
    AffordanceType::kTipPush,   AffordanceType::kHookPull,
    AffordanceType::kPinchPull, AffordanceType::kHookTurn,
    AffordanceType::kFootPush,  AffordanceType::kPlugIn,
    AffordanceType::kUnplug};

std::string_view ToString(AffordanceType type);
// Throws kVocabulary naming the value.
AffordanceType ParseAffordanceType(std::string_view name);

// One segmented element as emitted by an external instance segmenter.
struct ElementProposal {
  PointMask mask;
  AffordanceType affordance_type = AffordanceType::kRotate;
  double confidence = 1.0;
};

// Compact per-element summary: position, full AABB size, affordance type.
struct Descriptor {
  int id = 0;
  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  Eigen::Vector3d extents = Eigen::Vector3d::Zero();
  AffordanceType affordance_type = AffordanceType::kRotate;
  double confidence = 1.0;
};

// Reads the proposal JSON array. Confidence defaults to 1.0 when absent.
std::vector<ElementProposal> LoadProposals(const std::filesystem::path& path);
std::vector<ElementProposal> ParseProposals(std::string_view json_text);
void SaveProposals(const std::vector<ElementProposal>& proposals,
                   const std::filesystem::path& path);

// ids are 1-based positions in `proposals`.
std::vector<Descriptor> BuildDescriptors(
    const PointCloud& cloud, const std::vector<ElementProposal>& proposals);

// Stand-in segmenter for synthetic scenes: clusters `candidates` into
// 26-connected components on a voxel grid of side `voxel_size`, labels each
// with `type`. Components are ordered by their smallest point index.
std::vector<ElementProposal> SegmentConnectedComponents(
    const PointCloud& cloud, const PointMask& candidates, double voxel_size,
    AffordanceType type);

}  // namespace embodied

#endif  // EMBODIED_DESCRIPTORS_H_
