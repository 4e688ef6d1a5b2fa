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

#ifndef EMBODIED_MOTION_H_
#define EMBODIED_MOTION_H_

#include <array>
#include <string_view>

#include <Eigen/Core>

namespace embodied {

enum class MotionType { kRotation, kTranslation };

// Discrete motion directions. The four directed ones belong to translation,
// the two bare families to rotation.
enum class AxisPrimitive {
  kHorizontalInwards,
  kHorizontalOutwards,
  kVerticalInwards,
  kVerticalOutwards,
  kHorizontal,
  kVertical,
};

inline constexpr std::array<MotionType, 2> kAllMotionTypes = {
    MotionType::kRotation, MotionType::kTranslation};

inline constexpr std::array<AxisPrimitive, 6> kAllAxisPrimitives = {
    AxisPrimitive::kHorizontalInwards, AxisPrimitive::kHorizontalOutwards,
    AxisPrimitive::kVerticalInwards,   AxisPrimitive::kVerticalOutwards,
    AxisPrimitive::kHorizontal,        AxisPrimitive::kVertical};

std::string_view ToString(MotionType type);
std::string_view ToString(AxisPrimitive axis);
MotionType ParseMotionType(std::string_view name);
AxisPrimitive ParseAxisPrimitive(std::string_view name);

bool IsConsistent(MotionType type, AxisPrimitive axis);

struct MotionGroundTruth {
  MotionType motion_type = MotionType::kTranslation;
  Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();  // unit length
  Eigen::Vector3d origin = Eigen::Vector3d::Zero();
};

// Index of the largest |component|; ties prefer z, then x, then y.
int DominantAxis(const Eigen::Vector3d& axis);

// Maps a continuous motion axis onto one of the six primitives. A dominant z
// component selects the vertical family. Translations are outwards when the
// axis points away from `reference_centroid` (a zero dot product counts as
// outwards); rotations keep only the family.
AxisPrimitive DiscretizeAxis(const Eigen::Vector3d& axis, MotionType type,
                             const Eigen::Vector3d& element_centroid,
                             const Eigen::Vector3d& reference_centroid);

}  // namespace embodied

#endif  // EMBODIED_MOTION_H_
