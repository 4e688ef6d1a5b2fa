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

#include "embodied/motion.h"

#include <cmath>

#include <fmt/format.h>

#include "embodied/error.h"

namespace embodied {

std::string_view ToString(MotionType type) {
  switch (type) {
    case MotionType::kRotation: return "rotation";
    case MotionType::kTranslation: return "translation";
  }
  return "";
}

std::string_view ToString(AxisPrimitive axis) {
  switch (axis) {
    case AxisPrimitive::kHorizontalInwards: return "horizontal_inwards";
    case AxisPrimitive::kHorizontalOutwards: return "horizontal_outwards";
    case AxisPrimitive::kVerticalInwards: return "vertical_inwards";
    case AxisPrimitive::kVerticalOutwards: return "vertical_outwards";
    case AxisPrimitive::kHorizontal: return "horizontal";
    case AxisPrimitive::kVertical: return "vertical";
  }
  return "";
}

MotionType ParseMotionType(std::string_view name) {
  for (const MotionType type : kAllMotionTypes) {
    if (ToString(type) == name) return type;
  }
  Throw(ErrorKind::kVocabulary, fmt::format("unknown motion type '{}'", name));
}

AxisPrimitive ParseAxisPrimitive(std::string_view name) {
  for (const AxisPrimitive axis : kAllAxisPrimitives) {
    if (ToString(axis) == name) return axis;
  }
  Throw(ErrorKind::kVocabulary,
        fmt::format("unknown axis primitive '{}'", name));
}

bool IsConsistent(MotionType type, AxisPrimitive axis) {
  const bool bare =
      axis == AxisPrimitive::kHorizontal || axis == AxisPrimitive::kVertical;
  return (type == MotionType::kRotation) == bare;
}

int DominantAxis(const Eigen::Vector3d& axis) {
  const Eigen::Vector3d a = axis.cwiseAbs();
  int best = 2;
  for (const int i : {0, 1}) {
    if (a[i] > a[best]) best = i;
  }
  return best;
}

AxisPrimitive DiscretizeAxis(const Eigen::Vector3d& axis, MotionType type,
                             const Eigen::Vector3d& element_centroid,
                             const Eigen::Vector3d& reference_centroid) {
  if (!axis.allFinite() || axis.isZero(0.0)) {
    Throw(ErrorKind::kParameter, "motion axis must be finite and non-zero");
  }
  const bool vertical = DominantAxis(axis) == 2;
  if (type == MotionType::kRotation) {
    return vertical ? AxisPrimitive::kVertical : AxisPrimitive::kHorizontal;
  }
  // Normalize so the tie tolerance is scale free.
  const double dot =
      axis.normalized().dot(element_centroid - reference_centroid);
  const bool inwards = dot < -1e-9;
  if (vertical) {
    return inwards ? AxisPrimitive::kVerticalInwards
                   : AxisPrimitive::kVerticalOutwards;
  }
  return inwards ? AxisPrimitive::kHorizontalInwards
                 : AxisPrimitive::kHorizontalOutwards;
}

}  // namespace embodied
