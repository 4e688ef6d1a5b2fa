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

#include "embodied/camera.h"

#include <fmt/format.h>

#include "embodied/error.h"

namespace embodied {

Intrinsics IntrinsicsFromFov(double fov_deg, int width, int height) {
  if (!(fov_deg > 0.0 && fov_deg < 180.0)) {
    Throw(ErrorKind::kParameter,
          fmt::format("field of view {} outside (0, 180) degrees", fov_deg));
  }
  if (width <= 0 || height <= 0) {
    Throw(ErrorKind::kParameter,
          fmt::format("image size {}x{} must be positive", width, height));
  }
  const double half_fov = fov_deg * std::numbers::pi / 360.0;
  const double f = (width / 2.0) / std::tan(half_fov);
  return {width, height, f, f, width / 2.0, height / 2.0};
}

Eigen::Vector3d ObservationCenter(const PointCloud& cloud,
                                  const std::vector<Descriptor>& descriptors) {
  if (descriptors.empty()) {
    Throw(ErrorKind::kEmptyInput, "observation center needs >= 1 descriptor");
  }
  const Aabb bounds = Bounds(cloud);
  Eigen::Vector2d xy = Eigen::Vector2d::Zero();
  for (const Descriptor& d : descriptors) xy += d.centroid.head<2>();
  xy /= static_cast<double>(descriptors.size());
  return {xy.x(), xy.y(), 0.5 * (bounds.min.z() + bounds.max.z())};
}

std::vector<CameraPose> SweepPoses(const Eigen::Vector3d& center, int n) {
  if (n < 1) {
    Throw(ErrorKind::kParameter, fmt::format("sweep needs n >= 1, got {}", n));
  }
  std::vector<CameraPose> poses;
  poses.reserve(n);
  for (int i = 0; i < n; ++i) {
    poses.push_back({center, i * 2.0 * std::numbers::pi / n});
  }
  return poses;
}

}  // namespace embodied
