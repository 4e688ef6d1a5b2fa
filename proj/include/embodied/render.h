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

#ifndef EMBODIED_RENDER_H_
#define EMBODIED_RENDER_H_

#include <vector>

#include "embodied/camera.h"
#include "embodied/image.h"
#include "embodied/pointcloud.h"

namespace embodied {

inline constexpr int kDefaultSplatRadius = 2;

struct RenderedView {
  Image image;
  CameraPose pose;
  Intrinsics intrinsics;
  int view_index = 1;  // 1-based
};

// Z-buffered square point splats. Each in-front point whose rounded pixel
// lies on the image paints a (2r+1)^2 square at its center depth; the nearest
// point wins per pixel, with ties resolved in favor of the earlier point.
Image RenderView(const PointCloud& cloud, const CameraPose& pose,
                 const Intrinsics& intr, int splat_radius = kDefaultSplatRadius,
                 Rgb background = kWhite);

std::vector<RenderedView> RenderSweep(const PointCloud& cloud,
                                      const Eigen::Vector3d& center, int n,
                                      const Intrinsics& intr,
                                      int splat_radius = kDefaultSplatRadius);

}  // namespace embodied

#endif  // EMBODIED_RENDER_H_
