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

#include "embodied/render.h"

#include <cmath>
#include <limits>

#include "embodied/error.h"

namespace embodied {

Image RenderView(const PointCloud& cloud, const CameraPose& pose,
                 const Intrinsics& intr, int splat_radius, Rgb background) {
  if (splat_radius < 0) {
    Throw(ErrorKind::kParameter, "splat radius must be >= 0");
  }
  Image image(intr.width, intr.height, background);
  std::vector<double> depth(
      static_cast<std::size_t>(intr.width) * intr.height,
      std::numeric_limits<double>::infinity());

  for (Eigen::Index i = 0; i < cloud.positions().cols(); ++i) {
    const auto q = ProjectPoint(intr, pose, cloud.positions().col(i));
    if (!q) continue;
    const double z = q->depth;
    const double px = std::floor(q->u + 0.5);
    const double py = std::floor(q->v + 0.5);
    if (px < 0 || py < 0 || px >= intr.width || py >= intr.height) continue;

    const int cx = static_cast<int>(px);
    const int cy = static_cast<int>(py);
    const Rgb color = {cloud.colors()(0, i), cloud.colors()(1, i),
                       cloud.colors()(2, i)};
    for (int y = std::max(cy - splat_radius, 0);
         y <= std::min(cy + splat_radius, intr.height - 1); ++y) {
      for (int x = std::max(cx - splat_radius, 0);
           x <= std::min(cx + splat_radius, intr.width - 1); ++x) {
        double& d = depth[static_cast<std::size_t>(y) * intr.width + x];
        if (z < d) {
          d = z;
          image.set(x, y, color);
        }
      }
    }
  }
  return image;
}

std::vector<RenderedView> RenderSweep(const PointCloud& cloud,
                                      const Eigen::Vector3d& center, int n,
                                      const Intrinsics& intr,
                                      int splat_radius) {
  const std::vector<CameraPose> poses = SweepPoses(center, n);
  std::vector<RenderedView> views;
  views.reserve(poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    views.push_back({RenderView(cloud, poses[i], intr, splat_radius), poses[i],
                     intr, static_cast<int>(i + 1)});
  }
  return views;
}

}  // namespace embodied
