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

#ifndef EMBODIED_CAMERA_H_
#define EMBODIED_CAMERA_H_

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "embodied/descriptors.h"
#include "embodied/pointcloud.h"

namespace embodied {

// Pinhole intrinsics in pixels.
struct Intrinsics {
  int width = 0;
  int height = 0;
  double fx = 0;
  double fy = 0;
  double cx = 0;
  double cy = 0;
};

// Level camera at `position` looking along yaw (0 = +x, counterclockwise
// seen from above). Pitch is always zero.
struct CameraPose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  double yaw = 0.0;
};

template <typename Scalar>
struct ProjectedPointT {
  Scalar u;
  Scalar v;
  Scalar depth;  // along the forward axis, always > 0
};
using ProjectedPoint = ProjectedPointT<double>;

inline constexpr double kBehindCameraEpsilon = 1e-6;

// `fov_deg` is horizontal. Throws kParameter outside (0, 180) or for a
// non-positive image size.
Intrinsics IntrinsicsFromFov(double fov_deg, int width, int height);

// x,y: mean of descriptor centroids; z: middle of the cloud's height range.
Eigen::Vector3d ObservationCenter(const PointCloud& cloud,
                                  const std::vector<Descriptor>& descriptors);

// n level poses at `center` with yaw (i-1)*2pi/n, i = 1..n.
std::vector<CameraPose> SweepPoses(const Eigen::Vector3d& center, int n);

// Camera frame basis: forward along yaw, up = +z, right = forward x up.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> CameraRotation(Scalar yaw) {
  using std::cos;
  using std::sin;
  Eigen::Matrix<Scalar, 3, 3> rows;
  rows.row(0) << sin(yaw), -cos(yaw), Scalar(0);  // right
  rows.row(1) << Scalar(0), Scalar(0), Scalar(1);  // up
  rows.row(2) << cos(yaw), sin(yaw), Scalar(0);   // forward
  return rows;
}

// World point to (right, up, forward) camera coordinates.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, 3, 1> WorldToCamera(
    const CameraPose& pose, const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  return CameraRotation<Scalar>(static_cast<Scalar>(pose.yaw)) *
         (p - pose.position.cast<Scalar>());
}

// Pinhole projection; nullopt when the point is at or behind the near
// epsilon plane.
template <typename Derived>
std::optional<ProjectedPointT<typename Derived::Scalar>> ProjectPoint(
    const Intrinsics& intr, const CameraPose& pose,
    const Eigen::MatrixBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Matrix<Scalar, 3, 1> c = WorldToCamera(pose, p);
  if (c.z() <= Scalar(kBehindCameraEpsilon)) return std::nullopt;
  return ProjectedPointT<Scalar>{
      Scalar(intr.cx) + Scalar(intr.fx) * (c.x() / c.z()),
      Scalar(intr.cy) - Scalar(intr.fy) * (c.y() / c.z()), c.z()};
}

// Whether (u, v) falls on the image plane [0, w) x [0, h).
template <typename Scalar>
bool InImage(const Intrinsics& intr, const ProjectedPointT<Scalar>& q) {
  return q.u >= 0 && q.v >= 0 && q.u < intr.width && q.v < intr.height;
}

}  // namespace embodied

#endif  // EMBODIED_CAMERA_H_
