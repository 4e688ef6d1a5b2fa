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

#ifndef EMBODIED_POINTCLOUD_H_
#define EMBODIED_POINTCLOUD_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace embodied {

using Colors3X = Eigen::Matrix<std::uint8_t, 3, Eigen::Dynamic>;

inline constexpr std::uint8_t kDefaultGray = 128;

// Scanned scene: one column per point. Units are meters, +z is up.
class PointCloud {
 public:
  PointCloud() = default;
  // Colors default to mid-gray.
  explicit PointCloud(Eigen::Matrix3Xd positions);
  // Throws kData if sizes differ or a coordinate is non-finite.
  PointCloud(Eigen::Matrix3Xd positions, Colors3X colors);

  std::size_t size() const { return static_cast<std::size_t>(positions_.cols()); }
  bool empty() const { return positions_.cols() == 0; }

  const Eigen::Matrix3Xd& positions() const { return positions_; }
  const Colors3X& colors() const { return colors_; }

  Eigen::Vector3d position(std::size_t i) const {
    return positions_.col(static_cast<Eigen::Index>(i));
  }

 private:
  Eigen::Matrix3Xd positions_;
  Colors3X colors_;
};

// Strictly increasing point indices into a PointCloud.
class PointMask {
 public:
  PointMask() = default;
  // Sorts and deduplicates.
  explicit PointMask(std::vector<std::size_t> indices);

  static PointMask FromSorted(std::vector<std::size_t> indices);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(std::size_t index) const;

  // Throws kIndex naming the first offending index.
  void Validate(std::size_t cloud_size) const;

  friend bool operator==(const PointMask&, const PointMask&) = default;

 private:
  std::vector<std::size_t> indices_;
};

PointMask MaskUnion(const PointMask& a, const PointMask& b);
std::size_t IntersectionSize(const PointMask& a, const PointMask& b);

struct Aabb {
  Eigen::Vector3d min;
  Eigen::Vector3d max;

  Eigen::Vector3d center() const { return 0.5 * (min + max); }
  Eigen::Vector3d extents() const { return max - min; }
  double diagonal() const { return (max - min).norm(); }
};

// Throws kEmptyInput on an empty cloud.
Aabb Bounds(const PointCloud& cloud);
Aabb Bounds(const PointCloud& cloud, const PointMask& mask);

// PLY vertex ingestion. ASCII and binary little-endian are accepted; x,y,z
// may be float or double, red/green/blue must be uchar. Other elements and
// properties are skipped.
PointCloud LoadPly(const std::filesystem::path& path);

// Writes binary little-endian PLY with float32 positions and uchar colors.
void SavePly(const PointCloud& cloud, const std::filesystem::path& path);

// Curriculum radius schedule: delta0 * beta^floor(t / tau).
double DilationRadius(long long t, double delta0, double beta, long long tau);

// Every cloud point strictly closer than `radius` to some masked point.
// radius == 0 returns the input mask unchanged.
PointMask DilateMask(const PointCloud& cloud, const PointMask& mask,
                     double radius);

}  // namespace embodied

#endif  // EMBODIED_POINTCLOUD_H_
