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

#include "embodied/pointcloud.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

#include "embodied/error.h"

namespace embodied {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kData: return "data error";
    case ErrorKind::kParameter: return "parameter error";
    case ErrorKind::kEmptyInput: return "empty-input error";
    case ErrorKind::kIndex: return "index error";
    case ErrorKind::kVocabulary: return "vocabulary error";
    case ErrorKind::kRange: return "range error";
    case ErrorKind::kIo: return "I/O error";
    case ErrorKind::kInput: return "input error";
    case ErrorKind::kBackend: return "backend error";
    case ErrorKind::kProtocol: return "protocol error";
  }
  return "error";
}

namespace {

void CheckFinite(const Eigen::Matrix3Xd& positions) {
  for (Eigen::Index i = 0; i < positions.cols(); ++i) {
    if (!positions.col(i).allFinite()) {
      Throw(ErrorKind::kData,
            fmt::format("non-finite coordinate at vertex {}", i));
    }
  }
}

}  // namespace

PointCloud::PointCloud(Eigen::Matrix3Xd positions)
    : positions_(std::move(positions)),
      colors_(Colors3X::Constant(3, positions_.cols(), kDefaultGray)) {
  CheckFinite(positions_);
}

PointCloud::PointCloud(Eigen::Matrix3Xd positions, Colors3X colors)
    : positions_(std::move(positions)), colors_(std::move(colors)) {
  if (colors_.cols() != positions_.cols()) {
    Throw(ErrorKind::kData,
          fmt::format("cloud has {} positions but {} colors",
                      positions_.cols(), colors_.cols()));
  }
  CheckFinite(positions_);
}

PointMask::PointMask(std::vector<std::size_t> indices)
    : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()),
                 indices_.end());
}

PointMask PointMask::FromSorted(std::vector<std::size_t> indices) {
  PointMask mask;
  mask.indices_ = std::move(indices);
  return mask;
}

bool PointMask::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

void PointMask::Validate(std::size_t cloud_size) const {
  if (!indices_.empty() && indices_.back() >= cloud_size) {
    const auto bad = std::lower_bound(indices_.begin(), indices_.end(),
                                      cloud_size);
    Throw(ErrorKind::kIndex,
          fmt::format("mask index {} out of range for cloud of {} points",
                      *bad, cloud_size));
  }
}

PointMask MaskUnion(const PointMask& a, const PointMask& b) {
  std::vector<std::size_t> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.indices().begin(), a.indices().end(), b.indices().begin(),
                 b.indices().end(), std::back_inserter(out));
  return PointMask::FromSorted(std::move(out));
}

std::size_t IntersectionSize(const PointMask& a, const PointMask& b) {
  std::size_t count = 0;
  auto ia = a.indices().begin();
  auto ib = b.indices().begin();
  while (ia != a.indices().end() && ib != b.indices().end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

Aabb Bounds(const PointCloud& cloud) {
  if (cloud.empty()) {
    Throw(ErrorKind::kEmptyInput, "bounds of an empty cloud");
  }
  return {cloud.positions().rowwise().minCoeff(),
          cloud.positions().rowwise().maxCoeff()};
}

Aabb Bounds(const PointCloud& cloud, const PointMask& mask) {
  if (mask.empty()) {
    Throw(ErrorKind::kEmptyInput, "bounds of an empty mask");
  }
  mask.Validate(cloud.size());
  Aabb box{cloud.position(mask.indices().front()),
           cloud.position(mask.indices().front())};
  for (const std::size_t i : mask.indices()) {
    const Eigen::Vector3d p = cloud.position(i);
    box.min = box.min.cwiseMin(p);
    box.max = box.max.cwiseMax(p);
  }
  return box;
}

double DilationRadius(long long t, double delta0, double beta, long long tau) {
  if (!(delta0 > 0.0)) {
    Throw(ErrorKind::kParameter, "dilation delta0 must be positive");
  }
  if (tau < 1) {
    Throw(ErrorKind::kParameter, "dilation tau must be >= 1");
  }
  if (!(beta > 0.0 && beta <= 1.0)) {
    Throw(ErrorKind::kParameter, "dilation beta must lie in (0, 1]");
  }
  if (t < 0) {
    Throw(ErrorKind::kParameter, "dilation iteration must be >= 0");
  }
  const long long steps = t / tau;
  return delta0 * std::pow(beta, static_cast<double>(steps));
}

namespace {

struct CellKey {
  std::int64_t x, y, z;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.x) * 73856093u;
    h ^= static_cast<std::size_t>(k.y) * 19349663u;
    h ^= static_cast<std::size_t>(k.z) * 83492791u;
    return h;
  }
};

CellKey CellOf(const Eigen::Vector3d& p, double cell) {
  return {static_cast<std::int64_t>(std::floor(p.x() / cell)),
          static_cast<std::int64_t>(std::floor(p.y() / cell)),
          static_cast<std::int64_t>(std::floor(p.z() / cell))};
}

PointMask DilateFullScan(const PointCloud& cloud, const PointMask& mask,
                         double radius) {
  const double r2 = radius * radius;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Eigen::Vector3d p = cloud.position(i);
    for (const std::size_t j : mask.indices()) {
      if ((cloud.position(j) - p).squaredNorm() < r2) {
        out.push_back(i);
        break;
      }
    }
  }
  return PointMask::FromSorted(std::move(out));
}

}  // namespace

PointMask DilateMask(const PointCloud& cloud, const PointMask& mask,
                     double radius) {
  mask.Validate(cloud.size());
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    Throw(ErrorKind::kParameter, "dilation radius must be finite and >= 0");
  }
  if (radius == 0.0 || mask.empty()) {
    return mask;
  }

  const Aabb box = Bounds(cloud);
  const double max_coord = std::max(box.min.cwiseAbs().maxCoeff(),
                                    box.max.cwiseAbs().maxCoeff());
  // Large radii make the grid degenerate; tiny ones overflow the cell keys.
  if (radius > box.diagonal() / 4.0 || max_coord / radius > 1e15) {
    return DilateFullScan(cloud, mask, radius);
  }

  std::unordered_map<CellKey, std::vector<std::size_t>, CellKeyHash> grid;
  for (const std::size_t j : mask.indices()) {
    grid[CellOf(cloud.position(j), radius)].push_back(j);
  }

  const double r2 = radius * radius;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Eigen::Vector3d p = cloud.position(i);
    const CellKey c = CellOf(p, radius);
    bool hit = false;
    for (std::int64_t dx = -1; dx <= 1 && !hit; ++dx) {
      for (std::int64_t dy = -1; dy <= 1 && !hit; ++dy) {
        for (std::int64_t dz = -1; dz <= 1 && !hit; ++dz) {
          const auto it = grid.find({c.x + dx, c.y + dy, c.z + dz});
          if (it == grid.end()) continue;
          for (const std::size_t j : it->second) {
            if ((cloud.position(j) - p).squaredNorm() < r2) {
              hit = true;
              break;
            }
          }
        }
      }
    }
    if (hit) out.push_back(i);
  }
  return PointMask::FromSorted(std::move(out));
}

}  // namespace embodied
