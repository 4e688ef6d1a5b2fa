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

#include "embodied/descriptors.h"

#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "embodied/error.h"
#include "embodied/serialization.h"
#include "json.hpp"

namespace embodied {

std::string_view ToString(AffordanceType type) {
  switch (type) {
    case AffordanceType::kRotate: return "rotate";
    case AffordanceType::kKeyPress: return "key_press";
    case AffordanceType::kTipPush: return "tip_push";
    case AffordanceType::kHookPull: return "hook_pull";
    case AffordanceType::kPinchPull: return "pinch_pull";
    case AffordanceType::kHookTurn: return "hook_turn";
    case AffordanceType::kFootPush: return "foot_push";
    case AffordanceType::kPlugIn: return "plug_in";
    case AffordanceType::kUnplug: return "unplug";
  }
  return "";
}

AffordanceType ParseAffordanceType(std::string_view name) {
  for (const AffordanceType type : kAllAffordanceTypes) {
    if (ToString(type) == name) return type;
  }
  Throw(ErrorKind::kVocabulary,
        fmt::format("unknown affordance_type '{}'", name));
}

std::vector<ElementProposal> ParseProposals(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    Throw(ErrorKind::kFormat, fmt::format("proposals: {}", e.what()));
  }
  if (!doc.is_array()) {
    Throw(ErrorKind::kFormat, "proposals: top level must be an array");
  }
  std::vector<ElementProposal> proposals;
  proposals.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    try {
      proposals.push_back(doc[i].get<ElementProposal>());
    } catch (const Error& e) {
      Throw(e.kind(), fmt::format("proposal {}: {}", i, e.what()));
    } catch (const nlohmann::json::exception& e) {
      Throw(ErrorKind::kFormat, fmt::format("proposal {}: {}", i, e.what()));
    }
  }
  return proposals;
}

std::vector<ElementProposal> LoadProposals(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    Throw(ErrorKind::kIo, fmt::format("cannot open '{}'", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseProposals(buffer.str());
  } catch (const Error& e) {
    Throw(e.kind(), fmt::format("{}: {}", path.string(), e.what()));
  }
}

void SaveProposals(const std::vector<ElementProposal>& proposals,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    Throw(ErrorKind::kIo, fmt::format("cannot write '{}'", path.string()));
  }
  out << nlohmann::json(proposals).dump(2) << "\n";
}

std::vector<Descriptor> BuildDescriptors(
    const PointCloud& cloud, const std::vector<ElementProposal>& proposals) {
  std::vector<Descriptor> descriptors;
  descriptors.reserve(proposals.size());
  for (std::size_t j = 0; j < proposals.size(); ++j) {
    const ElementProposal& proposal = proposals[j];
    try {
      proposal.mask.Validate(cloud.size());
    } catch (const Error& e) {
      Throw(ErrorKind::kIndex, fmt::format("proposal {}: {}", j + 1, e.what()));
    }
    if (proposal.mask.empty()) {
      Throw(ErrorKind::kEmptyInput,
            fmt::format("proposal {}: empty mask", j + 1));
    }
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    for (const std::size_t i : proposal.mask.indices()) {
      sum += cloud.position(i);
    }
    const Aabb box = Bounds(cloud, proposal.mask);
    Descriptor d;
    d.id = static_cast<int>(j + 1);
    d.centroid = sum / static_cast<double>(proposal.mask.size());
    d.extents = box.extents();
    d.affordance_type = proposal.affordance_type;
    d.confidence = proposal.confidence;
    descriptors.push_back(d);
  }
  return descriptors;
}

std::vector<ElementProposal> SegmentConnectedComponents(
    const PointCloud& cloud, const PointMask& candidates, double voxel_size,
    AffordanceType type) {
  if (!(voxel_size > 0.0)) {
    Throw(ErrorKind::kParameter, "voxel_size must be positive");
  }
  candidates.Validate(cloud.size());

  using Key = std::array<long long, 3>;
  std::map<Key, std::vector<std::size_t>> voxels;
  std::vector<Key> key_of(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const Eigen::Vector3d p = cloud.position(candidates.indices()[k]);
    const Key key = {static_cast<long long>(std::floor(p.x() / voxel_size)),
                     static_cast<long long>(std::floor(p.y() / voxel_size)),
                     static_cast<long long>(std::floor(p.z() / voxel_size))};
    voxels[key].push_back(k);
    key_of[k] = key;
  }

  // Union-find over occupied voxels.
  std::map<Key, Key> parent;
  for (const auto& [key, _] : voxels) parent[key] = key;
  auto find = [&](Key key) {
    while (parent[key] != key) {
      parent[key] = parent[parent[key]];
      key = parent[key];
    }
    return key;
  };
  for (const auto& [key, _] : voxels) {
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        for (long long dz = -1; dz <= 1; ++dz) {
          const Key other = {key[0] + dx, key[1] + dy, key[2] + dz};
          if (voxels.count(other) == 0) continue;
          const Key a = find(key);
          const Key b = find(other);
          if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
      }
    }
  }

  std::map<Key, std::size_t> component_of_root;
  std::vector<std::vector<std::size_t>> components;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const Key root = find(key_of[k]);
    auto [it, inserted] =
        component_of_root.emplace(root, components.size());
    if (inserted) components.emplace_back();
    components[it->second].push_back(candidates.indices()[k]);
  }

  std::vector<ElementProposal> proposals;
  proposals.reserve(components.size());
  for (auto& indices : components) {
    proposals.push_back(
        {PointMask::FromSorted(std::move(indices)), type, 1.0});
  }
  return proposals;
}

}  // namespace embodied
