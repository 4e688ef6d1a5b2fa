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

#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "embodied/descriptors.h"
#include "embodied/error.h"
#include "embodied/serialization.h"
#include "support/synthetic_scene.h"

namespace embodied {
namespace {

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no embodied::Error thrown";
  return ErrorKind::kInput;
}

TEST(AffordanceType, NamesRoundTrip) {
  ASSERT_EQ(kAllAffordanceTypes.size(), 9u);
  for (const AffordanceType t : kAllAffordanceTypes) {
    EXPECT_EQ(ParseAffordanceType(ToString(t)), t);
  }
  EXPECT_EQ(ToString(AffordanceType::kHookPull), "hook_pull");
  EXPECT_EQ(ToString(AffordanceType::kKeyPress), "key_press");
  EXPECT_EQ(KindOf([] { ParseAffordanceType("press"); }), ErrorKind::kVocabulary);
}

TEST(ParseProposals, Example) {
  const auto p = ParseProposals(
      R"([{"mask":[0,1],"affordance_type":"hook_pull","confidence":0.9}])");
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].mask, PointMask({0, 1}));
  EXPECT_EQ(p[0].affordance_type, AffordanceType::kHookPull);
  EXPECT_EQ(p[0].confidence, 0.9);
}

TEST(ParseProposals, ConfidenceDefaultsToOne) {
  const auto p = ParseProposals(R"([{"mask":[3],"affordance_type":"rotate"}])");
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].confidence, 1.0);
}

TEST(ParseProposals, EmptyArrayIsValid) {
  EXPECT_TRUE(ParseProposals("[]").empty());
}

TEST(ParseProposals, Errors) {
  EXPECT_EQ(KindOf([] {
              ParseProposals(R"([{"mask":[0],"affordance_type":"press"}])");
            }),
            ErrorKind::kVocabulary);
  EXPECT_EQ(KindOf([] { ParseProposals("[{"); }), ErrorKind::kFormat);
  EXPECT_EQ(KindOf([] { ParseProposals("{}"); }), ErrorKind::kFormat);
  EXPECT_EQ(KindOf([] { ParseProposals(R"([{"affordance_type":"rotate"}])"); }),
            ErrorKind::kFormat);
  EXPECT_EQ(KindOf([] {
              ParseProposals(R"([{"mask":[-1],"affordance_type":"rotate"}])");
            }),
            ErrorKind::kFormat);
  EXPECT_EQ(KindOf([] {
              ParseProposals(R"([{"mask":[],"affordance_type":"rotate"}])");
            }),
            ErrorKind::kData);
  EXPECT_EQ(KindOf([] {
              ParseProposals(
                  R"([{"mask":[1],"affordance_type":"rotate","confidence":1.5}])");
            }),
            ErrorKind::kRange);
}

TEST(ParseProposals, ErrorNamesTheProposal) {
  try {
    ParseProposals(R"([{"mask":[0],"affordance_type":"rotate"},
                       {"mask":[0],"affordance_type":"twist"}])");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("proposal 1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("twist"), std::string::npos);
  }
}

TEST(Proposals, SaveLoadRoundTrip) {
  const std::vector<ElementProposal> in = {
      {PointMask({4, 2}), AffordanceType::kUnplug, 0.25},
      {PointMask({9}), AffordanceType::kFootPush, 1.0}};
  const auto dir = testing::FreshTempDir("proposals");
  SaveProposals(in, dir / "p.json");
  const auto out = LoadProposals(dir / "p.json");
  ASSERT_EQ(out.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(out[i].mask, in[i].mask);
    EXPECT_EQ(out[i].affordance_type, in[i].affordance_type);
    EXPECT_EQ(out[i].confidence, in[i].confidence);
  }
  EXPECT_EQ(KindOf([&] { LoadProposals(dir / "nope.json"); }), ErrorKind::kIo);
}

TEST(BuildDescriptors, TwoPointMask) {
  Eigen::Matrix3Xd xyz = Eigen::Matrix3Xd::Zero(3, 3);
  xyz(0, 1) = 1;
  xyz.col(2) << 5, 5, 5;
  const auto d = BuildDescriptors(
      PointCloud(xyz), {{PointMask({0, 1}), AffordanceType::kTipPush, 0.5},
                        {PointMask({2}), AffordanceType::kRotate, 1.0}});
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d[0].id, 1);
  EXPECT_EQ(d[0].centroid, Eigen::Vector3d(0.5, 0, 0));
  EXPECT_EQ(d[0].extents, Eigen::Vector3d(1, 0, 0));
  EXPECT_EQ(d[0].affordance_type, AffordanceType::kTipPush);
  EXPECT_EQ(d[0].confidence, 0.5);
  EXPECT_EQ(d[1].id, 2);
  EXPECT_EQ(d[1].extents, Eigen::Vector3d::Zero());
}

TEST(BuildDescriptors, MatchesLinearScan) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-3, 3);
  std::uniform_int_distribution<std::size_t> pick(0, 299);
  Eigen::Matrix3Xd xyz(3, 300);
  for (int i = 0; i < 300; ++i) xyz.col(i) << u(rng), u(rng), u(rng);
  const PointCloud cloud(xyz);
  std::vector<ElementProposal> proposals;
  for (int j = 0; j < 10; ++j) {
    std::vector<std::size_t> idx;
    for (int k = 0; k < 1 + j * 3; ++k) idx.push_back(pick(rng));
    proposals.push_back({PointMask(idx), kAllAffordanceTypes[j % 9], 0.1 * j});
  }
  const auto ds = BuildDescriptors(cloud, proposals);
  ASSERT_EQ(ds.size(), 10u);
  for (int j = 0; j < 10; ++j) {
    const auto& idx = proposals[j].mask.indices();
    double sum[3] = {0, 0, 0}, lo[3], hi[3];
    for (int k = 0; k < 3; ++k) lo[k] = INFINITY, hi[k] = -INFINITY;
    for (const std::size_t i : idx) {
      for (int k = 0; k < 3; ++k) {
        sum[k] += xyz(k, i);
        lo[k] = std::min(lo[k], xyz(k, i));
        hi[k] = std::max(hi[k], xyz(k, i));
      }
    }
    EXPECT_EQ(ds[j].id, j + 1);
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(ds[j].centroid[k], sum[k] / idx.size(), 1e-12);
      EXPECT_EQ(ds[j].extents[k], hi[k] - lo[k]);
      EXPECT_GE(ds[j].centroid[k], lo[k]);
      EXPECT_LE(ds[j].centroid[k], hi[k]);
    }
  }
}

TEST(BuildDescriptors, TranslationEquivariance) {
  const auto scene = testing::MakeApartmentScene();
  const Eigen::Vector3d shift(10, -4, 2.5);
  const PointCloud moved(scene.cloud.positions().colwise() + shift,
                         scene.cloud.colors());
  const auto a = BuildDescriptors(scene.cloud, scene.proposals);
  const auto b = BuildDescriptors(moved, scene.proposals);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    EXPECT_TRUE(b[j].centroid.isApprox(a[j].centroid + shift, 1e-12));
    EXPECT_TRUE((b[j].extents - a[j].extents).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST(BuildDescriptors, OutOfRangeIndexNamesTheProposal) {
  const PointCloud cloud(Eigen::Matrix3Xd::Zero(3, 4));
  try {
    BuildDescriptors(cloud, {{PointMask({0}), AffordanceType::kRotate, 1.0},
                             {PointMask({1, 9}), AffordanceType::kRotate, 1.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIndex);
    EXPECT_NE(std::string(e.what()).find("proposal 2"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find('9'), std::string::npos);
  }
}

TEST(SegmentConnectedComponents, SeparatesClusters) {
  Eigen::Matrix3Xd xyz(3, 7);
  xyz << 0, 0.05, 0.1, 2, 2.05, 5, 0.15,  //
      0, 0, 0, 0, 0, 0, 0,                 //
      0, 0, 0, 0, 0, 0, 0;
  const PointCloud cloud(xyz);
  const auto parts = SegmentConnectedComponents(
      cloud, PointMask({0, 1, 2, 3, 4, 6}), 0.1, AffordanceType::kKeyPress);
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0].mask, PointMask({0, 1, 2, 6}));
  EXPECT_EQ(parts[1].mask, PointMask({3, 4}));
  EXPECT_EQ(parts[0].affordance_type, AffordanceType::kKeyPress);
  EXPECT_THROW(SegmentConnectedComponents(cloud, PointMask({0}), 0.0,
                                          AffordanceType::kKeyPress),
               Error);
}

TEST(SegmentConnectedComponents, RecoversPlantedElements) {
  const auto scene = testing::MakeApartmentScene();
  PointMask all;
  for (const auto& e : scene.elements) all = MaskUnion(all, e.mask);
  const auto parts = SegmentConnectedComponents(scene.cloud, all, 0.03,
                                                AffordanceType::kRotate);
  // The two drawer handles are 0.28 m apart; every element is its own part.
  ASSERT_EQ(parts.size(), scene.elements.size());
  for (const auto& e : scene.elements) {
    const bool found = std::any_of(parts.begin(), parts.end(),
                                   [&](const auto& p) { return p.mask == e.mask; });
    EXPECT_TRUE(found) << e.name;
  }
}

}  // namespace
}  // namespace embodied
