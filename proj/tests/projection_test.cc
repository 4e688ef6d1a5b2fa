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

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>
#include <gtest/gtest.h>

#include "embodied/error.h"
#include "embodied/projection.h"
#include "support/oracles.h"

namespace embodied {
namespace {

using namespace testing;

constexpr double kPi = std::numbers::pi;

Descriptor Desc(int id, const Eigen::Vector3d& c, const Eigen::Vector3d& e,
                AffordanceType t = AffordanceType::kRotate) {
  Descriptor d;
  d.id = id;
  d.centroid = c;
  d.extents = e;
  d.affordance_type = t;
  return d;
}

TEST(ProjectElementBox, OnAxisCube) {
  const Intrinsics intr = IntrinsicsFromFov(90, 680, 680);
  const auto box = ProjectElementBox(Desc(1, {2, 0, 0}, {0.2, 0.2, 0.2}),
                                     {{0, 0, 0}, 0}, intr);
  ASSERT_TRUE(box);
  const double half = 340 * 0.1 / 1.9;
  EXPECT_NEAR((box->x_min + box->x_max + 1) / 2.0, 340, 1.0);
  EXPECT_NEAR((box->y_min + box->y_max + 1) / 2.0, 340, 1.0);
  EXPECT_NEAR(box->width() / 2.0, half, 1.0);
  EXPECT_NEAR(box->height() / 2.0, half, 1.0);
}

TEST(ProjectElementBox, NotVisible) {
  const Intrinsics intr = IntrinsicsFromFov(90, 680, 680);
  const CameraPose pose{{0, 0, 0}, 0};
  EXPECT_FALSE(ProjectElementBox(Desc(1, {-2, 0, 0}, {0.2, 0.2, 0.2}), pose, intr));
  EXPECT_FALSE(ProjectElementBox(Desc(1, {2, 0, 0}, {0, 0, 0}), pose, intr));
  // Entirely off to the side.
  EXPECT_FALSE(ProjectElementBox(Desc(1, {1, 5, 0}, {0.1, 0.1, 0.1}), pose, intr));
}

TEST(ProjectElementBox, ClipsBoxesStraddlingTheCamera) {
  const Intrinsics intr = IntrinsicsFromFov(90, 200, 200);
  const auto box = ProjectElementBox(Desc(1, {0.3, 0, 0}, {2, 0.4, 0.4}),
                                     {{0, 0, 0}, 0}, intr);
  ASSERT_TRUE(box);
  EXPECT_TRUE(box->InsideImage(200, 200));
  EXPECT_EQ(*box, (Box2D{0, 0, 199, 199}));
}

TEST(ProjectElementBox, AgreesWithSampledEdgeOracle) {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(-1, 1), pos(0.02, 0.6);
  const Intrinsics intr = IntrinsicsFromFov(90, 680, 680);
  int compared = 0;
  for (int k = 0; k < 200; ++k) {
    const CameraPose pose{{u(rng), u(rng), u(rng)}, (u(rng) + 1) * kPi};
    const Eigen::Vector3d fwd(std::cos(pose.yaw), std::sin(pose.yaw), 0);
    const Eigen::Vector3d right(std::sin(pose.yaw), -std::cos(pose.yaw), 0);
    // Forward distance beats the box half-diagonal, so no corner is behind.
    const Descriptor d = Desc(1,
                              pose.position + (0.5 + 3 * pos(rng)) * fwd +
                                  1.5 * u(rng) * right +
                                  Eigen::Vector3d(0, 0, 1.5 * u(rng)),
                              {pos(rng), pos(rng), pos(rng)});
    const auto box = ProjectElementBox(d, pose, intr);
    const auto ref = SampledExtent(d, pose, intr);
    const double area = ref ? ((*ref)[2] - (*ref)[0]) * ((*ref)[3] - (*ref)[1]) : 0;
    if (!ref || area < 3.0) {
      EXPECT_FALSE(box) << k;
      continue;
    }
    if (area < 5.0) continue;  // area threshold is within sampling error
    ASSERT_TRUE(box) << k;
    ++compared;
    EXPECT_NEAR(box->x_min, (*ref)[0], 1.0) << k;
    EXPECT_NEAR(box->y_min, (*ref)[1], 1.0) << k;
    EXPECT_NEAR(box->x_max + 1, (*ref)[2], 1.0) << k;
    EXPECT_NEAR(box->y_max + 1, (*ref)[3], 1.0) << k;
    EXPECT_TRUE(box->InsideImage(intr.width, intr.height));
  }
  EXPECT_GT(compared, 100);
}

TEST(ProjectElementBox, CommutesWithYaw) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-1, 1);
  const Intrinsics intr = IntrinsicsFromFov(90, 400, 400);
  for (int k = 0; k < 50; ++k) {
    const CameraPose pose{{u(rng), u(rng), 1}, 0.0};
    // A cube, so a quarter turn maps it onto itself.
    const double side = 0.3 + 0.2 * u(rng);
    const Descriptor d = Desc(1, pose.position + Eigen::Vector3d(2 + u(rng), 0.5 * u(rng), 0.3 * u(rng)),
                              Eigen::Vector3d::Constant(side));
    const auto base = ProjectElementBox(d, pose, intr);
    ASSERT_TRUE(base);
    for (const int quarter : {1, 2, 3}) {
      const double yaw = quarter * kPi / 2;
      const Eigen::Matrix3d rot =
          Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix();
      Descriptor turned = d;
      turned.centroid = pose.position + rot * (d.centroid - pose.position);
      const auto box = ProjectElementBox(turned, {pose.position, yaw}, intr);
      ASSERT_TRUE(box);
      EXPECT_NEAR(box->x_min, base->x_min, 1);
      EXPECT_NEAR(box->x_max, base->x_max, 1);
      EXPECT_NEAR(box->y_min, base->y_min, 1);
      EXPECT_NEAR(box->y_max, base->y_max, 1);
    }
  }
}

TEST(PlaceAtAnchor, Geometry) {
  const Box2D box{100, 50, 139, 89};  // 40 x 40
  const LabelSize size{30, 16};
  EXPECT_EQ(PlaceAtAnchor(Anchor::kTopLeft, box, size), (Box2D{70, 34, 99, 49}));
  EXPECT_EQ(PlaceAtAnchor(Anchor::kTopRight, box, size), (Box2D{140, 34, 169, 49}));
  EXPECT_EQ(PlaceAtAnchor(Anchor::kLeft, box, size), (Box2D{70, 62, 99, 77}));
  EXPECT_EQ(PlaceAtAnchor(Anchor::kRight, box, size), (Box2D{140, 62, 169, 77}));
}

TEST(PlaceLabels, SingleBoxGetsTopLeft) {
  const auto labels = PlaceLabels({{1, {100, 100, 140, 140}}}, {{1, {30, 16}}}, 680, 680);
  ASSERT_EQ(labels.size(), 1u);
  EXPECT_EQ(labels[0].anchor_used, Anchor::kTopLeft);
  EXPECT_EQ(labels[0].rect, (Box2D{70, 84, 99, 99}));
}

TEST(PlaceLabels, CornerBoxFallsThroughTheAnchorOrder) {
  // No room above or to the left: right is the first that fits.
  auto labels = PlaceLabels({{1, {0, 0, 40, 40}}}, {{1, {30, 16}}}, 680, 680);
  EXPECT_EQ(labels[0].anchor_used, Anchor::kRight);
  // Room to the left but not above.
  labels = PlaceLabels({{1, {50, 0, 90, 40}}}, {{1, {30, 16}}}, 680, 680);
  EXPECT_EQ(labels[0].anchor_used, Anchor::kLeft);
  // A box filling the image leaves nothing: fallback, possibly clipped.
  labels = PlaceLabels({{1, {0, 0, 99, 99}}}, {{1, {30, 16}}}, 100, 100);
  EXPECT_EQ(labels[0].anchor_used, Anchor::kFallback);
  EXPECT_EQ(labels[0].rect,
            PlaceAtAnchor(Anchor::kTopRight, {0, 0, 99, 99}, {30, 16}));
}

TEST(PlaceLabels, SecondBoxAvoidsTheFirstLabel) {
  const std::map<int, Box2D> boxes = {{1, {100, 100, 120, 120}},
                                      {2, {121, 110, 141, 130}}};
  const std::map<int, LabelSize> sizes = {{1, {30, 16}}, {2, {30, 16}}};
  const auto labels = PlaceLabels(boxes, sizes, 680, 680);
  ASSERT_EQ(labels.size(), 2u);
  EXPECT_EQ(labels[0].anchor_used, Anchor::kTopLeft);
  EXPECT_NE(labels[1].anchor_used, Anchor::kTopLeft);
  EXPECT_FALSE(labels[1].rect.Intersects(labels[0].rect));
  EXPECT_FALSE(labels[1].rect.Intersects(boxes.at(1)));
}

TEST(PlaceLabels, MissingSizeIsError) {
  EXPECT_THROW(PlaceLabels({{1, {0, 0, 5, 5}}}, {}, 10, 10), Error);
}

TEST(PlaceLabels, MatchesReferenceOnRandomLayouts) {
  std::mt19937 rng(77);
  const int W = 320, H = 240;
  for (int layout = 0; layout < 200; ++layout) {
    std::uniform_int_distribution<int> count(1, 12), x(0, W - 1), y(0, H - 1),
        span(2, 80), chars(3, 14);
    std::map<int, Box2D> boxes;
    std::map<int, LabelSize> sizes;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      const int id = 1 + i * 3 % 17 + i;
      const int x0 = x(rng), y0 = y(rng);
      boxes[id] = {x0, y0, std::min(W - 1, x0 + span(rng)), std::min(H - 1, y0 + span(rng))};
      sizes[id] = {7 * chars(rng) + 4, 16};
    }
    const std::vector<std::pair<int, Box2D>> sorted(boxes.begin(), boxes.end());
    EXPECT_EQ(PlaceLabels(boxes, sizes, W, H), ReferencePlacement(sorted, sizes, W, H))
        << "layout " << layout;
  }
}

TEST(AnnotateView, NothingVisibleLeavesImageUntouched) {
  RenderedView view{Image(120, 90, kWhite), {{0, 0, 0}, 0},
                    IntrinsicsFromFov(90, 120, 90), 1};
  view.image.set(5, 5, {1, 2, 3});
  const auto out = AnnotateView(view, {Desc(1, {-3, 0, 0}, {0.5, 0.5, 0.5})});
  EXPECT_TRUE(out.boxes.empty());
  EXPECT_TRUE(out.labels.empty());
  EXPECT_EQ(out.image, view.image);
  EXPECT_EQ(AnnotateView(view, {}).image, view.image);
}

TEST(AnnotateView, OneVisibleDescriptor) {
  const RenderedView view{Image(400, 400, kWhite), {{0, 0, 0}, 0},
                          IntrinsicsFromFov(90, 400, 400), 2};
  const auto out = AnnotateView(
      view, {Desc(4, {2, 0, 0}, {0.3, 0.3, 0.3}, AffordanceType::kPlugIn)});
  ASSERT_EQ(out.boxes.size(), 1u);
  ASSERT_EQ(out.labels.size(), 1u);
  EXPECT_EQ(out.labels[0].element_id, 4);
  EXPECT_EQ(LabelText(Desc(4, {}, {}, AffordanceType::kPlugIn)), "4:plug_in");
  const Box2D& box = out.boxes.at(4);
  EXPECT_EQ(out.image.at(box.x_min, box.y_min), kInk);
  EXPECT_NE(out.image, view.image);
  const Box2D& r = out.labels[0].rect;
  EXPECT_EQ(r.width(), 7 * 9 + 4);
  EXPECT_EQ(r.height(), 16);
}

TEST(AnnotateView, BoxesAreExactlyTheVisibleIds) {
  const RenderedView view{Image(300, 300, kWhite), {{0, 0, 1}, 0},
                          IntrinsicsFromFov(90, 300, 300), 1};
  const std::vector<Descriptor> ds = {
      Desc(1, {2, 0.5, 1}, {0.2, 0.2, 0.2}),   Desc(2, {-2, 0, 1}, {0.2, 0.2, 0.2}),
      Desc(3, {3, -1, 0.5}, {0.3, 0.1, 0.2}),  Desc(4, {0.5, 3, 1}, {0.2, 0.2, 0.2}),
      Desc(5, {4, 1, 1.5}, {0.4, 0.4, 0.4})};
  const auto out = AnnotateView(view, ds);
  std::vector<int> expected;
  for (const auto& d : ds) {
    if (ProjectElementBox(d, view.pose, view.intrinsics)) expected.push_back(d.id);
  }
  EXPECT_EQ(expected, (std::vector<int>{1, 3, 5}));
  std::vector<int> got;
  for (const auto& [id, box] : out.boxes) got.push_back(id);
  EXPECT_EQ(got, expected);
}

TEST(Anchor, NamesRoundTrip) {
  for (const Anchor a : {Anchor::kTopLeft, Anchor::kTopRight, Anchor::kLeft,
                         Anchor::kRight, Anchor::kFallback}) {
    EXPECT_EQ(ParseAnchor(ToString(a)), a);
  }
  EXPECT_THROW(ParseAnchor("middle"), Error);
}

}  // namespace
}  // namespace embodied
