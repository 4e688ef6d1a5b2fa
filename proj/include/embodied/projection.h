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

// Set-of-mark annotation: element boxes projected into a rendered view, each
// tagged with an "id:type" label placed so that labels do not collide.

#ifndef EMBODIED_PROJECTION_H_
#define EMBODIED_PROJECTION_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "embodied/camera.h"
#include "embodied/descriptors.h"
#include "embodied/render.h"

namespace embodied {

// Inclusive integer pixel rectangle.
struct Box2D {
  int x_min = 0;
  int y_min = 0;
  int x_max = 0;
  int y_max = 0;

  int width() const { return x_max - x_min + 1; }
  int height() const { return y_max - y_min + 1; }
  bool Intersects(const Box2D& other) const {
    return x_min <= other.x_max && other.x_min <= x_max &&
           y_min <= other.y_max && other.y_min <= y_max;
  }
  bool InsideImage(int width, int height) const {
    return x_min >= 0 && y_min >= 0 && x_max < width && y_max < height;
  }

  friend bool operator==(const Box2D&, const Box2D&) = default;
};

enum class Anchor { kTopLeft, kTopRight, kLeft, kRight, kFallback };

inline constexpr std::array<Anchor, 4> kAnchorOrder = {
    Anchor::kTopLeft, Anchor::kTopRight, Anchor::kLeft, Anchor::kRight};

std::string_view ToString(Anchor anchor);
Anchor ParseAnchor(std::string_view name);

struct LabelPlacement {
  int element_id = 0;
  Box2D rect;
  Anchor anchor_used = Anchor::kTopLeft;

  friend bool operator==(const LabelPlacement&,
                         const LabelPlacement&) = default;
};

struct AnnotatedView {
  RenderedView base;
  std::map<int, Box2D> boxes;  // element id -> projected box
  std::vector<LabelPlacement> labels;
  Image image;  // base image with boxes and labels drawn
};

struct LabelSize {
  int width = 0;
  int height = 0;
};

// Corners closer than this to the camera plane are clipped away.
inline constexpr double kNearPlane = 1e-3;
inline constexpr double kMinVisibleBoxArea = 4.0;

// Projects the descriptor's AABB into the view and clips it to the image.
// nullopt when the centroid is behind the camera or less than 4 px^2 of the
// box lands on the image.
std::optional<Box2D> ProjectElementBox(const Descriptor& d,
                                       const CameraPose& pose,
                                       const Intrinsics& intr);

// Label rect of size `size` at `anchor` around `box`. kFallback uses the
// top-right position.
Box2D PlaceAtAnchor(Anchor anchor, const Box2D& box, LabelSize size);

// Adaptive label refinement. Elements are visited in ascending id; each
// element's box joins the occupied set before its label is placed, the first
// anchor that stays on the image and clears everything occupied so far wins,
// and if none does the top-right fallback is taken regardless of overlap.
std::vector<LabelPlacement> PlaceLabels(
    const std::map<int, Box2D>& boxes,
    const std::map<int, LabelSize>& label_sizes, int image_width,
    int image_height);

std::string LabelText(const Descriptor& d);

AnnotatedView AnnotateView(const RenderedView& view,
                           const std::vector<Descriptor>& descriptors);

}  // namespace embodied

#endif  // EMBODIED_PROJECTION_H_
