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

#include "embodied/projection.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "embodied/error.h"

namespace embodied {

std::string_view ToString(Anchor anchor) {
  switch (anchor) {
    case Anchor::kTopLeft: return "top-left";
    case Anchor::kTopRight: return "top-right";
    case Anchor::kLeft: return "left";
    case Anchor::kRight: return "right";
    case Anchor::kFallback: return "fallback";
  }
  return "";
}

Anchor ParseAnchor(std::string_view name) {
  for (const Anchor a : {Anchor::kTopLeft, Anchor::kTopRight, Anchor::kLeft,
                         Anchor::kRight, Anchor::kFallback}) {
    if (ToString(a) == name) return a;
  }
  Throw(ErrorKind::kVocabulary, fmt::format("unknown anchor '{}'", name));
}

std::optional<Box2D> ProjectElementBox(const Descriptor& d,
                                       const CameraPose& pose,
                                       const Intrinsics& intr) {
  if (!ProjectPoint(intr, pose, d.centroid)) return std::nullopt;

  const Eigen::Vector3d half = 0.5 * d.extents;
  std::array<Eigen::Vector3d, 8> corners;
  for (int k = 0; k < 8; ++k) {
    const Eigen::Vector3d sign((k & 1) ? 1.0 : -1.0, (k & 2) ? 1.0 : -1.0,
                               (k & 4) ? 1.0 : -1.0);
    corners[k] = WorldToCamera(pose, d.centroid + sign.cwiseProduct(half));
  }

  // Corners in front of the near plane, plus near-plane crossings of the
  // twelve box edges (corner pairs differing in exactly one bit).
  std::vector<Eigen::Vector3d> front;
  for (const auto& c : corners) {
    if (c.z() >= kNearPlane) front.push_back(c);
  }
  for (int a = 0; a < 8; ++a) {
    for (const int bit : {1, 2, 4}) {
      const int b = a | bit;
      if (b == a) continue;
      const Eigen::Vector3d& p = corners[a];
      const Eigen::Vector3d& q = corners[b];
      if ((p.z() >= kNearPlane) == (q.z() >= kNearPlane)) continue;
      const double t = (kNearPlane - p.z()) / (q.z() - p.z());
      Eigen::Vector3d hit = p + t * (q - p);
      hit.z() = kNearPlane;
      front.push_back(hit);
    }
  }
  if (front.empty()) return std::nullopt;

  double u_min = std::numeric_limits<double>::infinity();
  double v_min = u_min;
  double u_max = -u_min;
  double v_max = -u_min;
  for (const auto& c : front) {
    const double u = intr.cx + intr.fx * (c.x() / c.z());
    const double v = intr.cy - intr.fy * (c.y() / c.z());
    u_min = std::min(u_min, u);
    u_max = std::max(u_max, u);
    v_min = std::min(v_min, v);
    v_max = std::max(v_max, v);
  }
  u_min = std::clamp(u_min, 0.0, static_cast<double>(intr.width));
  u_max = std::clamp(u_max, 0.0, static_cast<double>(intr.width));
  v_min = std::clamp(v_min, 0.0, static_cast<double>(intr.height));
  v_max = std::clamp(v_max, 0.0, static_cast<double>(intr.height));
  if ((u_max - u_min) * (v_max - v_min) < kMinVisibleBoxArea) {
    return std::nullopt;
  }

  Box2D box;
  box.x_min = std::min(static_cast<int>(std::floor(u_min)), intr.width - 1);
  box.y_min = std::min(static_cast<int>(std::floor(v_min)), intr.height - 1);
  box.x_max = std::clamp(static_cast<int>(std::ceil(u_max)) - 1, box.x_min,
                         intr.width - 1);
  box.y_max = std::clamp(static_cast<int>(std::ceil(v_max)) - 1, box.y_min,
                         intr.height - 1);
  return box;
}

namespace {

int FloorDiv(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Box2D PlaceAtAnchor(Anchor anchor, const Box2D& box, LabelSize size) {
  const int w = size.width;
  const int h = size.height;
  const int centered_top = box.y_min + FloorDiv(box.height() - h, 2);
  switch (anchor) {
    case Anchor::kTopLeft:
      return {box.x_min - w, box.y_min - h, box.x_min - 1, box.y_min - 1};
    case Anchor::kTopRight:
    case Anchor::kFallback:
      return {box.x_max + 1, box.y_min - h, box.x_max + w, box.y_min - 1};
    case Anchor::kLeft:
      return {box.x_min - w, centered_top, box.x_min - 1, centered_top + h - 1};
    case Anchor::kRight:
      return {box.x_max + 1, centered_top, box.x_max + w, centered_top + h - 1};
  }
  return box;
}

std::vector<LabelPlacement> PlaceLabels(
    const std::map<int, Box2D>& boxes,
    const std::map<int, LabelSize>& label_sizes, int image_width,
    int image_height) {
  std::vector<Box2D> occupied;
  std::vector<LabelPlacement> placements;
  placements.reserve(boxes.size());
  for (const auto& [id, box] : boxes) {  // std::map: ascending id
    const auto size_it = label_sizes.find(id);
    if (size_it == label_sizes.end()) {
      Throw(ErrorKind::kInput, fmt::format("no label size for element {}", id));
    }
    occupied.push_back(box);
    LabelPlacement placement{id, PlaceAtAnchor(Anchor::kFallback, box,
                                               size_it->second),
                             Anchor::kFallback};
    for (const Anchor anchor : kAnchorOrder) {
      const Box2D rect = PlaceAtAnchor(anchor, box, size_it->second);
      if (!rect.InsideImage(image_width, image_height)) continue;
      const bool collides =
          std::any_of(occupied.begin(), occupied.end(),
                      [&](const Box2D& r) { return r.Intersects(rect); });
      if (collides) continue;
      placement = {id, rect, anchor};
      break;
    }
    occupied.push_back(placement.rect);
    placements.push_back(placement);
  }
  return placements;
}

std::string LabelText(const Descriptor& d) {
  return fmt::format("{}:{}", d.id, ToString(d.affordance_type));
}

namespace {

constexpr Rgb kLabelBackground = {255, 250, 205};
constexpr int kBoxStroke = 2;

}  // namespace

AnnotatedView AnnotateView(const RenderedView& view,
                           const std::vector<Descriptor>& descriptors) {
  AnnotatedView out;
  out.base = view;
  out.image = view.image;

  std::map<int, LabelSize> sizes;
  std::map<int, std::string> texts;
  for (const Descriptor& d : descriptors) {
    const auto box = ProjectElementBox(d, view.pose, view.intrinsics);
    if (!box) continue;
    out.boxes[d.id] = *box;
    texts[d.id] = LabelText(d);
    const TextSize measured = MeasureLabel(texts[d.id]);
    sizes[d.id] = {measured.width, measured.height};
  }
  out.labels = PlaceLabels(out.boxes, sizes, view.intrinsics.width,
                           view.intrinsics.height);

  for (const auto& [id, box] : out.boxes) {
    StrokeRect(out.image, box.x_min, box.y_min, box.x_max, box.y_max,
               kBoxStroke, kInk);
  }
  for (const LabelPlacement& label : out.labels) {
    const Box2D& r = label.rect;
    FillRect(out.image, r.x_min, r.y_min, r.x_max, r.y_max, kLabelBackground);
    DrawText(out.image, r.x_min + kLabelPadding, r.y_min + kLabelPadding,
             texts[label.element_id], kInk);
  }
  return out;
}

}  // namespace embodied
