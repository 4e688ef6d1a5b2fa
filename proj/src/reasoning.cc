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

#include "embodied/reasoning.h"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include <fmt/format.h>

#include "embodied/error.h"

namespace embodied {

std::optional<nlohmann::json> ExtractJsonObject(std::string_view text) {
  for (std::size_t start = text.find('{'); start != std::string_view::npos;
       start = text.find('{', start + 1)) {
    int depth = 0;
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) {
          escaped = false;
        } else if (c == '\\') {
          escaped = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        auto parsed = nlohmann::json::parse(text.substr(start, i - start + 1),
                                            nullptr, /*allow_exceptions=*/false);
        if (!parsed.is_discarded() && parsed.is_object()) return parsed;
        break;
      }
    }
  }
  return std::nullopt;
}

namespace {

// Reply rejected by a step's parser; the message is fed back on re-ask.
struct Rejection {
  std::string reason;
};

std::string VocabularyBlock() {
  std::string affordances, motions, axes;
  for (const auto t : kAllAffordanceTypes) {
    affordances += fmt::format("{}{}", affordances.empty() ? "" : ", ",
                               ToString(t));
  }
  for (const auto t : kAllMotionTypes) {
    motions += fmt::format("{}{}", motions.empty() ? "" : ", ", ToString(t));
  }
  for (const auto a : kAllAxisPrimitives) {
    axes += fmt::format("{}{}", axes.empty() ? "" : ", ", ToString(a));
  }
  return fmt::format(
      "Vocabularies:\n"
      "- affordance types: {}\n"
      "- motion types: {}\n"
      "- axis primitives: {}\n"
      "  (translation uses horizontal_inwards, horizontal_outwards, "
      "vertical_inwards, vertical_outwards; rotation uses horizontal, "
      "vertical)\n",
      affordances, motions, axes);
}

std::string SystemText(std::string_view step_text) {
  return fmt::format(
      "You are an embodied agent reasoning about an indoor 3D scene. The "
      "scene was rendered into surround views from one observation point; "
      "every affordance element is outlined with a box and labeled "
      "\"id:affordance_type\".\n{}\n{}",
      step_text, VocabularyBlock());
}

std::string DescriptorTable(const std::vector<Descriptor>& descriptors) {
  std::string table =
      "id | affordance_type | centroid x, y, z (m) | extents dx, dy, dz (m)\n";
  for (const Descriptor& d : descriptors) {
    table += fmt::format(
        "{} | {} | {:.2f}, {:.2f}, {:.2f} | {:.2f}, {:.2f}, {:.2f}\n", d.id,
        ToString(d.affordance_type), d.centroid.x(), d.centroid.y(),
        d.centroid.z(), d.extents.x(), d.extents.y(), d.extents.z());
  }
  return table;
}

// Sends `request`, parses with `parse`, re-asks once on rejection.
template <typename Parse>
auto Exchange(VisionChatBackend& backend, ChatRequest request,
              std::string_view step_name, std::vector<int> image_views,
              Trace* trace, Parse parse) -> decltype(parse(std::string())) {
  TraceRecord record;
  record.step = std::string(step_name);
  record.system_text = request.system_text;
  record.user_text = request.user_text;
  record.image_views = std::move(image_views);
  auto commit = [&]() {
    if (trace != nullptr) trace->push_back(record);
  };

  std::string last_reason;
  for (int attempt = 0; attempt < 2; ++attempt) {
    if (attempt == 1) {
      request.user_text = fmt::format(
          "{}\n\nYour previous reply was rejected: {}. Answer again with "
          "only the JSON object described above.",
          record.user_text, last_reason);
    }
    std::string reply;
    try {
      reply = backend.Complete(request);
    } catch (const Error& e) {
      record.error = e.what();
      commit();
      throw;
    }
    record.replies.push_back(reply);
    try {
      auto result = parse(reply);
      record.result = result.second;
      commit();
      return result;
    } catch (const Rejection& r) {
      last_reason = r.reason;
    }
  }
  record.error = fmt::format("{} step: reply rejected twice: {}", step_name,
                             last_reason);
  commit();
  Throw(ErrorKind::kProtocol, record.error);
}

nlohmann::json RequireObject(const std::string& reply) {
  auto object = ExtractJsonObject(reply);
  if (!object) throw Rejection{"no JSON object found in the reply"};
  return *object;
}

int ParseViewReply(const std::string& reply,
                   const std::vector<const AnnotatedView*>& views) {
  const nlohmann::json object = RequireObject(reply);
  if (!object.contains("view") || !object["view"].is_number_integer()) {
    throw Rejection{"expected {\"view\": <integer>}"};
  }
  const int index = object["view"].get<int>();
  const bool known = std::any_of(views.begin(), views.end(), [&](auto* v) {
    return v->base.view_index == index;
  });
  if (!known) {
    throw Rejection{fmt::format("view {} does not exist", index)};
  }
  return index;
}

std::string ViewRange(const std::vector<const AnnotatedView*>& views) {
  std::string indices;
  for (const auto* v : views) {
    indices += fmt::format("{}{}", indices.empty() ? "" : ", ",
                           v->base.view_index);
  }
  return indices;
}

const AnnotatedView& ViewByIndex(const std::vector<AnnotatedView>& views,
                                 int index) {
  for (const auto& v : views) {
    if (v.base.view_index == index) return v;
  }
  Throw(ErrorKind::kInput, fmt::format("no view with index {}", index));
}

}  // namespace

int SelectView(const std::vector<AnnotatedView>& views,
               const TaskInstruction& instr, VisionChatBackend& backend,
               Trace* trace, bool zoom) {
  if (views.empty()) {
    Throw(ErrorKind::kEmptyInput, "view selection needs at least one view");
  }
  std::vector<const AnnotatedView*> ordered;
  for (const auto& v : views) ordered.push_back(&v);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto* a, const auto* b) {
                     return a->base.view_index < b->base.view_index;
                   });

  ChatRequest request;
  request.system_text = SystemText(fmt::format(
      "Step 1 of 3, active view selection: choose the single view in which "
      "all elements referenced by the task are visible and easiest to "
      "inspect.\nReply with only a JSON object {{\"view\": <index>}}, where "
      "<index> is one of: {}.",
      ViewRange(ordered)));
  request.user_text = fmt::format(
      "{}\nTask instruction: {}\nThe attached images are views {} in that "
      "order.",
      RoutingLine(instr.task_id, step::kSelect), instr.text,
      ViewRange(ordered));
  std::vector<int> indices;
  for (const auto* v : ordered) {
    request.images.push_back(EncodePng(v->image));
    indices.push_back(v->base.view_index);
  }
  auto parse = [&](const std::string& reply) {
    const int index = ParseViewReply(reply, ordered);
    return std::pair<int, nlohmann::json>{index, {{"view", index}}};
  };
  int chosen = Exchange(backend, request, step::kSelect, indices, trace,
                        parse).first;
  if (!zoom) return chosen;

  ChatRequest zoom_request;
  zoom_request.system_text = SystemText(fmt::format(
      "Step 1 of 3, active view selection (zoom check): the attached image "
      "is a 2x zoom on the center of the view you chose. Confirm it, or "
      "revise your choice if the referenced elements are not clearly "
      "visible.\nReply with only a JSON object {{\"view\": <index>}}, where "
      "<index> is one of: {}.",
      ViewRange(ordered)));
  zoom_request.user_text = fmt::format(
      "{}\nTask instruction: {}\nYou chose view {}.",
      RoutingLine(instr.task_id, step::kZoom), instr.text, chosen);
  zoom_request.images.push_back(
      EncodePng(ZoomCenter(ViewByIndex(views, chosen).image, 2)));
  return Exchange(backend, zoom_request, step::kZoom, {chosen}, trace, parse)
      .first;
}

std::vector<int> GroundAffordance(const AnnotatedView& view,
                                  const TaskInstruction& instr,
                                  const std::vector<Descriptor>& descriptors,
                                  VisionChatBackend& backend, Trace* trace) {
  ChatRequest request;
  request.system_text = SystemText(
      "Step 2 of 3, affordance grounding: identify every element the task "
      "instruction refers to, using the labeled ids in the image and the "
      "element table.\nReply with only a JSON object {\"elements\": [<id>, "
      "...]}. Use an empty list if no element matches.");
  request.user_text = fmt::format(
      "{}\nTask instruction: {}\nThe attached image is view {}.\nElements:\n{}",
      RoutingLine(instr.task_id, step::kGround), instr.text,
      view.base.view_index, DescriptorTable(descriptors));
  request.images.push_back(EncodePng(view.image));

  std::set<int> known;
  for (const Descriptor& d : descriptors) known.insert(d.id);

  auto parse = [&](const std::string& reply) {
    const nlohmann::json object = RequireObject(reply);
    if (!object.contains("elements") || !object["elements"].is_array()) {
      throw Rejection{"expected {\"elements\": [<id>, ...]}"};
    }
    std::vector<int> ids;
    for (const auto& item : object["elements"]) {
      if (!item.is_number_integer()) {
        throw Rejection{"element ids must be integers"};
      }
      const int id = item.get<int>();
      if (known.count(id) == 0) {
        throw Rejection{fmt::format("element id {} does not exist", id)};
      }
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
        ids.push_back(id);
      }
    }
    return std::pair<std::vector<int>, nlohmann::json>{
        ids, {{"elements", ids}}};
  };
  return Exchange(backend, request, step::kGround, {view.base.view_index},
                  trace, parse)
      .first;
}

std::vector<MotionEstimate> EstimateMotion(
    const AnnotatedView& view, const TaskInstruction& instr,
    const std::vector<Descriptor>& grounded, VisionChatBackend& backend,
    Trace* trace) {
  if (grounded.empty()) {
    Throw(ErrorKind::kEmptyInput, "motion estimation needs grounded elements");
  }
  ChatRequest request;
  request.system_text = SystemText(
      "Step 3 of 3, motion estimation: for every listed element, infer the "
      "motion type needed to carry out the task and the direction of its "
      "motion axis.\nReply with only a JSON object {\"motions\": [{\"id\": "
      "<id>, \"type\": <motion type>, \"axis\": <axis primitive>}, ...]} "
      "with exactly one entry per listed element.");
  request.user_text = fmt::format(
      "{}\nTask instruction: {}\nThe attached image is view {}.\nTarget "
      "elements:\n{}",
      RoutingLine(instr.task_id, step::kMotion), instr.text,
      view.base.view_index, DescriptorTable(grounded));
  request.images.push_back(EncodePng(view.image));

  auto parse = [&](const std::string& reply) {
    const nlohmann::json object = RequireObject(reply);
    if (!object.contains("motions") || !object["motions"].is_array()) {
      throw Rejection{"expected {\"motions\": [...]}"};
    }
    std::map<int, MotionEstimate> by_id;
    for (const auto& item : object["motions"]) {
      if (!item.is_object() || !item.contains("id") ||
          !item["id"].is_number_integer() || !item.contains("type") ||
          !item["type"].is_string() || !item.contains("axis") ||
          !item["axis"].is_string()) {
        throw Rejection{
            "each motion needs integer \"id\" and string \"type\", \"axis\""};
      }
      MotionEstimate estimate;
      estimate.element_id = item["id"].get<int>();
      try {
        estimate.motion_type = ParseMotionType(item["type"].get<std::string>());
        estimate.axis_primitive =
            ParseAxisPrimitive(item["axis"].get<std::string>());
      } catch (const Error& e) {
        throw Rejection{e.what()};
      }
      if (!IsConsistent(estimate.motion_type, estimate.axis_primitive)) {
        throw Rejection{fmt::format("axis {} is not valid for motion type {}",
                                    ToString(estimate.axis_primitive),
                                    ToString(estimate.motion_type))};
      }
      if (!by_id.emplace(estimate.element_id, estimate).second) {
        throw Rejection{
            fmt::format("element {} listed twice", estimate.element_id)};
      }
    }
    std::vector<MotionEstimate> ordered;
    nlohmann::json result = nlohmann::json::array();
    for (const Descriptor& d : grounded) {
      const auto it = by_id.find(d.id);
      if (it == by_id.end()) {
        throw Rejection{fmt::format("no motion given for element {}", d.id)};
      }
      ordered.push_back(it->second);
      result.push_back({{"id", d.id},
                        {"type", ToString(it->second.motion_type)},
                        {"axis", ToString(it->second.axis_primitive)}});
    }
    if (by_id.size() != grounded.size()) {
      throw Rejection{"motions listed for elements that were not asked about"};
    }
    return std::pair<std::vector<MotionEstimate>, nlohmann::json>{
        ordered, {{"motions", result}}};
  };
  return Exchange(backend, request, step::kMotion, {view.base.view_index},
                  trace, parse)
      .first;
}

TaskResult RunTask(const SceneArtifacts& scene, const TaskInstruction& instr,
                   VisionChatBackend& backend, const ReasoningOptions& options,
                   Trace* trace) {
  if (instr.text.empty()) {
    Throw(ErrorKind::kInput,
          fmt::format("task '{}' has an empty instruction", instr.task_id));
  }
  TaskResult result;
  result.selected_view =
      SelectView(scene.views, instr, backend, trace, options.zoom);
  const AnnotatedView& view = ViewByIndex(scene.views, result.selected_view);

  const std::vector<int> ids =
      GroundAffordance(view, instr, scene.descriptors, backend, trace);
  if (ids.empty()) {
    result.grounding_failed = true;
    return result;
  }

  std::vector<Descriptor> grounded;
  for (const int id : ids) {
    const auto it = std::find_if(scene.descriptors.begin(),
                                 scene.descriptors.end(),
                                 [&](const Descriptor& d) { return d.id == id; });
    grounded.push_back(*it);
  }
  const std::vector<MotionEstimate> motions =
      EstimateMotion(view, instr, grounded, backend, trace);

  for (const MotionEstimate& m : motions) {
    const std::size_t proposal = static_cast<std::size_t>(m.element_id - 1);
    if (proposal >= scene.proposals.size()) {
      Throw(ErrorKind::kInput,
            fmt::format("descriptor {} has no matching proposal",
                        m.element_id));
    }
    result.predictions.push_back({m.element_id, scene.proposals[proposal].mask,
                                  m.motion_type, m.axis_primitive,
                                  scene.proposals[proposal].confidence});
  }
  return result;
}

}  // namespace embodied
