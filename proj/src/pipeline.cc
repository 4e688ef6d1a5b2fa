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

#include "embodied/pipeline.h"

#include <atomic>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "embodied/error.h"
#include "embodied/projection.h"
#include "embodied/render.h"
#include "embodied/serialization.h"

namespace embodied {

namespace fs = std::filesystem;
using nlohmann::json;

void PipelineConfig::Validate() const {
  if (views < 1) {
    Throw(ErrorKind::kParameter, fmt::format("views must be >= 1, got {}", views));
  }
  if (!(fov_deg > 0.0 && fov_deg < 180.0)) {
    Throw(ErrorKind::kParameter,
          fmt::format("fov_deg must lie in (0, 180), got {}", fov_deg));
  }
  if (image_size < 64) {
    Throw(ErrorKind::kParameter,
          fmt::format("image_size must be >= 64, got {}", image_size));
  }
  if (splat_radius_px < 0) {
    Throw(ErrorKind::kParameter, "splat_radius_px must be >= 0");
  }
  if (workers < 1) Throw(ErrorKind::kParameter, "workers must be >= 1");
}

fs::path PipelineConfig::PredictionsPath() const {
  return paths.predictions.empty() ? paths.output / "predictions.jsonl"
                                   : paths.predictions;
}

namespace {

fs::path Resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::string ReadText(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Throw(ErrorKind::kIo, fmt::format("cannot open {}", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Throw(ErrorKind::kIo, fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) Throw(ErrorKind::kIo, fmt::format("write failed: {}", path.string()));
}

void RequireFile(const fs::path& path, std::string_view what) {
  if (path.empty()) {
    Throw(ErrorKind::kInput, fmt::format("no {} path configured", what));
  }
  if (!fs::is_regular_file(path)) {
    Throw(ErrorKind::kIo, fmt::format("{} file not found: {}", what, path.string()));
  }
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    Throw(ErrorKind::kIo,
          fmt::format("cannot create {}: {}", dir.string(), ec.message()));
  }
}

// Each non-blank line parsed as one JSON object; errors carry the line number.
template <typename Fn>
void ForEachJsonLine(const fs::path& path, Fn&& fn) {
  std::istringstream in(ReadText(path));
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception& e) {
      Throw(ErrorKind::kFormat,
            fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    } catch (const Error& e) {
      throw Error(e.kind(),
                  fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
}

std::string SafeFileStem(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                    c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out.empty() ? "_" : out;
}

std::string_view StatusName(TaskOutcome::Status status) {
  switch (status) {
    case TaskOutcome::Status::kOk:
      return "ok";
    case TaskOutcome::Status::kGroundingFailure:
      return "grounding_failure";
    case TaskOutcome::Status::kFailed:
      return "failed";
  }
  return "failed";
}

TaskOutcome::Status ParseStatus(const std::string& name) {
  if (name == "ok") return TaskOutcome::Status::kOk;
  if (name == "grounding_failure") return TaskOutcome::Status::kGroundingFailure;
  if (name == "failed") return TaskOutcome::Status::kFailed;
  Throw(ErrorKind::kVocabulary, fmt::format("unknown status '{}'", name));
}

struct SweepMetadata {
  Eigen::Vector3d center;
  Intrinsics intrinsics;
  std::vector<CameraPose> poses;
};

SweepMetadata ReadSweep(const fs::path& path) {
  try {
    const json doc = json::parse(ReadText(path));
    SweepMetadata meta;
    const json& c = doc.at("center");
    meta.center = {c.at(0).get<double>(), c.at(1).get<double>(),
                   c.at(2).get<double>()};
    meta.intrinsics = doc.at("intrinsics").get<Intrinsics>();
    for (const json& v : doc.at("views")) {
      meta.poses.push_back(v.at("pose").get<CameraPose>());
    }
    return meta;
  } catch (const json::exception& e) {
    Throw(ErrorKind::kFormat, fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::vector<ElementProposal> LoadConfiguredProposals(const PipelineConfig& config) {
  RequireFile(config.paths.proposals, "proposals");
  return LoadProposals(config.paths.proposals);
}

Eigen::Vector3d SweepCenter(const PointCloud& cloud,
                            const std::vector<Descriptor>& descriptors) {
  // Without elements the scene's own box center stands in.
  if (descriptors.empty()) return Bounds(cloud).center();
  return ObservationCenter(cloud, descriptors);
}

std::vector<RenderedView> LoadRenders(const fs::path& dir) {
  const SweepMetadata meta = ReadSweep(dir / "sweep.json");
  std::vector<RenderedView> views;
  for (std::size_t i = 0; i < meta.poses.size(); ++i) {
    const int index = static_cast<int>(i + 1);
    const fs::path png = dir / fmt::format("view_{}.png", index);
    RequireFile(png, "rendered view");
    Image image = ReadPng(png);
    if (image.width() != meta.intrinsics.width ||
        image.height() != meta.intrinsics.height) {
      Throw(ErrorKind::kData,
            fmt::format("{} is {}x{}, sweep.json says {}x{}", png.string(),
                        image.width(), image.height(), meta.intrinsics.width,
                        meta.intrinsics.height));
    }
    views.push_back({std::move(image), meta.poses[i], meta.intrinsics, index});
  }
  return views;
}

int ReportError(const Error& e, std::ostream& log) {
  log << "error (" << ErrorKindName(e.kind()) << "): " << e.what() << "\n";
  return e.kind() == ErrorKind::kBackend || e.kind() == ErrorKind::kProtocol
             ? kExitBackendError
             : kExitInputError;
}

template <typename Fn>
int Guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    return ReportError(e, log);
  } catch (const json::exception& e) {
    log << "error (format): " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace

void ApplyConfigJson(const json& doc, const fs::path& base_dir,
                     PipelineConfig& config) {
  if (!doc.is_object()) Throw(ErrorKind::kFormat, "config must be a JSON object");
  try {
    if (doc.contains("views")) config.views = doc["views"].get<int>();
    if (doc.contains("fov_deg")) config.fov_deg = doc["fov_deg"].get<double>();
    if (doc.contains("image_size")) config.image_size = doc["image_size"].get<int>();
    if (doc.contains("splat_radius_px")) {
      config.splat_radius_px = doc["splat_radius_px"].get<int>();
    }
    if (doc.contains("workers")) config.workers = doc["workers"].get<int>();
    if (doc.contains("zoom")) config.zoom = doc["zoom"].get<bool>();
    if (doc.contains("backend")) {
      const json& b = doc["backend"];
      if (b.contains("mock") && b.contains("http")) {
        Throw(ErrorKind::kFormat, "backend must be either mock or http");
      }
      if (b.contains("mock")) {
        config.backend.kind = BackendConfig::Kind::kMock;
        config.backend.mock_script = Resolve(base_dir, b["mock"].get<std::string>());
      } else if (b.contains("http")) {
        const json& h = b["http"];
        config.backend.kind = BackendConfig::Kind::kHttp;
        HttpBackendConfig& http = config.backend.http;
        http.endpoint = h.at("endpoint").get<std::string>();
        http.model = h.value("model", http.model);
        http.timeout_s = h.value("timeout_s", http.timeout_s);
        http.temperature = h.value("temperature", http.temperature);
        http.max_retries = h.value("max_retries", http.max_retries);
      }
    }
    if (doc.contains("paths")) {
      const json& p = doc["paths"];
      auto set = [&](const char* key, fs::path& dst) {
        if (p.contains(key)) dst = Resolve(base_dir, p[key].get<std::string>());
      };
      set("cloud", config.paths.cloud);
      set("proposals", config.paths.proposals);
      set("tasks", config.paths.tasks);
      set("ground_truth", config.paths.ground_truth);
      set("predictions", config.paths.predictions);
      set("output", config.paths.output);
    }
  } catch (const json::exception& e) {
    Throw(ErrorKind::kFormat, fmt::format("config: {}", e.what()));
  }
}

PipelineConfig ResolveConfig(const std::optional<fs::path>& config_file,
                             const ConfigOverrides& o) {
  PipelineConfig config;
  if (config_file) {
    RequireFile(*config_file, "config");
    json doc;
    try {
      doc = json::parse(ReadText(*config_file));
    } catch (const json::exception& e) {
      Throw(ErrorKind::kFormat,
            fmt::format("{}: {}", config_file->string(), e.what()));
    }
    ApplyConfigJson(doc, config_file->parent_path(), config);
  }
  if (o.views) config.views = *o.views;
  if (o.fov_deg) config.fov_deg = *o.fov_deg;
  if (o.image_size) config.image_size = *o.image_size;
  if (o.splat_radius_px) config.splat_radius_px = *o.splat_radius_px;
  if (o.workers) config.workers = *o.workers;
  if (o.zoom) config.zoom = *o.zoom;
  if (o.mock_script) {
    config.backend.kind = BackendConfig::Kind::kMock;
    config.backend.mock_script = *o.mock_script;
  }
  if (o.endpoint) {
    config.backend.kind = BackendConfig::Kind::kHttp;
    config.backend.http.endpoint = *o.endpoint;
  }
  if (o.model) config.backend.http.model = *o.model;
  if (o.timeout_s) config.backend.http.timeout_s = *o.timeout_s;
  if (o.cloud) config.paths.cloud = *o.cloud;
  if (o.proposals) config.paths.proposals = *o.proposals;
  if (o.tasks) config.paths.tasks = *o.tasks;
  if (o.ground_truth) config.paths.ground_truth = *o.ground_truth;
  if (o.predictions) config.paths.predictions = *o.predictions;
  if (o.output) config.paths.output = *o.output;
  config.Validate();
  return config;
}

std::unique_ptr<VisionChatBackend> MakeBackend(const BackendConfig& config) {
  switch (config.kind) {
    case BackendConfig::Kind::kMock:
      RequireFile(config.mock_script, "mock script");
      return ScriptedBackend::FromFile(config.mock_script);
    case BackendConfig::Kind::kHttp:
      return std::make_unique<HttpChatBackend>(config.http);
    case BackendConfig::Kind::kNone:
      break;
  }
  Throw(ErrorKind::kInput, "no backend configured (need mock or http)");
}

std::vector<TaskInstruction> LoadTasks(const fs::path& path) {
  std::vector<TaskInstruction> tasks;
  std::set<std::string> seen;
  ForEachJsonLine(path, [&](const json& j) {
    TaskInstruction t{j.at("task_id").get<std::string>(),
                      j.value("scene_id", std::string()),
                      j.at("text").get<std::string>()};
    if (!seen.insert(t.task_id).second) {
      Throw(ErrorKind::kInput, fmt::format("duplicate task id '{}'", t.task_id));
    }
    tasks.push_back(std::move(t));
  });
  return tasks;
}

json OutcomeToJson(const TaskOutcome& o) {
  json j = {{"task_id", o.task_id},
            {"scene_id", o.scene_id},
            {"status", StatusName(o.status)},
            {"selected_view", o.selected_view},
            {"predictions", o.predictions}};
  if (!o.error.empty()) j["error"] = o.error;
  return j;
}

std::vector<TaskOutcome> LoadPredictions(const fs::path& path) {
  std::vector<TaskOutcome> outcomes;
  ForEachJsonLine(path, [&](const json& j) {
    TaskOutcome o;
    o.task_id = j.at("task_id").get<std::string>();
    o.scene_id = j.value("scene_id", std::string());
    o.status = ParseStatus(j.value("status", std::string("ok")));
    o.selected_view = j.value("selected_view", 0);
    o.predictions = j.value("predictions", json::array())
                        .get<std::vector<TripletPrediction>>();
    o.error = j.value("error", std::string());
    outcomes.push_back(std::move(o));
  });
  return outcomes;
}

std::vector<GroundTruthTask> LoadGroundTruth(const fs::path& path) {
  std::vector<GroundTruthTask> tasks;
  ForEachJsonLine(path, [&](const json& j) {
    tasks.push_back({j.at("task_id").get<std::string>(),
                     j.at("triplets").get<std::vector<GroundTruthTriplet>>()});
  });
  return tasks;
}

std::vector<TaskEvaluation> PairByTaskId(
    const std::vector<TaskOutcome>& outcomes,
    const std::vector<GroundTruthTask>& ground_truth) {
  std::map<std::string, const TaskOutcome*> by_id;
  std::vector<std::string> problems;
  for (const TaskOutcome& o : outcomes) {
    if (!by_id.emplace(o.task_id, &o).second) {
      problems.push_back(fmt::format("duplicate prediction '{}'", o.task_id));
    }
  }
  std::set<std::string> gt_ids;
  std::vector<TaskEvaluation> tasks;
  for (const GroundTruthTask& g : ground_truth) {
    if (!gt_ids.insert(g.task_id).second) {
      problems.push_back(fmt::format("duplicate ground truth '{}'", g.task_id));
      continue;
    }
    auto it = by_id.find(g.task_id);
    if (it == by_id.end()) {
      problems.push_back(fmt::format("no prediction for '{}'", g.task_id));
      continue;
    }
    tasks.push_back({g.task_id, it->second->predictions, g.triplets});
  }
  for (const auto& [id, outcome] : by_id) {
    if (!gt_ids.count(id)) {
      problems.push_back(fmt::format("no ground truth for '{}'", id));
    }
  }
  if (!problems.empty()) {
    std::string msg = "task id mismatch:";
    for (const std::string& p : problems) msg += "\n  " + p;
    Throw(ErrorKind::kInput, msg);
  }
  return tasks;
}

SceneArtifacts PrepareScene(const PipelineConfig& config) {
  RequireFile(config.paths.cloud, "cloud");
  const PointCloud cloud = LoadPly(config.paths.cloud);
  SceneArtifacts scene;
  scene.proposals = LoadConfiguredProposals(config);
  scene.descriptors = BuildDescriptors(cloud, scene.proposals);

  std::vector<RenderedView> renders;
  if (fs::is_regular_file(config.paths.output / "sweep.json")) {
    renders = LoadRenders(config.paths.output);
  } else {
    const Intrinsics intr =
        IntrinsicsFromFov(config.fov_deg, config.image_size, config.image_size);
    renders = RenderSweep(cloud, SweepCenter(cloud, scene.descriptors),
                          config.views, intr, config.splat_radius_px);
  }
  for (const RenderedView& view : renders) {
    scene.views.push_back(AnnotateView(view, scene.descriptors));
  }
  return scene;
}

int CmdRender(const PipelineConfig& config, std::ostream& log) {
  return Guarded(log, [&] {
    config.Validate();
    RequireFile(config.paths.cloud, "cloud");
    const PointCloud cloud = LoadPly(config.paths.cloud);
    std::vector<Descriptor> descriptors;
    if (!config.paths.proposals.empty()) {
      descriptors = BuildDescriptors(cloud, LoadConfiguredProposals(config));
    }
    const Intrinsics intr =
        IntrinsicsFromFov(config.fov_deg, config.image_size, config.image_size);
    const Eigen::Vector3d center = SweepCenter(cloud, descriptors);
    EnsureDir(config.paths.output);

    json views = json::array();
    for (const RenderedView& view : RenderSweep(
             cloud, center, config.views, intr, config.splat_radius_px)) {
      WritePng(view.image,
               config.paths.output / fmt::format("view_{}.png", view.view_index));
      views.push_back({{"view_index", view.view_index}, {"pose", view.pose}});
    }
    const json sweep = {{"center", {center.x(), center.y(), center.z()}},
                        {"intrinsics", intr},
                        {"splat_radius_px", config.splat_radius_px},
                        {"views", views}};
    WriteText(config.paths.output / "sweep.json", sweep.dump(2) + "\n");
    log << fmt::format("rendered {} view(s) into {}\n", config.views,
                       config.paths.output.string());
    return kExitOk;
  });
}

int CmdAnnotate(const PipelineConfig& config, std::ostream& log) {
  return Guarded(log, [&] {
    RequireFile(config.paths.cloud, "cloud");
    const PointCloud cloud = LoadPly(config.paths.cloud);
    const std::vector<Descriptor> descriptors =
        BuildDescriptors(cloud, LoadConfiguredProposals(config));
    RequireFile(config.paths.output / "sweep.json", "sweep metadata");

    json annotations = json::array();
    for (const RenderedView& view : LoadRenders(config.paths.output)) {
      const AnnotatedView annotated = AnnotateView(view, descriptors);
      WritePng(annotated.image, config.paths.output /
                                    fmt::format("annotated_{}.png", view.view_index));
      json boxes = json::array();
      for (const auto& [id, box] : annotated.boxes) {
        json b = box;
        b["id"] = id;
        boxes.push_back(std::move(b));
      }
      annotations.push_back({{"view_index", view.view_index},
                             {"boxes", boxes},
                             {"labels", annotated.labels}});
    }
    WriteText(config.paths.output / "annotations.json",
              annotations.dump(2) + "\n");
    log << fmt::format("annotated {} view(s)\n", annotations.size());
    return kExitOk;
  });
}

int CmdRun(const PipelineConfig& config, std::ostream& log) {
  return Guarded(log, [&] {
    config.Validate();
    RequireFile(config.paths.tasks, "tasks");
    const std::vector<TaskInstruction> tasks = LoadTasks(config.paths.tasks);
    const SceneArtifacts scene = PrepareScene(config);
    const std::unique_ptr<VisionChatBackend> backend = MakeBackend(config.backend);
    const fs::path trace_dir = config.paths.output / "traces";
    EnsureDir(trace_dir);
    const fs::path predictions_path = config.PredictionsPath();
    if (predictions_path.has_parent_path()) {
      EnsureDir(predictions_path.parent_path());
    }

    std::vector<TaskOutcome> outcomes(tasks.size());
    std::vector<ErrorKind> failure_kinds(tasks.size(), ErrorKind::kInput);
    std::vector<Trace> traces(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < tasks.size(); i = next++) {
        const TaskInstruction& task = tasks[i];
        TaskOutcome& out = outcomes[i];
        out.task_id = task.task_id;
        out.scene_id = task.scene_id;
        try {
          const TaskResult r = RunTask(scene, task, *backend,
                                       ReasoningOptions{config.zoom}, &traces[i]);
          out.predictions = r.predictions;
          out.selected_view = r.selected_view;
          out.status = r.grounding_failed ? TaskOutcome::Status::kGroundingFailure
                                          : TaskOutcome::Status::kOk;
        } catch (const Error& e) {
          out.status = TaskOutcome::Status::kFailed;
          out.error = fmt::format("{}: {}", ErrorKindName(e.kind()), e.what());
          failure_kinds[i] = e.kind();
        }
      }
    };
    const std::size_t num_workers =
        std::min<std::size_t>(static_cast<std::size_t>(config.workers),
                              std::max<std::size_t>(tasks.size(), 1));
    if (num_workers <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < num_workers; ++w) pool.emplace_back(worker);
      for (std::thread& t : pool) t.join();
    }

    std::string lines;
    int exit_code = kExitOk;
    int failed = 0;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      lines += OutcomeToJson(outcomes[i]).dump() + "\n";
      std::string trace_lines;
      for (const TraceRecord& r : traces[i]) trace_lines += json(r).dump() + "\n";
      WriteText(trace_dir / (SafeFileStem(tasks[i].task_id) + ".jsonl"),
                trace_lines);
      if (outcomes[i].status == TaskOutcome::Status::kFailed) {
        ++failed;
        log << fmt::format("task {} failed: {}\n", tasks[i].task_id,
                           outcomes[i].error);
        const bool backend_side = failure_kinds[i] == ErrorKind::kBackend ||
                                  failure_kinds[i] == ErrorKind::kProtocol;
        exit_code = std::max(exit_code,
                             backend_side ? kExitBackendError : kExitInputError);
      }
    }
    WriteText(predictions_path, lines);
    log << fmt::format("{} task(s), {} failed; predictions in {}\n", tasks.size(),
                       failed, predictions_path.string());
    return exit_code;
  });
}

int CmdEval(const PipelineConfig& config, std::ostream& log) {
  return Guarded(log, [&] {
    const fs::path predictions_path = config.PredictionsPath();
    RequireFile(predictions_path, "predictions");
    RequireFile(config.paths.ground_truth, "ground truth");
    const std::vector<TaskEvaluation> tasks =
        PairByTaskId(LoadPredictions(predictions_path),
                     LoadGroundTruth(config.paths.ground_truth));
    const EvalReport report = Evaluate(tasks);
    EnsureDir(config.paths.output);
    WriteText(config.paths.output / "report.json", json(report).dump(2) + "\n");
    const std::string table = FormatReportTable(report);
    WriteText(config.paths.output / "report.txt", table);
    log << table;
    return kExitOk;
  });
}

}  // namespace embodied
