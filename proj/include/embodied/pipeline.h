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

// End-to-end commands behind the CLI. Every command reads and writes files
// under PipelineConfig::paths and returns a process exit code.

#ifndef EMBODIED_PIPELINE_H_
#define EMBODIED_PIPELINE_H_

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "embodied/chat.h"
#include "embodied/eval.h"
#include "embodied/reasoning.h"
#include "json.hpp"

namespace embodied {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitBackendError = 2;

struct BackendConfig {
  enum class Kind { kNone, kMock, kHttp };
  Kind kind = Kind::kNone;
  std::filesystem::path mock_script;
  HttpBackendConfig http;
};

struct PipelinePaths {
  std::filesystem::path cloud;
  std::filesystem::path proposals;
  std::filesystem::path tasks;
  std::filesystem::path ground_truth;
  std::filesystem::path predictions;  // defaults to <output>/predictions.jsonl
  std::filesystem::path output = "out";
};

struct PipelineConfig {
  int views = 8;
  double fov_deg = 90.0;
  int image_size = 680;
  int splat_radius_px = 2;
  int workers = 1;
  bool zoom = false;
  BackendConfig backend;
  PipelinePaths paths;

  // Throws kParameter: views >= 1, fov in (0, 180), image_size >= 64,
  // splat radius >= 0, workers >= 1.
  void Validate() const;
  std::filesystem::path PredictionsPath() const;
};

// Field-wise overrides; every engaged field wins over the config file.
struct ConfigOverrides {
  std::optional<int> views;
  std::optional<double> fov_deg;
  std::optional<int> image_size;
  std::optional<int> splat_radius_px;
  std::optional<int> workers;
  std::optional<bool> zoom;
  std::optional<std::string> mock_script;
  std::optional<std::string> endpoint;
  std::optional<std::string> model;
  std::optional<double> timeout_s;
  std::optional<std::string> cloud;
  std::optional<std::string> proposals;
  std::optional<std::string> tasks;
  std::optional<std::string> ground_truth;
  std::optional<std::string> predictions;
  std::optional<std::string> output;
};

// Applies a JSON config document onto `config`. Relative paths resolve
// against `base_dir`.
void ApplyConfigJson(const nlohmann::json& doc,
                     const std::filesystem::path& base_dir,
                     PipelineConfig& config);

// defaults <- config file <- overrides, then Validate().
PipelineConfig ResolveConfig(
    const std::optional<std::filesystem::path>& config_file,
    const ConfigOverrides& overrides);

std::unique_ptr<VisionChatBackend> MakeBackend(const BackendConfig& config);

// One line of the tasks file.
std::vector<TaskInstruction> LoadTasks(const std::filesystem::path& path);

struct TaskOutcome {
  std::string task_id;
  std::string scene_id;
  enum class Status { kOk, kGroundingFailure, kFailed };
  Status status = Status::kOk;
  int selected_view = 0;
  std::vector<TripletPrediction> predictions;
  std::string error;
};

nlohmann::json OutcomeToJson(const TaskOutcome& outcome);
std::vector<TaskOutcome> LoadPredictions(const std::filesystem::path& path);

struct GroundTruthTask {
  std::string task_id;
  std::vector<GroundTruthTriplet> triplets;
};
std::vector<GroundTruthTask> LoadGroundTruth(const std::filesystem::path& path);

// Joins outcomes and ground truth by task id; throws kInput listing every id
// present on only one side.
std::vector<TaskEvaluation> PairByTaskId(
    const std::vector<TaskOutcome>& outcomes,
    const std::vector<GroundTruthTask>& ground_truth);

// Renders or reloads the annotated sweep for the configured scene.
SceneArtifacts PrepareScene(const PipelineConfig& config);

// view_{i}.png + sweep.json
int CmdRender(const PipelineConfig& config, std::ostream& log);
// annotated_{i}.png + annotations.json
int CmdAnnotate(const PipelineConfig& config, std::ostream& log);
// predictions JSON-lines + traces/<task>.jsonl; 2 if any task failed
int CmdRun(const PipelineConfig& config, std::ostream& log);
// report.json + report.txt
int CmdEval(const PipelineConfig& config, std::ostream& log);

// Full command line: <program> <render|annotate|run|eval> [flags].
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace embodied

#endif  // EMBODIED_PIPELINE_H_
