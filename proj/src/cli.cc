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

#include <functional>
#include <ostream>

#include "CLI11.hpp"
#include "embodied/error.h"
#include "embodied/pipeline.h"

namespace embodied {
namespace {

// Binds `--name` to an optional override; engaged only when given.
template <typename T>
void Flag(CLI::App& app, const std::string& name, std::optional<T>& target,
          const std::string& help) {
  app.add_option_function<T>(
      name, [&target](const T& value) { target = value; }, help);
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"3D affordance reasoning pipeline"};
  app.require_subcommand(1);

  std::string config_file;
  ConfigOverrides o;
  app.add_option("-c,--config", config_file, "JSON config file");
  Flag(app, "--views", o.views, "number of sweep views");
  Flag(app, "--fov", o.fov_deg, "horizontal field of view in degrees");
  Flag(app, "--image-size", o.image_size, "square image side in pixels");
  Flag(app, "--splat-radius", o.splat_radius_px, "splat half-size in pixels");
  Flag(app, "--workers", o.workers, "concurrent tasks in run");
  Flag(app, "--zoom", o.zoom, "extra zoomed view-selection round (true/false)");
  Flag(app, "--mock-script", o.mock_script, "scripted backend JSON");
  Flag(app, "--endpoint", o.endpoint, "chat-completions URL");
  Flag(app, "--model", o.model, "model name sent to the endpoint");
  Flag(app, "--timeout", o.timeout_s, "HTTP timeout in seconds");
  Flag(app, "--cloud", o.cloud, "scene point cloud (.ply)");
  Flag(app, "--proposals", o.proposals, "element proposals JSON");
  Flag(app, "--tasks", o.tasks, "task instructions JSON-lines");
  Flag(app, "--ground-truth", o.ground_truth, "ground truth JSON-lines");
  Flag(app, "--predictions", o.predictions, "predictions JSON-lines");
  Flag(app, "-o,--output", o.output, "output directory");

  using Command = std::function<int(const PipelineConfig&, std::ostream&)>;
  Command command;
  // Subcommands copy this setting when created.
  app.fallthrough();
  auto sub = [&](const char* name, const char* help, Command fn) {
    app.add_subcommand(name, help)->callback([&command, fn] { command = fn; });
  };
  sub("render", "render the surround views", CmdRender);
  sub("annotate", "project and label element boxes", CmdAnnotate);
  sub("run", "reason over every task", CmdRun);
  sub("eval", "score predictions", CmdEval);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  PipelineConfig config;
  try {
    config = ResolveConfig(config_file.empty()
                               ? std::nullopt
                               : std::optional<std::filesystem::path>(config_file),
                           o);
  } catch (const Error& e) {
    err << "error (" << ErrorKindName(e.kind()) << "): " << e.what() << "\n";
    return kExitInputError;
  }
  return command(config, err);
}

}  // namespace embodied
