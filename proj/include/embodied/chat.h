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

// Vision-chat backends: the interface the reasoning steps talk to, a
// scripted in-process backend for tests, and an HTTP client for
// chat-completions style endpoints.

#ifndef EMBODIED_CHAT_H_
#define EMBODIED_CHAT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace embodied {

struct ChatRequest {
  std::string system_text;
  std::string user_text;
  std::vector<std::vector<std::uint8_t>> images;  // PNG bytes, in order
};

class VisionChatBackend {
 public:
  virtual ~VisionChatBackend() = default;

  // Returns the assistant's reply text. Implementations throw
  // Error(kBackend) when no reply could be obtained, and must tolerate
  // concurrent calls.
  virtual std::string Complete(const ChatRequest& request) = 0;
};

// Every prompt's user text starts with this routing line so that scripted
// backends can tell tasks and steps apart:
//   "task: <task_id> | step: <step>"
std::string RoutingLine(std::string_view task_id, std::string_view step);

struct Route {
  std::string task_id;
  std::string step;
};
// Throws kProtocol if the first line is not a routing line.
Route ParseRoutingLine(std::string_view user_text);

// Replays canned replies keyed by (task id, step).
//
// Script schema:
//   {"tasks": {"<task_id>": {"<step>": [reply, ...], ...}, ...},
//    "default": {"<step>": [reply, ...]}}
// A reply is either a string (sent verbatim) or any other JSON value (sent
// as its compact dump). Replies for one (task, step) are consumed in order
// and the last one repeats once exhausted. A reply object of the form
// {"transport_error": "..."} makes Complete() throw a backend error instead.
class ScriptedBackend : public VisionChatBackend {
 public:
  explicit ScriptedBackend(nlohmann::json script);
  static std::unique_ptr<ScriptedBackend> FromFile(const std::filesystem::path& path);

  std::string Complete(const ChatRequest& request) override;

  // Number of Complete() calls served so far.
  int calls() const;

 private:
  nlohmann::json script_;
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, std::string>, std::size_t> cursor_;
  int calls_ = 0;
};

struct HttpBackendConfig {
  std::string endpoint;  // e.g. http://localhost:8000/v1/chat/completions
  std::string model;
  double temperature = 0.0;
  double timeout_s = 120.0;
  int max_retries = 2;  // extra attempts after the first
  double retry_backoff_s = 0.5;  // doubled per retry
  std::string token_env = "EMBODIED_API_TOKEN";
};

// Chat-completions wire format with base64 PNG data URLs.
nlohmann::json BuildChatCompletionsBody(const ChatRequest& request,
                                        const std::string& model,
                                        double temperature);
ChatRequest ParseChatCompletionsBody(const nlohmann::json& body);
nlohmann::json BuildChatCompletionsResponse(const std::string& reply_text);
std::string ExtractReplyText(const nlohmann::json& response);

std::string Base64Encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> Base64Decode(std::string_view text);

// Retries connection failures, HTTP 429 and 5xx with exponential backoff.
// The bearer token, if any, is read from `token_env` at construction.
class HttpChatBackend : public VisionChatBackend {
 public:
  explicit HttpChatBackend(HttpBackendConfig config);

  std::string Complete(const ChatRequest& request) override;

 private:
  HttpBackendConfig config_;
  std::string scheme_host_port_;
  std::string path_;
  std::string token_;
};

}  // namespace embodied

#endif  // EMBODIED_CHAT_H_
