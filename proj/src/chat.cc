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

#include "embodied/chat.h"

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <regex>
#include <thread>

#include <fmt/format.h>

#include "embodied/error.h"
#include "httplib.h"

namespace embodied {

std::string RoutingLine(std::string_view task_id, std::string_view step) {
  return fmt::format("task: {} | step: {}", task_id, step);
}

Route ParseRoutingLine(std::string_view user_text) {
  const std::string first_line(user_text.substr(0, user_text.find('\n')));
  static const std::regex kPattern(R"(^task: (.*) \| step: (\S+)\s*$)");
  std::smatch match;
  if (!std::regex_match(first_line, match, kPattern)) {
    Throw(ErrorKind::kProtocol,
          fmt::format("request lacks a routing line: '{}'", first_line));
  }
  return {match[1].str(), match[2].str()};
}

ScriptedBackend::ScriptedBackend(nlohmann::json script)
    : script_(std::move(script)) {
  if (!script_.is_object()) {
    Throw(ErrorKind::kFormat, "mock script must be a JSON object");
  }
  for (const char* key : {"tasks", "default"}) {
    if (script_.contains(key) && !script_[key].is_object()) {
      Throw(ErrorKind::kFormat,
            fmt::format("mock script field '{}' must be an object", key));
    }
  }
}

std::unique_ptr<ScriptedBackend> ScriptedBackend::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    Throw(ErrorKind::kIo, fmt::format("cannot open '{}'", path.string()));
  }
  try {
    return std::make_unique<ScriptedBackend>(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    Throw(ErrorKind::kFormat, fmt::format("{}: {}", path.string(), e.what()));
  }
}

std::string ScriptedBackend::Complete(const ChatRequest& request) {
  const Route route = ParseRoutingLine(request.user_text);
  std::lock_guard<std::mutex> lock(mutex_);
  ++calls_;

  const nlohmann::json* replies = nullptr;
  if (script_.contains("tasks") && script_["tasks"].contains(route.task_id) &&
      script_["tasks"][route.task_id].contains(route.step)) {
    replies = &script_["tasks"][route.task_id][route.step];
  } else if (script_.contains("default") &&
             script_["default"].contains(route.step)) {
    replies = &script_["default"][route.step];
  }
  if (replies == nullptr || !replies->is_array() || replies->empty()) {
    Throw(ErrorKind::kBackend,
          fmt::format("mock script has no reply for task '{}' step '{}'",
                      route.task_id, route.step));
  }

  std::size_t& cursor = cursor_[{route.task_id, route.step}];
  const nlohmann::json& reply =
      (*replies)[std::min(cursor, replies->size() - 1)];
  ++cursor;
  if (reply.is_object() && reply.contains("transport_error")) {
    Throw(ErrorKind::kBackend,
          fmt::format("scripted transport failure: {}",
                      reply["transport_error"].dump()));
  }
  return reply.is_string() ? reply.get<std::string>() : reply.dump();
}

int ScriptedBackend::calls() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return calls_;
}

std::string Base64Encode(const std::vector<std::uint8_t>& bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> Base64Decode(std::string_view text) {
  if (text.size() % 4 != 0) {
    Throw(ErrorKind::kFormat, "base64 length is not a multiple of 4");
  }
  std::vector<std::uint8_t> out(3 * text.size() / 4);
  const int n = EVP_DecodeBlock(
      out.data(), reinterpret_cast<const unsigned char*>(text.data()),
      static_cast<int>(text.size()));
  if (n < 0) Throw(ErrorKind::kFormat, "invalid base64 payload");
  // EVP_DecodeBlock keeps the bytes produced by '=' padding.
  std::size_t size = static_cast<std::size_t>(n);
  for (auto it = text.rbegin(); it != text.rend() && *it == '='; ++it) --size;
  out.resize(size);
  return out;
}

namespace {

constexpr std::string_view kPngDataUrlPrefix = "data:image/png;base64,";

}  // namespace

nlohmann::json BuildChatCompletionsBody(const ChatRequest& request,
                                        const std::string& model,
                                        double temperature) {
  nlohmann::json user_content = nlohmann::json::array();
  user_content.push_back({{"type", "text"}, {"text", request.user_text}});
  for (const auto& png : request.images) {
    user_content.push_back(
        {{"type", "image_url"},
         {"image_url",
          {{"url", std::string(kPngDataUrlPrefix) + Base64Encode(png)}}}});
  }
  return {{"model", model},
          {"temperature", temperature},
          {"messages",
           {{{"role", "system"}, {"content", request.system_text}},
            {{"role", "user"}, {"content", user_content}}}}};
}

ChatRequest ParseChatCompletionsBody(const nlohmann::json& body) {
  ChatRequest request;
  try {
    for (const auto& message : body.at("messages")) {
      const std::string role = message.at("role").get<std::string>();
      const nlohmann::json& content = message.at("content");
      std::string* text =
          role == "system" ? &request.system_text : &request.user_text;
      if (content.is_string()) {
        *text += content.get<std::string>();
        continue;
      }
      for (const auto& part : content) {
        const std::string type = part.at("type").get<std::string>();
        if (type == "text") {
          *text += part.at("text").get<std::string>();
        } else if (type == "image_url") {
          const std::string url = part.at("image_url").at("url");
          if (url.rfind(kPngDataUrlPrefix, 0) != 0) {
            Throw(ErrorKind::kFormat, "image_url is not a PNG data URL");
          }
          request.images.push_back(
              Base64Decode(std::string_view(url).substr(
                  kPngDataUrlPrefix.size())));
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    Throw(ErrorKind::kFormat, fmt::format("chat request: {}", e.what()));
  }
  return request;
}

nlohmann::json BuildChatCompletionsResponse(const std::string& reply_text) {
  return {{"object", "chat.completion"},
          {"choices",
           {{{"index", 0},
             {"finish_reason", "stop"},
             {"message",
              {{"role", "assistant"}, {"content", reply_text}}}}}}};
}

std::string ExtractReplyText(const nlohmann::json& response) {
  try {
    const nlohmann::json& content =
        response.at("choices").at(0).at("message").at("content");
    if (content.is_string()) return content.get<std::string>();
    std::string text;
    for (const auto& part : content) {
      if (part.value("type", "") == "text") text += part.at("text");
    }
    return text;
  } catch (const nlohmann::json::exception& e) {
    Throw(ErrorKind::kBackend,
          fmt::format("unexpected chat response shape: {}", e.what()));
  }
}

HttpChatBackend::HttpChatBackend(HttpBackendConfig config)
    : config_(std::move(config)) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch match;
  if (!std::regex_match(config_.endpoint, match, kUrl)) {
    Throw(ErrorKind::kParameter,
          fmt::format("invalid backend endpoint '{}'", config_.endpoint));
  }
  scheme_host_port_ = match[1].str();
  path_ = match[2].matched ? match[2].str() : "/";
  if (!config_.token_env.empty()) {
    if (const char* token = std::getenv(config_.token_env.c_str())) {
      token_ = token;
    }
  }
}

std::string HttpChatBackend::Complete(const ChatRequest& request) {
  const std::string body =
      BuildChatCompletionsBody(request, config_.model, config_.temperature)
          .dump();

  // One client per call keeps Complete() safe under concurrent use.
  httplib::Client client(scheme_host_port_);
  const auto timeout = std::chrono::duration<double>(config_.timeout_s);
  client.set_connection_timeout(
      std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(
      std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_write_timeout(
      std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  if (!token_.empty()) client.set_bearer_token_auth(token_);

  std::string last_error;
  double backoff = config_.retry_backoff_s;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
      backoff *= 2.0;
    }
    const httplib::Result result = client.Post(path_, body, "application/json");
    if (!result) {
      last_error = httplib::to_string(result.error());
      continue;
    }
    if (result->status == 429 || result->status >= 500) {
      last_error = fmt::format("HTTP {}", result->status);
      continue;
    }
    if (result->status != 200) {
      Throw(ErrorKind::kBackend,
            fmt::format("{} returned HTTP {}: {}", config_.endpoint,
                        result->status, result->body.substr(0, 200)));
    }
    try {
      return ExtractReplyText(nlohmann::json::parse(result->body));
    } catch (const nlohmann::json::parse_error& e) {
      Throw(ErrorKind::kBackend,
            fmt::format("{} returned non-JSON body: {}", config_.endpoint,
                        e.what()));
    }
  }
  Throw(ErrorKind::kBackend,
        fmt::format("{} failed after {} attempts: {}", config_.endpoint,
                    config_.max_retries + 1, last_error));
}

}  // namespace embodied
