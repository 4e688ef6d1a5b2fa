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

#include <cstdlib>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "embodied/chat.h"
#include "embodied/error.h"
#include "support/stub_server.h"

namespace embodied {
namespace {

using nlohmann::json;
using testing::StubChatServer;

ChatRequest Request(const std::string& task, const std::string& step,
                    std::vector<std::vector<std::uint8_t>> images = {}) {
  return {"system prompt", RoutingLine(task, step) + "\nbody", std::move(images)};
}

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no embodied::Error thrown";
  return ErrorKind::kInput;
}

TEST(RoutingLine, RoundTrip) {
  const Route r = ParseRoutingLine(RoutingLine("kitchen 7", "ground") + "\nrest");
  EXPECT_EQ(r.task_id, "kitchen 7");
  EXPECT_EQ(r.step, "ground");
  EXPECT_EQ(KindOf([] { ParseRoutingLine("hello\ntask: a | step: b"); }),
            ErrorKind::kProtocol);
}

TEST(Base64, KnownVectors) {
  auto enc = [](std::string s) {
    return Base64Encode(std::vector<std::uint8_t>(s.begin(), s.end()));
  };
  EXPECT_EQ(enc(""), "");
  EXPECT_EQ(enc("f"), "Zg==");
  EXPECT_EQ(enc("fo"), "Zm8=");
  EXPECT_EQ(enc("foo"), "Zm9v");
  EXPECT_EQ(enc("foobar"), "Zm9vYmFy");
  for (std::size_t n = 0; n < 40; ++n) {
    std::vector<std::uint8_t> bytes(n);
    for (std::size_t i = 0; i < n; ++i) bytes[i] = static_cast<std::uint8_t>(i * 37 + 250);
    EXPECT_EQ(Base64Decode(Base64Encode(bytes)), bytes) << n;
  }
  EXPECT_THROW(Base64Decode("abc"), Error);
}

TEST(WireFormat, BodyRoundTrip) {
  const ChatRequest in = Request("t1", "select", {{1, 2, 3}, {0, 255}});
  const json body = BuildChatCompletionsBody(in, "some-model", 0.0);
  EXPECT_EQ(body["model"], "some-model");
  EXPECT_EQ(body["temperature"], 0.0);
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][1]["content"][1]["image_url"]["url"],
            "data:image/png;base64,AQID");
  const ChatRequest out = ParseChatCompletionsBody(body);
  EXPECT_EQ(out.system_text, in.system_text);
  EXPECT_EQ(out.user_text, in.user_text);
  EXPECT_EQ(out.images, in.images);
}

TEST(WireFormat, ReplyExtraction) {
  EXPECT_EQ(ExtractReplyText(BuildChatCompletionsResponse("{\"view\": 2}")),
            "{\"view\": 2}");
  const json parts = {{"choices",
                       {{{"message",
                          {{"content",
                            {{{"type", "text"}, {"text", "a"}},
                             {{"type", "text"}, {"text", "b"}}}}}}}}}};
  EXPECT_EQ(ExtractReplyText(parts), "ab");
  EXPECT_EQ(KindOf([] { ExtractReplyText(json::object()); }), ErrorKind::kBackend);
}

TEST(ScriptedBackend, RepliesInOrderThenRepeatsLast) {
  ScriptedBackend backend(json{
      {"tasks", {{"a", {{"select", {"one", "two"}}}}}},
      {"default", {{"select", {json{{"view", 1}}}}, {"ground", {"g"}}}}});
  EXPECT_EQ(backend.Complete(Request("a", "select")), "one");
  EXPECT_EQ(backend.Complete(Request("a", "select")), "two");
  EXPECT_EQ(backend.Complete(Request("a", "select")), "two");
  EXPECT_EQ(backend.Complete(Request("b", "select")), "{\"view\":1}");
  EXPECT_EQ(backend.Complete(Request("a", "ground")), "g");
  EXPECT_EQ(backend.calls(), 5);
  EXPECT_EQ(KindOf([&] { backend.Complete(Request("a", "motion")); }),
            ErrorKind::kBackend);
}

TEST(ScriptedBackend, TransportErrorAndBadScripts) {
  ScriptedBackend backend(json{
      {"tasks", {{"a", {{"select", {json{{"transport_error", "reset"}}, "ok"}}}}}}});
  EXPECT_EQ(KindOf([&] { backend.Complete(Request("a", "select")); }),
            ErrorKind::kBackend);
  EXPECT_EQ(backend.Complete(Request("a", "select")), "ok");
  EXPECT_EQ(KindOf([] { ScriptedBackend(json::array()); }), ErrorKind::kFormat);
  EXPECT_EQ(KindOf([] { ScriptedBackend(json{{"tasks", 3}}); }), ErrorKind::kFormat);
}

TEST(ScriptedBackend, ConcurrentCallsAreSerialized) {
  json replies = json::array();
  for (int i = 0; i < 200; ++i) replies.push_back(std::to_string(i));
  ScriptedBackend backend(json{{"default", {{"select", replies}}}});
  std::vector<std::thread> threads;
  std::mutex m;
  std::set<std::string> seen;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 50; ++i) {
        const std::string r = backend.Complete(Request("same", "select"));
        std::lock_guard<std::mutex> lock(m);
        seen.insert(r);
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(backend.calls(), 200);
  EXPECT_EQ(seen.size(), 200u);
}

HttpBackendConfig Config(const std::string& endpoint) {
  HttpBackendConfig c;
  c.endpoint = endpoint;
  c.model = "stub";
  c.timeout_s = 5;
  c.retry_backoff_s = 0.01;
  c.token_env = "EMBODIED_TEST_TOKEN";
  return c;
}

TEST(HttpChatBackend, TalksToStubServer) {
  StubChatServer server(json{{"default", {{"select", {"{\"view\": 3}"}}}}});
  ::setenv("EMBODIED_TEST_TOKEN", "secret-token", 1);
  HttpChatBackend backend(Config(server.endpoint()));
  ::unsetenv("EMBODIED_TEST_TOKEN");
  const ChatRequest request = Request("t", "select", {{9, 8, 7, 6}});
  EXPECT_EQ(backend.Complete(request), "{\"view\": 3}");
  EXPECT_EQ(server.last_authorization(), "Bearer secret-token");
  ASSERT_EQ(server.received().size(), 1u);
  EXPECT_EQ(server.received()[0].images, request.images);
  EXPECT_EQ(server.received()[0].user_text, request.user_text);
}

TEST(HttpChatBackend, RetriesTransientStatuses) {
  StubChatServer server(json{{"default", {{"select", {"fine"}}}}});
  server.FailNext({503, 429});
  HttpChatBackend backend(Config(server.endpoint()));
  EXPECT_EQ(backend.Complete(Request("t", "select")), "fine");
  EXPECT_EQ(server.requests(), 3);
}

TEST(HttpChatBackend, GivesUpAfterRetries) {
  StubChatServer server(json{{"default", {{"select", {"fine"}}}}});
  server.FailNext({500, 502, 503});
  HttpChatBackend backend(Config(server.endpoint()));
  EXPECT_EQ(KindOf([&] { backend.Complete(Request("t", "select")); }),
            ErrorKind::kBackend);
  EXPECT_EQ(server.requests(), 3);
}

TEST(HttpChatBackend, ClientErrorsAreNotRetried) {
  StubChatServer server(json{{"default", {{"select", {"fine"}}}}});
  server.FailNext({400});
  HttpChatBackend backend(Config(server.endpoint()));
  EXPECT_EQ(KindOf([&] { backend.Complete(Request("t", "select")); }),
            ErrorKind::kBackend);
  EXPECT_EQ(server.requests(), 1);
}

TEST(HttpChatBackend, UnreachableAndInvalidEndpoints) {
  std::string dead;
  {
    StubChatServer server(json::object());
    dead = server.endpoint();
  }
  HttpChatBackend backend(Config(dead));
  EXPECT_EQ(KindOf([&] { backend.Complete(Request("t", "select")); }),
            ErrorKind::kBackend);
  EXPECT_EQ(KindOf([] { HttpChatBackend(Config("localhost:80")); }),
            ErrorKind::kParameter);
}

}  // namespace
}  // namespace embodied
