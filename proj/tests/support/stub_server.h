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

// Local chat-completions server answering from a ScriptedBackend, for
// exercising the HTTP transport end to end.

#ifndef EMBODIED_TESTS_SUPPORT_STUB_SERVER_H_
#define EMBODIED_TESTS_SUPPORT_STUB_SERVER_H_

#include <atomic>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "embodied/chat.h"
#include "httplib.h"

namespace embodied::testing {

class StubChatServer {
 public:
  explicit StubChatServer(nlohmann::json script);
  ~StubChatServer();

  std::string endpoint() const;
  // Statuses returned (with an empty body) before the script is consulted.
  void FailNext(std::vector<int> statuses);
  int requests() const { return requests_; }
  std::string last_authorization() const;
  std::vector<ChatRequest> received() const;

 private:
  ScriptedBackend backend_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> requests_{0};
  mutable std::mutex mutex_;
  std::deque<int> failures_;
  std::string authorization_;
  std::vector<ChatRequest> received_;
};

}  // namespace embodied::testing

#endif  // EMBODIED_TESTS_SUPPORT_STUB_SERVER_H_
