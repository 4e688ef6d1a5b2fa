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

#ifndef EMBODIED_ERROR_H_
#define EMBODIED_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace embodied {

enum class ErrorKind {
  kFormat,      // Malformed file structure.
  kData,        // Well-formed file with invalid values.
  kParameter,   // Caller passed an out-of-domain argument.
  kEmptyInput,
  kIndex,       // Point index outside the cloud.
  kVocabulary,  // String outside a closed vocabulary.
  kRange,
  kIo,
  kInput,       // Inconsistent inputs across files (e.g. task id mismatch).
  kBackend,     // Transport failure talking to the vision-chat backend.
  kProtocol,    // Backend replied, but not within the reply contract.
};

std::string_view ErrorKindName(ErrorKind kind);

// All library errors derive from this. The kind lets the CLI map failures to
// exit codes without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Throw(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace embodied

#endif  // EMBODIED_ERROR_H_
