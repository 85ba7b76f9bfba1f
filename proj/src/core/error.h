// Copyright 2026 The Star Forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STAR_FORGE_CORE_ERROR_H_
#define STAR_FORGE_CORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace starforge {

enum class ErrorCode {
  kParse,
  kValidation,
  kUnknownEventType,
  kDisallowedEntityType,
  kKeyMismatch,
  kMissingPool,
  kInsufficientCandidates,
  kEmptyOntology,
  kOverlap,
  kSpanMismatch,
  kMissingField,
  kCheckerUnavailable,
  kAuth,
  kRateLimitExhausted,
  kCassetteMiss,
  kTransport,
  kBackend,
  kIo,
  kSchemaVersionMismatch,
  kConfig,
  kInvalidArgument,
};

std::string_view ErrorCodeName(ErrorCode code);

// All failures in the core surface as this exception. The C API converts it
// into a status code plus message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void Fail(ErrorCode code, const std::string &message) {
  throw Error(code, message);
}

// True for failures that originate in an LLM backend or external checker.
bool IsBackendFailure(ErrorCode code);

}  // namespace starforge

#endif  // STAR_FORGE_CORE_ERROR_H_
