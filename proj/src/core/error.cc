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

#include "core/error.h"

namespace starforge {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kUnknownEventType: return "UnknownEventType";
    case ErrorCode::kDisallowedEntityType: return "DisallowedEntityType";
    case ErrorCode::kKeyMismatch: return "KeyMismatch";
    case ErrorCode::kMissingPool: return "MissingPool";
    case ErrorCode::kInsufficientCandidates: return "InsufficientCandidates";
    case ErrorCode::kEmptyOntology: return "EmptyOntology";
    case ErrorCode::kOverlap: return "OverlapError";
    case ErrorCode::kSpanMismatch: return "SpanMismatch";
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kCheckerUnavailable: return "CheckerUnavailable";
    case ErrorCode::kAuth: return "AuthError";
    case ErrorCode::kRateLimitExhausted: return "RateLimitExhausted";
    case ErrorCode::kCassetteMiss: return "CassetteMiss";
    case ErrorCode::kTransport: return "TransportError";
    case ErrorCode::kBackend: return "BackendError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kSchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "UnknownError";
}

bool IsBackendFailure(ErrorCode code) {
  switch (code) {
    case ErrorCode::kCheckerUnavailable:
    case ErrorCode::kAuth:
    case ErrorCode::kRateLimitExhausted:
    case ErrorCode::kCassetteMiss:
    case ErrorCode::kTransport:
    case ErrorCode::kBackend:
      return true;
    default:
      return false;
  }
}

}  // namespace starforge
