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

#include "star_forge/star_forge.h"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <memory>
#include <string>

#include "core/backend.h"
#include "core/error.h"
#include "core/http_backend.h"
#include "core/ontology.h"
#include "core/pipeline.h"
#include "core/span_codec.h"
#include "core/structure.h"

struct sf_context {
  std::string last_error;
};

struct sf_ontology {
  starforge::Ontology ontology;
};

struct sf_backend {
  std::shared_ptr<starforge::ChatBackend> backend;
};

namespace {

using starforge::ErrorCode;
using starforge::ojson;

static_assert(static_cast<int>(ErrorCode::kParse) + 1 == SF_ERR_PARSE);
static_assert(static_cast<int>(ErrorCode::kCheckerUnavailable) + 1 ==
              SF_ERR_CHECKER_UNAVAILABLE);
static_assert(static_cast<int>(ErrorCode::kInvalidArgument) + 1 ==
              SF_ERR_INVALID_ARGUMENT);

sf_status StatusOf(ErrorCode code) {
  // ErrorCode values are declared in the same order as the status codes.
  return static_cast<sf_status>(static_cast<int>(code) + 1);
}

template <typename Fn>
sf_status Guard(sf_context *ctx, Fn fn) {
  if (ctx == nullptr) return SF_ERR_INVALID_ARGUMENT;
  ctx->last_error.clear();
  try {
    return fn();
  } catch (const starforge::Error &e) {
    ctx->last_error = e.what();
    return StatusOf(e.code());
  } catch (const nlohmann::json::exception &e) {
    ctx->last_error = e.what();
    return SF_ERR_PARSE;
  } catch (const std::exception &e) {
    ctx->last_error = e.what();
    return SF_ERR_INTERNAL;
  }
}

char *Dup(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Require(const void *p, const char *name) {
  if (p == nullptr) {
    starforge::Fail(ErrorCode::kInvalidArgument, std::string(name) + " is NULL");
  }
}

}  // namespace

extern "C" {

const char *sf_version(void) { return "1.0.0"; }

const char *sf_status_name(sf_status status) {
  switch (status) {
    case SF_OK: return "SF_OK";
    case SF_ERR_PARSE: return "SF_ERR_PARSE";
    case SF_ERR_VALIDATION: return "SF_ERR_VALIDATION";
    case SF_ERR_UNKNOWN_EVENT_TYPE: return "SF_ERR_UNKNOWN_EVENT_TYPE";
    case SF_ERR_DISALLOWED_ENTITY_TYPE: return "SF_ERR_DISALLOWED_ENTITY_TYPE";
    case SF_ERR_KEY_MISMATCH: return "SF_ERR_KEY_MISMATCH";
    case SF_ERR_MISSING_POOL: return "SF_ERR_MISSING_POOL";
    case SF_ERR_INSUFFICIENT_CANDIDATES: return "SF_ERR_INSUFFICIENT_CANDIDATES";
    case SF_ERR_EMPTY_ONTOLOGY: return "SF_ERR_EMPTY_ONTOLOGY";
    case SF_ERR_OVERLAP: return "SF_ERR_OVERLAP";
    case SF_ERR_SPAN_MISMATCH: return "SF_ERR_SPAN_MISMATCH";
    case SF_ERR_MISSING_FIELD: return "SF_ERR_MISSING_FIELD";
    case SF_ERR_CHECKER_UNAVAILABLE: return "SF_ERR_CHECKER_UNAVAILABLE";
    case SF_ERR_AUTH: return "SF_ERR_AUTH";
    case SF_ERR_RATE_LIMIT_EXHAUSTED: return "SF_ERR_RATE_LIMIT_EXHAUSTED";
    case SF_ERR_CASSETTE_MISS: return "SF_ERR_CASSETTE_MISS";
    case SF_ERR_TRANSPORT: return "SF_ERR_TRANSPORT";
    case SF_ERR_BACKEND: return "SF_ERR_BACKEND";
    case SF_ERR_IO: return "SF_ERR_IO";
    case SF_ERR_SCHEMA_VERSION_MISMATCH: return "SF_ERR_SCHEMA_VERSION_MISMATCH";
    case SF_ERR_CONFIG: return "SF_ERR_CONFIG";
    case SF_ERR_INVALID_ARGUMENT: return "SF_ERR_INVALID_ARGUMENT";
    case SF_VALIDATION_FAILED: return "SF_VALIDATION_FAILED";
    case SF_ERR_INTERNAL: return "SF_ERR_INTERNAL";
  }
  return "SF_ERR_INTERNAL";
}

int sf_status_exit_code(sf_status status) {
  switch (status) {
    case SF_OK: return 0;
    case SF_VALIDATION_FAILED: return 1;
    case SF_ERR_CHECKER_UNAVAILABLE:
    case SF_ERR_AUTH:
    case SF_ERR_RATE_LIMIT_EXHAUSTED:
    case SF_ERR_CASSETTE_MISS:
    case SF_ERR_TRANSPORT:
    case SF_ERR_BACKEND:
      return 3;
    default:
      return 2;
  }
}

sf_context *sf_context_create(void) { return new (std::nothrow) sf_context(); }

void sf_context_free(sf_context *ctx) { delete ctx; }

const char *sf_context_last_error(const sf_context *ctx) {
  return ctx == nullptr ? "" : ctx->last_error.c_str();
}

void sf_string_free(char *s) { std::free(s); }

sf_status sf_ontology_load(sf_context *ctx, const char *path, sf_ontology **out) {
  return Guard(ctx, [&] {
    Require(path, "path");
    Require(out, "out");
    *out = new sf_ontology{starforge::Ontology::LoadFile(path)};
    return SF_OK;
  });
}

sf_status sf_ontology_parse(sf_context *ctx, const char *json, sf_ontology **out) {
  return Guard(ctx, [&] {
    Require(json, "json");
    Require(out, "out");
    *out = new sf_ontology{starforge::Ontology::Parse(json)};
    return SF_OK;
  });
}

void sf_ontology_free(sf_ontology *ontology) { delete ontology; }

sf_status sf_codec_encode(sf_context *ctx, const char *passage_json,
                          char **out_tagged) {
  return Guard(ctx, [&] {
    Require(passage_json, "passage_json");
    Require(out_tagged, "out_tagged");
    const ojson j = ojson::parse(passage_json);
    starforge::AnnotatedPassage passage;
    passage.text = j.at("text").get<std::string>();
    for (const auto &s : j.value("spans", ojson::array())) {
      passage.spans.push_back(starforge::SpanFromJson(s));
    }
    *out_tagged = Dup(starforge::Encode(passage));
    return SF_OK;
  });
}

sf_status sf_codec_decode(sf_context *ctx, const sf_ontology *ontology,
                          const char *tagged, const char *task,
                          const char *structure_json, char **out_report_json) {
  return Guard(ctx, [&] {
    Require(ontology, "ontology");
    Require(tagged, "tagged");
    Require(task, "task");
    Require(structure_json, "structure_json");
    Require(out_report_json, "out_report_json");
    const starforge::TargetStructure y = starforge::TargetStructureFromJson(
        ojson::parse(structure_json), starforge::ParseTask(task));
    const starforge::DecodeReport report =
        starforge::Decode(tagged, y, ontology->ontology);
    ojson spans = ojson::array();
    for (const auto &s : report.passage.spans) spans.push_back(starforge::ToJson(s));
    ojson issues = ojson::array();
    for (const auto &i : report.issues) {
      issues.push_back({{"kind", std::string(starforge::DecodeIssueName(i.kind))},
                        {"location", i.location},
                        {"detail", i.detail}});
    }
    const ojson out = {{"text", report.passage.text},
                       {"spans", std::move(spans)},
                       {"issues", std::move(issues)},
                       {"notes", report.notes}};
    *out_report_json = Dup(out.dump());
    return SF_OK;
  });
}

sf_status sf_backend_create(sf_context *ctx, const char *config_json,
                            sf_backend **out) {
  return Guard(ctx, [&] {
    Require(config_json, "config_json");
    Require(out, "out");
    const auto config =
        starforge::BackendConfig::FromJson(nlohmann::json::parse(config_json));
    *out = new sf_backend{starforge::MakeBackend(config)};
    return SF_OK;
  });
}

void sf_backend_free(sf_backend *backend) { delete backend; }

sf_status sf_backend_complete(sf_context *ctx, sf_backend *backend,
                              const char *request_json, char **out_text) {
  return Guard(ctx, [&] {
    Require(backend, "backend");
    Require(request_json, "request_json");
    Require(out_text, "out_text");
    const auto request =
        starforge::ChatRequest::FromJson(nlohmann::json::parse(request_json));
    *out_text = Dup(backend->backend->Complete(request).text);
    return SF_OK;
  });
}

sf_status sf_run_command(sf_context *ctx, const char *command,
                         const char *config_path, const char *overrides_json) {
  return Guard(ctx, [&] {
    Require(command, "command");
    nlohmann::json overrides;
    if (overrides_json != nullptr && *overrides_json != '\0') {
      try {
        overrides = nlohmann::json::parse(overrides_json);
      } catch (const nlohmann::json::exception &e) {
        starforge::Fail(ErrorCode::kConfig, std::string("overrides: ") + e.what());
      }
    }
    const auto config = starforge::RunConfig::Load(
        config_path == nullptr ? std::string() : std::string(config_path), overrides);
    const int rc = starforge::RunCommand(command, config, std::cerr);
    if (rc != 0) {
      ctx->last_error = std::string(command) + " found problems";
      return SF_VALIDATION_FAILED;
    }
    return SF_OK;
  });
}

}  // extern "C"
