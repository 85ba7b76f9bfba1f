/*
 * Copyright 2026 The Star Forge Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the Star Forge data-generation engine.
 *
 * Every fallible call returns an sf_status; on failure the context keeps a
 * message retrievable with sf_context_last_error(). Strings returned through
 * `char **` out-parameters are owned by the caller and must be released with
 * sf_string_free(). A context must not be used from two threads at once;
 * backends may be shared.
 */

#ifndef STAR_FORGE_STAR_FORGE_H_
#define STAR_FORGE_STAR_FORGE_H_

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define SF_API __declspec(dllexport)
#else
#define SF_API __attribute__((visibility("default")))
#endif

typedef enum sf_status {
  SF_OK = 0,
  SF_ERR_PARSE = 1,
  SF_ERR_VALIDATION = 2,
  SF_ERR_UNKNOWN_EVENT_TYPE = 3,
  SF_ERR_DISALLOWED_ENTITY_TYPE = 4,
  SF_ERR_KEY_MISMATCH = 5,
  SF_ERR_MISSING_POOL = 6,
  SF_ERR_INSUFFICIENT_CANDIDATES = 7,
  SF_ERR_EMPTY_ONTOLOGY = 8,
  SF_ERR_OVERLAP = 9,
  SF_ERR_SPAN_MISMATCH = 10,
  SF_ERR_MISSING_FIELD = 11,
  SF_ERR_CHECKER_UNAVAILABLE = 12,
  SF_ERR_AUTH = 13,
  SF_ERR_RATE_LIMIT_EXHAUSTED = 14,
  SF_ERR_CASSETTE_MISS = 15,
  SF_ERR_TRANSPORT = 16,
  SF_ERR_BACKEND = 17,
  SF_ERR_IO = 18,
  SF_ERR_SCHEMA_VERSION_MISMATCH = 19,
  SF_ERR_CONFIG = 20,
  SF_ERR_INVALID_ARGUMENT = 21,
  /* `validate` ran and found problems in the dataset. */
  SF_VALIDATION_FAILED = 22,
  SF_ERR_INTERNAL = 23
} sf_status;

typedef struct sf_context sf_context;
typedef struct sf_ontology sf_ontology;
typedef struct sf_backend sf_backend;

SF_API const char *sf_version(void);

/* Stable identifier such as "SF_ERR_CASSETTE_MISS". */
SF_API const char *sf_status_name(sf_status status);

/* Process exit code for a status: 0 success, 1 validation failure, 2
 * configuration or input error, 3 backend or checker failure. */
SF_API int sf_status_exit_code(sf_status status);

SF_API sf_context *sf_context_create(void);
SF_API void sf_context_free(sf_context *ctx);

/* Message of the most recent failure on `ctx`, or "" if none. Valid until
 * the next call on the same context. */
SF_API const char *sf_context_last_error(const sf_context *ctx);

SF_API void sf_string_free(char *s);

SF_API sf_status sf_ontology_load(sf_context *ctx, const char *path,
                                  sf_ontology **out);
SF_API sf_status sf_ontology_parse(sf_context *ctx, const char *json,
                                   sf_ontology **out);
SF_API void sf_ontology_free(sf_ontology *ontology);

/* `passage_json` is {"text": ..., "spans": [{start, end, label,
 * event_index}]}; writes the tag-wrapped passage. */
SF_API sf_status sf_codec_encode(sf_context *ctx, const char *passage_json,
                                 char **out_tagged);

/* Decodes a tag-wrapped passage against the expected structure of `task`
 * ("EE" or "RE"). Writes {"text", "spans", "issues", "notes"}. */
SF_API sf_status sf_codec_decode(sf_context *ctx, const sf_ontology *ontology,
                                 const char *tagged, const char *task,
                                 const char *structure_json,
                                 char **out_report_json);

/* `config_json` uses the "backend" section of a run configuration. */
SF_API sf_status sf_backend_create(sf_context *ctx, const char *config_json,
                                   sf_backend **out);
SF_API void sf_backend_free(sf_backend *backend);

/* `request_json` is {model, messages:[{role, content}], temperature,
 * max_tokens}; writes the response text. */
SF_API sf_status sf_backend_complete(sf_context *ctx, sf_backend *backend,
                                     const char *request_json, char **out_text);

/* Runs a pipeline command ("pools", "plan", "generate", "refine", "export",
 * "stats", "validate"). `config_path` and `overrides_json` may be NULL;
 * overrides take precedence over the file. Progress and findings go to
 * standard error. */
SF_API sf_status sf_run_command(sf_context *ctx, const char *command,
                                const char *config_path,
                                const char *overrides_json);

#ifdef __cplusplus
}
#endif

#endif /* STAR_FORGE_STAR_FORGE_H_ */
