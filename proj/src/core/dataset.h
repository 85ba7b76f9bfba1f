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

// Generated datasets: instance JSONL with a schema header, token-level export
// for sequence-tagging trainers, and distribution statistics.

#ifndef STAR_FORGE_CORE_DATASET_H_
#define STAR_FORGE_CORE_DATASET_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/ontology.h"
#include "core/refine.h"
#include "core/sampler.h"
#include "core/structure.h"

namespace starforge {

inline constexpr int kSchemaVersion = 1;

struct TraceSummary {
  int t = 0;
  StopReason stop_reason = StopReason::kClean;
  std::vector<QualityFlag> flags_remaining;

  bool operator==(const TraceSummary &) const = default;
};

struct Provenance {
  std::string model_id;
  int k = 0;
  PlanItem plan_item;
  std::string prompt_hash;
  Strategy strategy = Strategy::kNoCheck;
  TraceSummary trace_summary;

  bool operator==(const Provenance &) const = default;
};

struct DataInstance {
  std::string id;
  Task task = Task::kEvent;
  std::string passage;
  TargetStructure structure;
  std::vector<Span> spans;
  Provenance provenance;
  std::string created_at;  // RFC 3339

  AnnotatedPassage Annotated() const { return {passage, spans}; }
  bool operator==(const DataInstance &) const = default;
};

ojson ToJson(const DataInstance &instance);
DataInstance DataInstanceFromJson(const ojson &j);

// Header line followed by one instance per line.
std::string SerializeInstances(const std::vector<DataInstance> &instances);
void WriteInstances(const std::string &path,
                    const std::vector<DataInstance> &instances);
// Throws Error(kSchemaVersionMismatch), Error(kParse) or Error(kIo).
std::vector<DataInstance> ReadInstances(const std::string &path);

// Problems that make an instance inconsistent with its ontology or passage.
std::vector<std::string> CheckInstance(const DataInstance &instance,
                                       const Ontology &ontology);

struct Token {
  std::string text;
  size_t start = 0;  // scalar offsets into the passage
  size_t end = 0;
};

// Whitespace split, then leading and trailing punctuation peeled off into
// one-character tokens.
std::vector<Token> Tokenize(const std::string &text);

// Token-level record, or nullopt with `reason` set when some span does not
// align with token boundaries.
std::optional<ojson> ExportRecord(const DataInstance &instance,
                                  std::string *reason);

struct ExportSummary {
  size_t written = 0;
  size_t skipped = 0;
  std::vector<std::string> log;  // one line per skipped instance
};

ExportSummary ExportSpanFormat(const std::vector<DataInstance> &instances,
                               const std::string &path, bool drop_flagged);

struct DatasetStats {
  size_t total = 0;
  size_t flagged_instances = 0;
  std::map<std::string, size_t> per_type;
  std::map<int, size_t> density;
  std::map<std::string, size_t> hallucination_bins;  // keyed by FormatBin
  std::map<std::string, size_t> unique_triggers;
  // Fraction of instances with a remaining flag on each dimension.
  std::map<std::string, double> remaining_flag_rate;

  ojson ToJson() const;
};

std::string FormatBin(double bin);

// With `config`, the density and bin histograms list every planned bucket,
// including empty ones.
DatasetStats ComputeStats(const std::vector<DataInstance> &instances,
                          const GenerationConfig *config = nullptr);

}  // namespace starforge

#endif  // STAR_FORGE_CORE_DATASET_H_
