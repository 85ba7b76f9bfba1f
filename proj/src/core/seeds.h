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

// Seed demonstrations: the k human-annotated instances a run starts from.
//
// Seeds file (JSONL), event task:
//   {"source_id": "...", "passage": "...",
//    "events": [{"event_type": "...", "trigger": "...",
//                "args": {"Role": "mention", ...}}]}
// relation task:
//   {"source_id": "...", "passage": "...", "subject": "...", "object": "...",
//    "relation": "...", "subject_type": "ORG", "object_type": "PER"}
//
// Mentions are located in the passage by first non-overlapping occurrence.

#ifndef STAR_FORGE_CORE_SEEDS_H_
#define STAR_FORGE_CORE_SEEDS_H_

#include <string>
#include <vector>

#include "core/ontology.h"
#include "core/structure.h"

namespace starforge {

struct SeedDemonstration {
  std::string source_id;
  std::string passage;
  TargetStructure structure;
  std::vector<Span> spans;
  // Relation seeds only; may be empty.
  std::string subject_type;
  std::string object_type;

  AnnotatedPassage Annotated() const { return {passage, spans}; }
};

// Throws Error(kValidation) for labels missing from the ontology and
// Error(kSpanMismatch) when a mention is not a subsequence of the passage.
SeedDemonstration SeedFromJson(const ojson &j, const Ontology &ontology,
                               Task task);
std::vector<SeedDemonstration> LoadSeeds(const std::string &path,
                                         const Ontology &ontology, Task task);

// Seeds that contain at least one event of `event_type`.
std::vector<SeedDemonstration> SeedsOfType(
    const std::vector<SeedDemonstration> &seeds, const std::string &event_type);

}  // namespace starforge

#endif  // STAR_FORGE_CORE_SEEDS_H_
