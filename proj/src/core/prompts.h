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

// Passage-generation prompts. A prompt is assembled from segments in a fixed
// order: task instruction, one type instruction per distinct type in the
// target, verbalized demonstrations, and the verbalized target with an open
// passage slot.

#ifndef STAR_FORGE_CORE_PROMPTS_H_
#define STAR_FORGE_CORE_PROMPTS_H_

#include <string>
#include <vector>

#include "core/ontology.h"
#include "core/seeds.h"
#include "core/structure.h"

namespace starforge {

enum class SegmentKind {
  kTaskInstruction,
  kTypeInstruction,
  kDemonstration,
  kTargetVerbalization,
};

struct PromptSegment {
  SegmentKind kind;
  std::string text;
};

struct PromptBundle {
  std::vector<PromptSegment> segments;
  std::string rendered;      // segment texts joined by blank lines
  std::string content_hash;  // SHA-256 of `rendered`

  static PromptBundle Assemble(std::vector<PromptSegment> segments);
};

std::string RenderTaskInstruction(Task task);
std::string RenderTypeInstruction(const EventTypeSpec &spec);
std::string RenderTypeInstruction(const RelationTypeSpec &spec);

// Verbalizes a structure. With `passage` (a demonstration) the tagged passage
// is appended; without it the passage slot is left open for the model.
// Throws Error(kSpanMismatch) if a span does not match its passage.
std::string VerbalizeInstance(const TargetStructure &y,
                              const AnnotatedPassage *passage);

// Up to k demonstrations, preferring those sharing the most types with `y`;
// ties keep source_id order.
std::vector<SeedDemonstration> SelectDemonstrations(
    const std::vector<SeedDemonstration> &demos, const TargetStructure &y,
    size_t k);

PromptBundle BuildPassagePrompt(const TargetStructure &y,
                                const std::vector<SeedDemonstration> &demos,
                                const Ontology &ontology);

// Strips a leading "Passage:" label and surrounding whitespace from a model
// response.
std::string ExtractPassage(const std::string &response);

}  // namespace starforge

#endif  // STAR_FORGE_CORE_PROMPTS_H_
