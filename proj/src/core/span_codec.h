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

// Tag-wrapped span codec.
//
// Encoded form wraps every span in a flat XML-like tag pair named after its
// label: <Trigger>sue</Trigger>, <Plaintiff>He</Plaintiff>. When a passage
// carries more than one event the tags get a 1-based event suffix
// (<Trigger2>). Tag names match [A-Za-z][A-Za-z0-9_.-]* and never nest.
//
// Decoding is a single left-to-right scan that never fails: everything
// unexpected is reported as an issue and the passage is recovered best-effort.

#ifndef STAR_FORGE_CORE_SPAN_CODEC_H_
#define STAR_FORGE_CORE_SPAN_CODEC_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/ontology.h"
#include "core/structure.h"

namespace starforge {

enum class DecodeIssueKind {
  kUnclosedTag,
  kUnknownLabel,
  kNestedTag,
  kDuplicateRole,
  kUnassignedArgument,
};

std::string_view DecodeIssueName(DecodeIssueKind kind);

struct DecodeIssue {
  DecodeIssueKind kind;
  size_t location = 0;  // scalar offset into the tagged input
  std::string detail;
};

struct DecodeReport {
  AnnotatedPassage passage;
  std::vector<DecodeIssue> issues;
  // Non-fatal observations: ambiguous mention occurrences, mentions that
  // differ from the expected structure, untagged mentions located by search.
  std::vector<std::string> notes;
};

// Throws Error(kOverlap) when spans overlap and Error(kInvalidArgument) when
// a span is out of bounds or empty.
std::string Encode(const AnnotatedPassage &passage);

DecodeReport Decode(std::string_view tagged, const TargetStructure &expected,
                    const Ontology &ontology);

// First case-sensitive occurrence of `mention` in `passage`, in scalar
// offsets. Empty mentions never match.
std::optional<std::pair<size_t, size_t>> FindSubsequence(
    std::string_view mention, std::string_view passage);

// Number of non-overlapping occurrences of `mention` in `passage`.
size_t CountOccurrences(std::string_view mention, std::string_view passage);

// Text covered by [start, end) of a UTF-8 passage.
std::string SpanText(std::string_view passage, size_t start, size_t end);

}  // namespace starforge

#endif  // STAR_FORGE_CORE_SPAN_CODEC_H_
