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

// Self-refinement: audit a generated passage along fixed quality dimensions,
// turn the defects into template feedback, and ask the model for a revision
// until the passage is clean, stops improving, or the budget runs out.

#ifndef STAR_FORGE_CORE_REFINE_H_
#define STAR_FORGE_CORE_REFINE_H_

#include <map>
#include <string>
#include <vector>

#include "core/backend.h"
#include "core/checkers.h"
#include "core/ontology.h"
#include "core/structure.h"

namespace starforge {

enum class Strategy { kNoCheck, kRuleBased, kReflectEntailment, kReflectLLM };

// "none", "rule-based", "reflect-entailment", "reflect-llm".
std::string StrategyName(Strategy strategy);
Strategy ParseStrategy(const std::string &name);

enum class DimensionId { kEE1, kEE2, kEE3, kEE4, kEE5, kEE6, kRE1, kRE2, kRE3 };

std::string DimensionName(DimensionId id);  // "EE1" ... "RE3"
DimensionId ParseDimension(const std::string &name);

// Templates use {mention}, {trigger}, {role}, {event_type}, {subject},
// {object}, {relation} and {detail} placeholders.
struct QualityDimension {
  DimensionId id;
  std::string question_template;   // asked of the model
  std::string statement_template;  // hypothesis for the entailment checker
  std::string feedback_template;
  // Whether an affirmative answer signals a defect. True only for the
  // dimension asking about information that should be absent.
  bool flag_when_affirmed = false;
  std::vector<Strategy> checkable_by;
};

const std::vector<QualityDimension> &QualityDimensions();
const QualityDimension &Dimension(DimensionId id);

struct QualityFlag {
  DimensionId dimension;
  int event_index = 0;
  std::string target;   // role name, "Trigger", "Subject", "Object" or "Relation"
  std::string mention;  // empty for None roles
  std::string detail;

  // Identity used for deduplication and progress checks.
  std::tuple<DimensionId, int, std::string> Key() const {
    return {dimension, event_index, target};
  }
  bool operator==(const QualityFlag &) const = default;
};

ojson ToJson(const QualityFlag &flag);
QualityFlag QualityFlagFromJson(const ojson &j);

// Fields available to template expansion.
struct QuestionFields {
  std::string event_type;
  std::string trigger;
  std::string role;
  std::string mention;
  std::string subject;
  std::string object;
  std::string relation;
  std::string detail;
};

// Throws Error(kMissingField) when the template needs an empty field.
std::string FillTemplate(const std::string &tmpl, const QuestionFields &fields);

std::string BuildReflectionQuestion(DimensionId dim, const QuestionFields &fields);

// Question message sent to the model for one reflection query.
std::string BuildReflectionPrompt(const std::string &passage,
                                  const std::string &question);

// True iff `checker` reads `answer` as affirmative.
bool StandardizeResponse(const std::string &answer, AnswerStandardizer &checker);

// Expansion fields of `flag` against the structure it refers to.
QuestionFields FieldsOf(const QualityFlag &flag, const TargetStructure &y);

// One sentence per flag, ordered by (event_index, dimension), joined by
// newlines.
std::string RenderFeedback(const std::vector<QualityFlag> &flags,
                           const TargetStructure &y);

struct RefineContext {
  Strategy strategy = Strategy::kNoCheck;
  ChatBackend *backend = nullptr;
  ModelSettings settings;
  const Checkers *checkers = nullptr;
  const Ontology *ontology = nullptr;
  int max_iterations = 3;
};

// Deduplicated flags for passage `x` against `y`. Throws
// Error(kCheckerUnavailable) when the strategy needs a missing checker.
std::vector<QualityFlag> IdentifyErrors(const TargetStructure &y,
                                        const AnnotatedPassage &x,
                                        const RefineContext &ctx);

enum class StopReason { kClean, kMaxIterations, kNoProgress };
std::string StopReasonName(StopReason reason);
StopReason ParseStopReason(const std::string &name);

struct RefinementTrace {
  std::vector<AnnotatedPassage> versions;
  std::vector<std::vector<QualityFlag>> flags_per_iteration;
  StopReason stop_reason = StopReason::kClean;
  int t = 0;

  const AnnotatedPassage &final_version() const { return versions.back(); }
  const std::vector<QualityFlag> &remaining() const {
    return flags_per_iteration.back();
  }
};

// Messages of a revision request.
std::vector<ChatMessage> BuildRevisionMessages(const std::string &generation_prompt,
                                               const std::string &previous_tagged,
                                               const std::string &feedback);

// Runs the refinement loop from `x0`. `trace` is filled as the loop proceeds,
// so it holds the partial history if a backend error escapes.
void Refine(const TargetStructure &y, const AnnotatedPassage &x0,
            const std::string &generation_prompt, const RefineContext &ctx,
            RefinementTrace &trace);

}  // namespace starforge

#endif  // STAR_FORGE_CORE_REFINE_H_
