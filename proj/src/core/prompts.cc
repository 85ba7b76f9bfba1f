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

#include "core/prompts.h"

#include <algorithm>
#include <set>

#include "core/digest.h"
#include "core/error.h"
#include "core/span_codec.h"
#include "core/text.h"

namespace starforge {

PromptBundle PromptBundle::Assemble(std::vector<PromptSegment> segments) {
  PromptBundle b;
  b.segments = std::move(segments);
  std::vector<std::string> texts;
  for (const auto &s : b.segments) texts.push_back(s.text);
  b.rendered = Join(texts, "\n\n");
  b.content_hash = Sha256Hex(b.rendered);
  return b;
}

std::string RenderTaskInstruction(Task task) {
  if (task == Task::kRelation) {
    return "Definitions: A relation is a semantic connection between two "
           "entities mentioned in a passage. The subject is the entity the "
           "relation is about, and the object is the entity that the relation "
           "connects the subject to.\n"
           "Requirement: Your goal is to generate a passage that contains the "
           "given subject and object mentions and expresses the given relation "
           "between them. Wrap the subject mention in <Subject></Subject> tags "
           "and the object mention in <Object></Object> tags.\n"
           "Scope: Express only the given relation between the two entities, "
           "and use each mention exactly as it is given.";
  }
  return "Definitions: An event is a specific occurrence of something that "
         "happens, often a change of state, involving participants. The "
         "trigger of an event is the word or phrase that most clearly "
         "expresses its occurrence. Participant arguments are the entities "
         "that take part in the event. Attribute arguments describe "
         "attributes of the event, such as its place or time.\n"
         "Requirement: Your goal is to generate a passage that contains the "
         "given event trigger words and argument mentions, with every mention "
         "serving the role given in the event structure. Wrap each trigger in "
         "<Trigger></Trigger> tags and each argument mention in tags named "
         "after its role, such as <Place></Place>. When there is more than one "
         "event, append the event number to the tag names, such as "
         "<Trigger2></Trigger2>.\n"
         "Hallucination: If an argument is given as None, do not generate any "
         "information that could serve as that argument role.\n"
         "Multiple events: If more than one event is given, the information "
         "of all events must be contained in a single passage.";
}

std::string RenderTypeInstruction(const EventTypeSpec &spec) {
  std::string out = "Event type: " + spec.name + "\nDefinition: " + spec.definition;
  if (!spec.roles.empty()) {
    out += "\nArgument roles:";
    for (const auto &r : spec.roles) out += "\n- " + r.role + ": " + r.definition;
  }
  return out;
}

std::string RenderTypeInstruction(const RelationTypeSpec &spec) {
  return "Relation type: " + spec.name + "\nDefinition: " + spec.definition;
}

namespace {

void CheckSpans(const TargetStructure &y, const AnnotatedPassage &passage) {
  const size_t len = CodepointLength(passage.text);
  for (const Span &s : passage.spans) {
    if (s.start >= s.end || s.end > len) {
      Fail(ErrorCode::kSpanMismatch,
           s.label.Name() + " span is outside the passage");
    }
    std::string expected;
    if (y.task == Task::kRelation) {
      expected = s.label.role == kSubjectRole ? y.relation.subject
                                              : y.relation.object;
    } else {
      if (s.event_index < 0 ||
          static_cast<size_t>(s.event_index) >= y.events.size()) {
        Fail(ErrorCode::kSpanMismatch, "span refers to a missing event");
      }
      const EventSpec &e = y.events[s.event_index];
      if (s.label.is_trigger) {
        expected = e.trigger;
      } else {
        const RoleValue *rv = e.FindArg(s.label.role);
        if (rv == nullptr || !rv->mention) {
          Fail(ErrorCode::kSpanMismatch,
               s.label.Name() + " span has no value in the structure");
        }
        expected = *rv->mention;
      }
    }
    const std::string got = SpanText(passage.text, s.start, s.end);
    if (got != expected) {
      Fail(ErrorCode::kSpanMismatch, s.label.Name() + " span covers '" + got +
                                         "' but the structure says '" +
                                         expected + "'");
    }
  }
}

}  // namespace

std::string VerbalizeInstance(const TargetStructure &y,
                              const AnnotatedPassage *passage) {
  if (passage != nullptr) CheckSpans(y, *passage);
  std::string out;
  if (y.task == Task::kRelation) {
    out = "Subject: " + y.relation.subject + "\nObject: " + y.relation.object +
          "\nRelation: " + y.relation.relation;
  } else {
    out = "Number of events: " + std::to_string(y.events.size());
    for (size_t i = 0; i < y.events.size(); ++i) {
      const EventSpec &e = y.events[i];
      out += "\nEvent " + std::to_string(i + 1) + ": type=" + e.event_type +
             ", trigger=" + e.trigger;
      for (const auto &a : e.args) {
        out += ", " + a.role + "=" + (a.mention ? *a.mention : "None");
      }
    }
  }
  out += "\nPassage:";
  if (passage != nullptr) out += " " + Encode(*passage);
  return out;
}

std::vector<SeedDemonstration> SelectDemonstrations(
    const std::vector<SeedDemonstration> &demos, const TargetStructure &y,
    size_t k) {
  const std::vector<std::string> wanted = y.DistinctTypes();
  std::vector<std::pair<size_t, size_t>> scored;  // (overlap, index)
  for (size_t i = 0; i < demos.size(); ++i) {
    if (demos[i].structure.task != y.task) continue;
    size_t overlap = 0;
    for (const auto &t : demos[i].structure.DistinctTypes()) {
      if (std::find(wanted.begin(), wanted.end(), t) != wanted.end()) ++overlap;
    }
    scored.emplace_back(overlap, i);
  }
  std::stable_sort(scored.begin(), scored.end(), [&](const auto &a, const auto &b) {
    if (a.first != b.first) return a.first > b.first;
    return demos[a.second].source_id < demos[b.second].source_id;
  });
  std::vector<SeedDemonstration> out;
  for (size_t i = 0; i < scored.size() && out.size() < k; ++i) {
    out.push_back(demos[scored[i].second]);
  }
  return out;
}

PromptBundle BuildPassagePrompt(const TargetStructure &y,
                                const std::vector<SeedDemonstration> &demos,
                                const Ontology &ontology) {
  std::vector<PromptSegment> segments;
  segments.push_back({SegmentKind::kTaskInstruction, RenderTaskInstruction(y.task)});
  for (const auto &type : y.DistinctTypes()) {
    segments.push_back({SegmentKind::kTypeInstruction,
                        y.task == Task::kRelation
                            ? RenderTypeInstruction(ontology.RelationType(type))
                            : RenderTypeInstruction(ontology.EventType(type))});
  }
  for (const auto &demo : demos) {
    AnnotatedPassage annotated = demo.Annotated();
    segments.push_back({SegmentKind::kDemonstration,
                        VerbalizeInstance(demo.structure, &annotated)});
  }
  segments.push_back(
      {SegmentKind::kTargetVerbalization, VerbalizeInstance(y, nullptr)});
  return PromptBundle::Assemble(std::move(segments));
}

std::string ExtractPassage(const std::string &response) {
  std::string text = Trim(response);
  if (StartsWith(text, "Passage:")) text = Trim(text.substr(8));
  return text;
}

}  // namespace starforge
