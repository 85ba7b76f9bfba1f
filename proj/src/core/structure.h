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

// Target structures (the Y side of a generated instance) and character-offset
// span annotations (the X side).

#ifndef STAR_FORGE_CORE_STRUCTURE_H_
#define STAR_FORGE_CORE_STRUCTURE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace starforge {

using ojson = nlohmann::ordered_json;

enum class Task { kEvent, kRelation };

std::string_view TaskName(Task task);  // "EE" / "RE"
Task ParseTask(std::string_view name);

// Role labels used for relation instances.
inline constexpr std::string_view kSubjectRole = "Subject";
inline constexpr std::string_view kObjectRole = "Object";

struct RoleValue {
  std::string role;
  std::optional<std::string> mention;  // nullopt = hallucinated (None)

  bool operator==(const RoleValue &) const = default;
};

// One event of a target structure. `args` holds an entry for every role of
// the event type, in ontology order.
struct EventSpec {
  std::string event_type;
  std::string trigger;
  std::vector<RoleValue> args;

  const RoleValue *FindArg(std::string_view role) const;
  size_t NoneCount() const;

  bool operator==(const EventSpec &) const = default;
};

struct RelationSpec {
  std::string subject;
  std::string object;
  std::string relation;

  bool operator==(const RelationSpec &) const = default;
};

struct TargetStructure {
  Task task = Task::kEvent;
  std::vector<EventSpec> events;  // EE only
  RelationSpec relation;          // RE only

  // Event or relation type names in first-appearance order, deduplicated.
  std::vector<std::string> DistinctTypes() const;

  bool operator==(const TargetStructure &) const = default;
};

struct SpanLabel {
  bool is_trigger = true;
  std::string role;  // empty for triggers

  static SpanLabel Trigger() { return {true, {}}; }
  static SpanLabel Role(std::string role) { return {false, std::move(role)}; }

  // "Trigger" or the role name.
  std::string Name() const;

  bool operator==(const SpanLabel &) const = default;
  auto operator<=>(const SpanLabel &) const = default;
};

// [start, end) in Unicode scalar values of the plain passage.
struct Span {
  size_t start = 0;
  size_t end = 0;
  SpanLabel label;
  int event_index = 0;

  bool operator==(const Span &) const = default;
  bool operator<(const Span &other) const;
};

struct AnnotatedPassage {
  std::string text;
  std::vector<Span> spans;

  bool operator==(const AnnotatedPassage &) const = default;
};

ojson ToJson(const TargetStructure &y);
TargetStructure TargetStructureFromJson(const ojson &j, Task task);

ojson ToJson(const Span &span);
Span SpanFromJson(const ojson &j);

}  // namespace starforge

#endif  // STAR_FORGE_CORE_STRUCTURE_H_
