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

// The label space of a generation run: entity types, event types with their
// argument roles, and relation types. Loaded once from a JSON document and
// immutable afterwards, so a single instance can be shared by all workers.

#ifndef STAR_FORGE_CORE_ONTOLOGY_H_
#define STAR_FORGE_CORE_ONTOLOGY_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace starforge {

struct ArgumentRoleSpec {
  std::string role;
  std::string definition;
  std::vector<std::string> allowed_entity_types;

  bool Allows(std::string_view entity_type) const;
};

struct EventTypeSpec {
  std::string name;
  std::string definition;
  // Document order; fixes prompt rendering order and sampling tie-breaks.
  std::vector<ArgumentRoleSpec> roles;

  const ArgumentRoleSpec *FindRole(std::string_view role) const;
};

struct RelationTypeSpec {
  std::string name;
  std::string definition;
  // Empty means unconstrained.
  std::vector<std::string> subject_types;
  std::vector<std::string> object_types;
};

// Tag name used by the span codec for a role: the role name without spaces.
std::string RoleTagName(std::string_view role);

class Ontology {
 public:
  Ontology() = default;

  // Parses and validates an ontology document. Throws Error(kParse) on
  // malformed JSON and Error(kValidation) naming the offending entry path.
  static Ontology Parse(std::string_view document);
  static Ontology LoadFile(const std::string &path);

  const std::vector<std::string> &entity_types() const { return entity_types_; }
  const std::vector<EventTypeSpec> &event_types() const { return event_types_; }
  const std::vector<RelationTypeSpec> &relation_types() const {
    return relation_types_;
  }

  bool HasEntityType(std::string_view name) const;

  // Throws Error(kUnknownEventType).
  const EventTypeSpec &EventType(std::string_view name) const;
  const EventTypeSpec *FindEventType(std::string_view name) const;
  const RelationTypeSpec &RelationType(std::string_view name) const;
  const RelationTypeSpec *FindRelationType(std::string_view name) const;

  // Full role list of an event type in document order.
  const std::vector<ArgumentRoleSpec> &RolesOf(std::string_view name) const;

 private:
  std::vector<std::string> entity_types_;
  std::vector<EventTypeSpec> event_types_;
  std::vector<RelationTypeSpec> relation_types_;
  std::map<std::string, size_t, std::less<>> event_index_;
  std::map<std::string, size_t, std::less<>> relation_index_;
};

}  // namespace starforge

#endif  // STAR_FORGE_CORE_ONTOLOGY_H_
