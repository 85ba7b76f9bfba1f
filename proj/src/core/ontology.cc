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

#include "core/ontology.h"

#include <algorithm>
#include <set>

#include "core/error.h"
#include "core/io.h"
#include "core/text.h"
#include "json.hpp"

namespace starforge {

using json = nlohmann::json;

namespace {

[[noreturn]] void Invalid(const std::string &path, const std::string &what) {
  Fail(ErrorCode::kValidation, path + ": " + what);
}

std::string RequireString(const json &obj, const char *key,
                          const std::string &path, bool allow_empty = false) {
  if (!obj.is_object() || !obj.contains(key)) {
    Invalid(path, std::string("missing field '") + key + "'");
  }
  const json &v = obj.at(key);
  if (!v.is_string()) Invalid(path + "." + key, "expected a string");
  std::string s = v.get<std::string>();
  if (!allow_empty && Trim(s).empty()) Invalid(path + "." + key, "empty");
  return s;
}

const json &RequireArray(const json &obj, const char *key,
                         const std::string &path) {
  if (!obj.is_object() || !obj.contains(key)) {
    Invalid(path, std::string("missing field '") + key + "'");
  }
  const json &v = obj.at(key);
  if (!v.is_array()) Invalid(path + "." + key, "expected an array");
  return v;
}

std::vector<std::string> StringList(const json &arr, const std::string &path) {
  std::vector<std::string> out;
  for (size_t i = 0; i < arr.size(); ++i) {
    std::string p = path + "[" + std::to_string(i) + "]";
    if (!arr[i].is_string()) Invalid(p, "expected a string");
    std::string s = arr[i].get<std::string>();
    if (Trim(s).empty()) Invalid(p, "empty");
    out.push_back(std::move(s));
  }
  return out;
}

// Tag names: a letter, then letters, digits, '-', '_' or '.', and never a
// trailing digit (the codec reserves trailing digits for event suffixes).
bool IsValidTagName(std::string_view tag) {
  if (tag.empty()) return false;
  auto alpha = [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
  };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(tag.front()) || digit(tag.back())) return false;
  return std::all_of(tag.begin(), tag.end(), [&](char c) {
    return alpha(c) || digit(c) || c == '-' || c == '_' || c == '.';
  });
}

}  // namespace

bool ArgumentRoleSpec::Allows(std::string_view entity_type) const {
  return std::find(allowed_entity_types.begin(), allowed_entity_types.end(),
                   entity_type) != allowed_entity_types.end();
}

const ArgumentRoleSpec *EventTypeSpec::FindRole(std::string_view name) const {
  for (const auto &r : roles) {
    if (r.role == name) return &r;
  }
  return nullptr;
}

std::string RoleTagName(std::string_view role) {
  std::string out;
  for (char c : role) {
    if (c != ' ' && c != '\t') out.push_back(c);
  }
  return out;
}

Ontology Ontology::Parse(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error &e) {
    Fail(ErrorCode::kParse, std::string("ontology: ") + e.what());
  }
  if (!doc.is_object()) Fail(ErrorCode::kParse, "ontology: expected an object");

  Ontology ont;
  const json &entity_types = RequireArray(doc, "entity_types", "$");
  ont.entity_types_ = StringList(entity_types, "$.entity_types");
  std::set<std::string, std::less<>> entity_set;
  for (size_t i = 0; i < ont.entity_types_.size(); ++i) {
    if (!entity_set.insert(ont.entity_types_[i]).second) {
      Invalid("$.entity_types[" + std::to_string(i) + "]",
              "duplicate entity type '" + ont.entity_types_[i] + "'");
    }
  }

  auto check_entity_refs = [&](const std::vector<std::string> &refs,
                               const std::string &path) {
    for (size_t i = 0; i < refs.size(); ++i) {
      if (!entity_set.count(refs[i])) {
        Invalid(path + "[" + std::to_string(i) + "]",
                "unknown entity type '" + refs[i] + "'");
      }
    }
  };

  if (doc.contains("event_types")) {
    const json &events = RequireArray(doc, "event_types", "$");
    for (size_t i = 0; i < events.size(); ++i) {
      const std::string path = "$.event_types[" + std::to_string(i) + "]";
      const json &e = events[i];
      if (!e.is_object()) Invalid(path, "expected an object");
      EventTypeSpec spec;
      spec.name = RequireString(e, "name", path);
      spec.definition = RequireString(e, "definition", path);
      if (ont.event_index_.count(spec.name)) {
        Invalid(path + ".name", "duplicate event type '" + spec.name + "'");
      }
      const json &roles = RequireArray(e, "roles", path);
      std::set<std::string> role_tags;
      for (size_t j = 0; j < roles.size(); ++j) {
        const std::string rpath = path + ".roles[" + std::to_string(j) + "]";
        const json &r = roles[j];
        if (!r.is_object()) Invalid(rpath, "expected an object");
        ArgumentRoleSpec role;
        role.role = RequireString(r, "role", rpath);
        role.definition = RequireString(r, "definition", rpath);
        const json &allowed = RequireArray(r, "allowed_entity_types", rpath);
        role.allowed_entity_types =
            StringList(allowed, rpath + ".allowed_entity_types");
        if (role.allowed_entity_types.empty()) {
          Invalid(rpath + ".allowed_entity_types",
                  "at least one entity type is required");
        }
        check_entity_refs(role.allowed_entity_types,
                          rpath + ".allowed_entity_types");
        const std::string tag = RoleTagName(role.role);
        if (!IsValidTagName(tag)) {
          Invalid(rpath + ".role", "'" + role.role +
                                       "' cannot be used as a tag name");
        }
        if (tag == "Trigger") {
          Invalid(rpath + ".role", "'Trigger' is reserved");
        }
        if (!role_tags.insert(tag).second) {
          Invalid(rpath + ".role", "duplicate role '" + role.role + "'");
        }
        spec.roles.push_back(std::move(role));
      }
      ont.event_index_.emplace(spec.name, ont.event_types_.size());
      ont.event_types_.push_back(std::move(spec));
    }
  }

  if (doc.contains("relation_types")) {
    const json &relations = RequireArray(doc, "relation_types", "$");
    for (size_t i = 0; i < relations.size(); ++i) {
      const std::string path = "$.relation_types[" + std::to_string(i) + "]";
      const json &r = relations[i];
      if (!r.is_object()) Invalid(path, "expected an object");
      RelationTypeSpec spec;
      spec.name = RequireString(r, "name", path);
      spec.definition = RequireString(r, "definition", path);
      if (ont.relation_index_.count(spec.name)) {
        Invalid(path + ".name", "duplicate relation type '" + spec.name + "'");
      }
      for (const char *key : {"subject_types", "object_types"}) {
        if (!r.contains(key)) continue;
        const json &arr = RequireArray(r, key, path);
        auto list = StringList(arr, path + "." + key);
        check_entity_refs(list, path + "." + key);
        (std::string_view(key) == "subject_types" ? spec.subject_types
                                                   : spec.object_types) =
            std::move(list);
      }
      ont.relation_index_.emplace(spec.name, ont.relation_types_.size());
      ont.relation_types_.push_back(std::move(spec));
    }
  }
  return ont;
}

Ontology Ontology::LoadFile(const std::string &path) {
  return Parse(ReadFile(path));
}

bool Ontology::HasEntityType(std::string_view name) const {
  return std::find(entity_types_.begin(), entity_types_.end(), name) !=
         entity_types_.end();
}

const EventTypeSpec *Ontology::FindEventType(std::string_view name) const {
  auto it = event_index_.find(name);
  return it == event_index_.end() ? nullptr : &event_types_[it->second];
}

const EventTypeSpec &Ontology::EventType(std::string_view name) const {
  const EventTypeSpec *spec = FindEventType(name);
  if (spec == nullptr) {
    Fail(ErrorCode::kUnknownEventType,
         "unknown event type '" + std::string(name) + "'");
  }
  return *spec;
}

const RelationTypeSpec *Ontology::FindRelationType(
    std::string_view name) const {
  auto it = relation_index_.find(name);
  return it == relation_index_.end() ? nullptr : &relation_types_[it->second];
}

const RelationTypeSpec &Ontology::RelationType(std::string_view name) const {
  const RelationTypeSpec *spec = FindRelationType(name);
  if (spec == nullptr) {
    Fail(ErrorCode::kUnknownEventType,
         "unknown relation type '" + std::string(name) + "'");
  }
  return *spec;
}

const std::vector<ArgumentRoleSpec> &Ontology::RolesOf(
    std::string_view name) const {
  return EventType(name).roles;
}

}  // namespace starforge
