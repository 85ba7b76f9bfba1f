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

#include "core/pools.h"

#include <algorithm>
#include <fstream>

#include "core/error.h"
#include "core/io.h"
#include "core/span_codec.h"
#include "core/text.h"

namespace starforge {

PoolKey PoolKey::Trigger(std::string event_type) {
  PoolKey k;
  k.kind = Kind::kTrigger;
  k.event_type = std::move(event_type);
  return k;
}

PoolKey PoolKey::Argument(std::string event_type, std::string role) {
  PoolKey k;
  k.kind = Kind::kArgument;
  k.event_type = std::move(event_type);
  k.role = std::move(role);
  return k;
}

PoolKey PoolKey::Entity(std::string entity_type) {
  PoolKey k;
  k.kind = Kind::kEntity;
  k.entity_type = std::move(entity_type);
  return k;
}

std::string PoolKey::ToString() const {
  switch (kind) {
    case Kind::kTrigger: return "Trigger(" + event_type + ")";
    case Kind::kArgument: return "Argument(" + event_type + ", " + role + ")";
    case Kind::kEntity: return "Entity(" + entity_type + ")";
  }
  return {};
}

ojson PoolKey::ToJson() const {
  switch (kind) {
    case Kind::kTrigger:
      return {{"kind", "trigger"}, {"event_type", event_type}};
    case Kind::kArgument:
      return {{"kind", "argument"}, {"event_type", event_type}, {"role", role}};
    case Kind::kEntity:
      return {{"kind", "entity"}, {"entity_type", entity_type}};
  }
  return {};
}

PoolKey PoolKey::FromJson(const ojson &j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "trigger") return Trigger(j.at("event_type").get<std::string>());
    if (kind == "argument") {
      return Argument(j.at("event_type").get<std::string>(),
                      j.at("role").get<std::string>());
    }
    if (kind == "entity") return Entity(j.at("entity_type").get<std::string>());
    Fail(ErrorCode::kParse, "unknown pool kind '" + kind + "'");
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kParse, std::string("pool key: ") + e.what());
  }
}

void PoolKey::Validate(const Ontology &ontology) const {
  if (kind == Kind::kEntity) {
    if (!ontology.HasEntityType(entity_type)) {
      Fail(ErrorCode::kValidation, ToString() + ": unknown entity type");
    }
    return;
  }
  const EventTypeSpec *type = ontology.FindEventType(event_type);
  if (type == nullptr) {
    Fail(ErrorCode::kValidation, ToString() + ": unknown event type");
  }
  if (kind == Kind::kArgument && type->FindRole(role) == nullptr) {
    Fail(ErrorCode::kValidation, ToString() + ": unknown role");
  }
}

CandidatePool::CandidatePool(PoolKey key, size_t target_size)
    : key_(std::move(key)), target_size_(target_size) {}

bool CandidatePool::Add(const std::string &mention, size_t hard_cap) {
  std::string surface = Trim(mention);
  if (surface.empty() || candidates_.size() >= hard_cap) return false;
  if (!normalized_.insert(NormalizeMention(surface)).second) return false;
  candidates_.push_back(std::move(surface));
  return true;
}

bool CandidatePool::Contains(const std::string &mention) const {
  return normalized_.count(NormalizeMention(mention)) > 0;
}

ojson CandidatePool::ToJson() const {
  ojson prov = ojson::array();
  for (const auto &p : provenance_) {
    prov.push_back({{"request_hash", p.request_hash},
                    {"response_id", p.response_id}});
  }
  return {{"key", key_.ToJson()},
          {"candidates", candidates_},
          {"provenance", std::move(prov)},
          {"target_size", target_size_},
          {"complete", complete_}};
}

CandidatePool CandidatePool::FromJson(const ojson &j) {
  try {
    CandidatePool pool(PoolKey::FromJson(j.at("key")),
                       j.value("target_size", size_t{1}));
    for (const auto &c : j.at("candidates")) pool.Add(c.get<std::string>());
    for (const auto &p : j.value("provenance", ojson::array())) {
      pool.AddProvenance({p.at("request_hash").get<std::string>(),
                          p.at("response_id").get<std::string>()});
    }
    pool.set_complete(j.value("complete", false));
    return pool;
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kParse, std::string("pool: ") + e.what());
  }
}

void PoolSet::Put(CandidatePool pool) {
  PoolKey key = pool.key();
  pools_.insert_or_assign(std::move(key), std::move(pool));
}

const CandidatePool *PoolSet::Find(const PoolKey &key) const {
  auto it = pools_.find(key);
  return it == pools_.end() ? nullptr : &it->second;
}

const CandidatePool &PoolSet::Require(const PoolKey &key) const {
  const CandidatePool *pool = Find(key);
  if (pool == nullptr || pool->empty()) {
    Fail(ErrorCode::kMissingPool, "missing or empty pool " + key.ToString());
  }
  return *pool;
}

PoolSet PoolSet::LoadJsonl(const std::string &path) {
  PoolSet set;
  size_t line_no = 0;
  for (const std::string &line : ReadNonEmptyLines(path)) {
    ++line_no;
    try {
      set.Put(CandidatePool::FromJson(ojson::parse(line)));
    } catch (const nlohmann::json::parse_error &e) {
      Fail(ErrorCode::kParse,
           path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return set;
}

void PoolSet::SaveJsonl(const std::string &path) const {
  std::string out;
  for (const auto &[key, pool] : pools_) {
    out += pool.ToJson().dump();
    out += '\n';
  }
  WriteFile(path, out);
}

std::string BuildTriggerPrompt(const EventTypeSpec &event_type,
                               const std::vector<SeedDemonstration> &demos) {
  std::string out = "Event type: " + event_type.name + "\n" +
                    "Definition: " + event_type.definition + "\n";
  if (!demos.empty()) {
    out += "\nHere are passages that describe a " + event_type.name +
           " event. The trigger word of the event is wrapped in "
           "<Trigger></Trigger> tags.\n";
    for (const auto &demo : demos) {
      AnnotatedPassage only_triggers{demo.passage, {}};
      for (const Span &s : demo.spans) {
        if (s.label.is_trigger &&
            demo.structure.events[s.event_index].event_type == event_type.name) {
          only_triggers.spans.push_back({s.start, s.end, s.label, 0});
        }
      }
      out += Encode(only_triggers) + "\n";
    }
  }
  out += "\nContinue writing more passages that describe " + event_type.name +
         " events, one passage per line. Wrap the trigger word of each "
         "passage in <Trigger></Trigger> tags and use a different trigger "
         "word in every passage.";
  return out;
}

TriggerParse ParseTriggerCandidates(const std::string &response) {
  static constexpr std::string_view kOpen = "<Trigger>";
  static constexpr std::string_view kClose = "</Trigger>";
  TriggerParse out;
  size_t pos = 0;
  for (;;) {
    const size_t open = response.find(kOpen, pos);
    const size_t stray = response.find(kClose, pos);
    if (stray != std::string::npos && (open == std::string::npos || stray < open)) {
      out.warnings.push_back("closing tag without opening tag at byte " +
                             std::to_string(stray));
      pos = stray + kClose.size();
      continue;
    }
    if (open == std::string::npos) break;
    const size_t body = open + kOpen.size();
    const size_t close = response.find(kClose, body);
    const size_t next_open = response.find(kOpen, body);
    if (close == std::string::npos ||
        (next_open != std::string::npos && next_open < close)) {
      out.warnings.push_back("unclosed <Trigger> tag at byte " +
                             std::to_string(open));
      if (close == std::string::npos && next_open == std::string::npos) break;
      pos = next_open != std::string::npos ? next_open : close;
      continue;
    }
    std::string candidate = Trim(response.substr(body, close - body));
    if (candidate.empty()) {
      out.warnings.push_back("empty <Trigger> tag at byte " +
                             std::to_string(open));
    } else {
      out.candidates.push_back(std::move(candidate));
    }
    pos = close + kClose.size();
  }
  return out;
}

std::string BuildArgumentPrompt(const EventTypeSpec &event_type,
                                const ArgumentRoleSpec &role,
                                const std::string &entity_type) {
  if (!role.Allows(entity_type)) {
    Fail(ErrorCode::kDisallowedEntityType,
         "entity type '" + entity_type + "' is not allowed for " +
             event_type.name + "/" + role.role);
  }
  return "Given the definition of " + role.role + " argument as '" +
         role.definition + "', what are some possible " + entity_type +
         " names that can be used as " + role.role + "?\n" + "The " +
         role.role + " argument belongs to the " + event_type.name +
         " event type. Answer with a numbered list, one name per line.";
}

namespace {

// Length in bytes of a list marker at the start of `line`, or 0.
size_t ListMarkerLength(std::string_view line) {
  size_t i = 0;
  while (i < line.size() && line[i] >= '0' && line[i] <= '9') ++i;
  if (i > 0) {
    if (i < line.size() && (line[i] == '.' || line[i] == ')')) return i + 1;
    return 0;
  }
  if (StartsWith(line, "-") || StartsWith(line, "*")) return 1;
  if (StartsWith(line, "•")) return std::string_view("•").size();
  return 0;
}

std::string StripDecorations(std::string item) {
  static const std::vector<std::string> kQuotes = {
      "\"", "'", "`", "“", "”", "‘", "’"};
  static constexpr std::string_view kTrailing = ".,;:!";
  bool changed = true;
  while (changed && !item.empty()) {
    changed = false;
    item = Trim(item);
    while (!item.empty() && kTrailing.find(item.back()) != std::string_view::npos) {
      item.pop_back();
      changed = true;
    }
    for (const auto &q : kQuotes) {
      if (item.size() >= q.size() && item.compare(0, q.size(), q) == 0) {
        item.erase(0, q.size());
        changed = true;
      }
      if (item.size() >= q.size() &&
          item.compare(item.size() - q.size(), q.size(), q) == 0) {
        item.erase(item.size() - q.size());
        changed = true;
      }
    }
  }
  return Trim(item);
}

}  // namespace

std::vector<std::string> ParseListResponse(const std::string &response) {
  std::vector<std::string> out;
  for (const std::string &raw : SplitLines(response)) {
    const std::string line = Trim(raw);
    const size_t marker = ListMarkerLength(line);
    if (marker == 0 || marker >= line.size()) continue;
    // A marker must be followed by whitespace ("1. x", "- x").
    if (line[marker] != ' ' && line[marker] != '\t') continue;
    std::string item = StripDecorations(line.substr(marker));
    if (!item.empty()) out.push_back(std::move(item));
  }
  return out;
}

std::vector<std::string> SeedEntitiesOfType(
    const std::vector<SeedDemonstration> &seeds,
    const std::string &entity_type) {
  std::vector<std::string> typed, all;
  auto push_unique = [](std::vector<std::string> &v, const std::string &s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  for (const auto &s : seeds) {
    const auto &rel = s.structure.relation;
    if (s.subject_type == entity_type) push_unique(typed, rel.subject);
    if (s.object_type == entity_type) push_unique(typed, rel.object);
    if (s.subject_type.empty()) push_unique(all, rel.subject);
    if (s.object_type.empty()) push_unique(all, rel.object);
  }
  return typed.empty() ? all : typed;
}

std::string BuildEntityPrompt(const std::string &entity_type,
                              const std::vector<std::string> &examples) {
  std::string out;
  if (!examples.empty()) {
    out += "Here are some examples of " + entity_type +
           " entity names: " + Join(examples, ", ") + ".\n";
    out += "What are some other possible " + entity_type + " entity names?";
  } else {
    out += "What are some possible " + entity_type + " entity names?";
  }
  out += " Answer with a numbered list, one name per line.";
  return out;
}

CandidatePool MergePools(const std::vector<CandidatePool> &pools) {
  if (pools.empty()) {
    Fail(ErrorCode::kInvalidArgument, "nothing to merge");
  }
  CandidatePool merged(pools.front().key(), 0);
  for (const auto &p : pools) {
    if (!(p.key() == merged.key())) {
      Fail(ErrorCode::kKeyMismatch, "cannot merge " + p.key().ToString() +
                                        " into " + merged.key().ToString());
    }
    merged.set_target_size(std::max(merged.target_size(), p.target_size()));
    for (const auto &c : p.candidates()) merged.Add(c);
    for (const auto &prov : p.provenance()) merged.AddProvenance(prov);
  }
  merged.set_complete(merged.size() >= merged.target_size());
  return merged;
}

CandidatePool FillPool(const PoolKey &key, size_t target_size,
                       ChatBackend &backend,
                       const std::vector<SeedDemonstration> &demos,
                       const Ontology &ontology,
                       const PoolFillOptions &options) {
  if (target_size == 0) {
    Fail(ErrorCode::kInvalidArgument, "target_size must be at least 1");
  }
  key.Validate(ontology);

  // One prompt per query slot; argument pools rotate over allowed entity
  // types and keep a sub-pool per type that is merged at the end.
  std::vector<std::string> prompts;
  bool list_response = true;
  switch (key.kind) {
    case PoolKey::Kind::kTrigger:
      prompts.push_back(BuildTriggerPrompt(ontology.EventType(key.event_type),
                                           SeedsOfType(demos, key.event_type)));
      list_response = false;
      break;
    case PoolKey::Kind::kArgument: {
      const EventTypeSpec &type = ontology.EventType(key.event_type);
      const ArgumentRoleSpec &role = *type.FindRole(key.role);
      for (const auto &entity : role.allowed_entity_types) {
        prompts.push_back(BuildArgumentPrompt(type, role, entity));
      }
      break;
    }
    case PoolKey::Kind::kEntity:
      prompts.push_back(BuildEntityPrompt(
          key.entity_type, SeedEntitiesOfType(demos, key.entity_type)));
      break;
  }

  std::vector<CandidatePool> parts(prompts.size(),
                                   CandidatePool(key, target_size));
  CandidatePool merged(key, target_size);
  for (size_t q = 0; q < options.max_queries; ++q) {
    if (merged.size() >= target_size) break;
    const size_t slot = q % prompts.size();
    ChatRequest request = options.model.Generation({{"user", prompts[slot]}});
    ChatResponse response = backend.Complete(request);
    parts[slot].AddProvenance({request.Hash(), response.response_id});
    std::vector<std::string> found =
        list_response ? ParseListResponse(response.text)
                      : ParseTriggerCandidates(response.text).candidates;
    for (const auto &c : found) parts[slot].Add(c, options.hard_cap);
    merged = MergePools(parts);
  }

  CandidatePool result(key, target_size);
  for (const auto &c : merged.candidates()) result.Add(c, options.hard_cap);
  for (const auto &p : merged.provenance()) result.AddProvenance(p);
  result.set_complete(result.size() >= target_size);
  return result;
}

CandidatePool GenerateEntityCandidates(
    const std::string &entity_type, const std::vector<SeedDemonstration> &seeds,
    ChatBackend &backend, const Ontology &ontology, size_t target_size,
    const PoolFillOptions &options) {
  return FillPool(PoolKey::Entity(entity_type), target_size, backend, seeds,
                  ontology, options);
}

std::vector<PoolKey> RequiredPoolKeys(const Ontology &ontology, Task task) {
  std::vector<PoolKey> keys;
  if (task == Task::kRelation) {
    for (const auto &e : ontology.entity_types()) keys.push_back(PoolKey::Entity(e));
    return keys;
  }
  for (const auto &type : ontology.event_types()) {
    keys.push_back(PoolKey::Trigger(type.name));
    for (const auto &role : type.roles) {
      keys.push_back(PoolKey::Argument(type.name, role.role));
    }
  }
  return keys;
}

}  // namespace starforge
