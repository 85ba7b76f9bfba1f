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

#include "core/seeds.h"

#include <algorithm>

#include "core/error.h"
#include "core/io.h"
#include "core/span_codec.h"
#include "core/text.h"

namespace starforge {

namespace {

// First occurrence of `mention` that does not overlap an already placed span.
Span Locate(const std::u32string &passage, const std::string &mention,
            SpanLabel label, int event, const std::vector<Span> &placed,
            const std::string &source_id) {
  const std::u32string m = Utf8ToCodepoints(mention);
  if (!m.empty()) {
    for (size_t pos = passage.find(m); pos != std::u32string::npos;
         pos = passage.find(m, pos + 1)) {
      const size_t end = pos + m.size();
      bool clash = std::any_of(placed.begin(), placed.end(), [&](const Span &s) {
        return pos < s.end && s.start < end;
      });
      if (!clash) return {pos, end, std::move(label), event};
    }
  }
  Fail(ErrorCode::kSpanMismatch, "seed '" + source_id + "': " + label.Name() +
                                     " '" + mention +
                                     "' is not a free subsequence of the passage");
}

}  // namespace

SeedDemonstration SeedFromJson(const ojson &j, const Ontology &ontology,
                               Task task) {
  SeedDemonstration seed;
  try {
    seed.source_id = j.at("source_id").get<std::string>();
    seed.passage = j.at("passage").get<std::string>();
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kParse, std::string("seed: ") + e.what());
  }
  const std::u32string passage = Utf8ToCodepoints(seed.passage);
  seed.structure.task = task;

  if (task == Task::kRelation) {
    try {
      seed.structure.relation.subject = j.at("subject").get<std::string>();
      seed.structure.relation.object = j.at("object").get<std::string>();
      seed.structure.relation.relation = j.at("relation").get<std::string>();
      seed.subject_type = j.value("subject_type", std::string());
      seed.object_type = j.value("object_type", std::string());
    } catch (const nlohmann::json::exception &e) {
      Fail(ErrorCode::kParse, "seed '" + seed.source_id + "': " + e.what());
    }
    if (!ontology.FindRelationType(seed.structure.relation.relation)) {
      Fail(ErrorCode::kValidation, "seed '" + seed.source_id +
                                       "': unknown relation type '" +
                                       seed.structure.relation.relation + "'");
    }
    for (const std::string *t : {&seed.subject_type, &seed.object_type}) {
      if (!t->empty() && !ontology.HasEntityType(*t)) {
        Fail(ErrorCode::kValidation, "seed '" + seed.source_id +
                                         "': unknown entity type '" + *t + "'");
      }
    }
    seed.spans.push_back(Locate(passage, seed.structure.relation.subject,
                                SpanLabel::Role(std::string(kSubjectRole)), 0,
                                seed.spans, seed.source_id));
    seed.spans.push_back(Locate(passage, seed.structure.relation.object,
                                SpanLabel::Role(std::string(kObjectRole)), 0,
                                seed.spans, seed.source_id));
    std::sort(seed.spans.begin(), seed.spans.end());
    return seed;
  }

  if (!j.contains("events") || !j.at("events").is_array()) {
    Fail(ErrorCode::kParse, "seed '" + seed.source_id + "': missing events");
  }
  for (const auto &e : j.at("events")) {
    EventSpec ev;
    try {
      ev.event_type = e.at("event_type").get<std::string>();
      ev.trigger = e.at("trigger").get<std::string>();
    } catch (const nlohmann::json::exception &ex) {
      Fail(ErrorCode::kParse, "seed '" + seed.source_id + "': " + ex.what());
    }
    const EventTypeSpec *type = ontology.FindEventType(ev.event_type);
    if (type == nullptr) {
      Fail(ErrorCode::kValidation, "seed '" + seed.source_id +
                                       "': unknown event type '" +
                                       ev.event_type + "'");
    }
    ojson args = e.value("args", ojson::object());
    for (const auto &[role, value] : args.items()) {
      if (!type->FindRole(role)) {
        Fail(ErrorCode::kValidation, "seed '" + seed.source_id + "': role '" +
                                         role + "' is not defined for " +
                                         ev.event_type);
      }
      if (!value.is_null() && !value.is_string()) {
        Fail(ErrorCode::kParse, "seed '" + seed.source_id + "': role '" + role +
                                    "' must be a string or null");
      }
    }
    for (const auto &role : type->roles) {
      RoleValue rv{role.role, std::nullopt};
      if (args.contains(role.role) && args.at(role.role).is_string()) {
        rv.mention = args.at(role.role).get<std::string>();
      }
      ev.args.push_back(std::move(rv));
    }
    seed.structure.events.push_back(std::move(ev));
  }
  for (int e = 0; e < static_cast<int>(seed.structure.events.size()); ++e) {
    const EventSpec &ev = seed.structure.events[e];
    seed.spans.push_back(Locate(passage, ev.trigger, SpanLabel::Trigger(), e,
                                seed.spans, seed.source_id));
    for (const auto &a : ev.args) {
      if (!a.mention) continue;
      seed.spans.push_back(Locate(passage, *a.mention, SpanLabel::Role(a.role),
                                  e, seed.spans, seed.source_id));
    }
  }
  std::sort(seed.spans.begin(), seed.spans.end());
  return seed;
}

std::vector<SeedDemonstration> LoadSeeds(const std::string &path,
                                         const Ontology &ontology, Task task) {
  std::vector<SeedDemonstration> seeds;
  size_t line_no = 0;
  for (const std::string &line : ReadNonEmptyLines(path)) {
    ++line_no;
    ojson j;
    try {
      j = ojson::parse(line);
    } catch (const nlohmann::json::exception &e) {
      Fail(ErrorCode::kParse,
           path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    seeds.push_back(SeedFromJson(j, ontology, task));
  }
  return seeds;
}

std::vector<SeedDemonstration> SeedsOfType(
    const std::vector<SeedDemonstration> &seeds, const std::string &event_type) {
  std::vector<SeedDemonstration> out;
  for (const auto &s : seeds) {
    for (const auto &e : s.structure.events) {
      if (e.event_type == event_type) {
        out.push_back(s);
        break;
      }
    }
  }
  return out;
}

}  // namespace starforge
