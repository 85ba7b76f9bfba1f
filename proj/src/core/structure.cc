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

#include "core/structure.h"

#include <algorithm>
#include <tuple>

#include "core/error.h"

namespace starforge {

std::string_view TaskName(Task task) {
  return task == Task::kEvent ? "EE" : "RE";
}

Task ParseTask(std::string_view name) {
  if (name == "EE" || name == "ee") return Task::kEvent;
  if (name == "RE" || name == "re") return Task::kRelation;
  Fail(ErrorCode::kConfig, "unknown task '" + std::string(name) + "'");
}

const RoleValue *EventSpec::FindArg(std::string_view role) const {
  for (const auto &a : args) {
    if (a.role == role) return &a;
  }
  return nullptr;
}

size_t EventSpec::NoneCount() const {
  return static_cast<size_t>(std::count_if(
      args.begin(), args.end(), [](const RoleValue &a) { return !a.mention; }));
}

std::vector<std::string> TargetStructure::DistinctTypes() const {
  std::vector<std::string> out;
  if (task == Task::kRelation) {
    out.push_back(relation.relation);
    return out;
  }
  for (const auto &e : events) {
    if (std::find(out.begin(), out.end(), e.event_type) == out.end()) {
      out.push_back(e.event_type);
    }
  }
  return out;
}

std::string SpanLabel::Name() const { return is_trigger ? "Trigger" : role; }

bool Span::operator<(const Span &o) const {
  return std::tie(start, end, event_index, label) <
         std::tie(o.start, o.end, o.event_index, o.label);
}

ojson ToJson(const TargetStructure &y) {
  ojson j = ojson::object();
  if (y.task == Task::kRelation) {
    j["subject"] = y.relation.subject;
    j["object"] = y.relation.object;
    j["relation"] = y.relation.relation;
    return j;
  }
  ojson events = ojson::array();
  for (const auto &e : y.events) {
    ojson args = ojson::object();
    for (const auto &a : e.args) {
      args[a.role] = a.mention ? ojson(*a.mention) : ojson(nullptr);
    }
    events.push_back({{"event_type", e.event_type},
                      {"trigger", e.trigger},
                      {"args", std::move(args)}});
  }
  j["events"] = std::move(events);
  return j;
}

TargetStructure TargetStructureFromJson(const ojson &j, Task task) {
  TargetStructure y;
  y.task = task;
  try {
    if (task == Task::kRelation) {
      y.relation.subject = j.at("subject").get<std::string>();
      y.relation.object = j.at("object").get<std::string>();
      y.relation.relation = j.at("relation").get<std::string>();
      return y;
    }
    for (const auto &e : j.at("events")) {
      EventSpec spec;
      spec.event_type = e.at("event_type").get<std::string>();
      spec.trigger = e.at("trigger").get<std::string>();
      for (const auto &[role, value] : e.at("args").items()) {
        RoleValue rv{role, std::nullopt};
        if (!value.is_null()) rv.mention = value.get<std::string>();
        spec.args.push_back(std::move(rv));
      }
      y.events.push_back(std::move(spec));
    }
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kParse, std::string("structure: ") + e.what());
  }
  return y;
}

ojson ToJson(const Span &span) {
  return {{"start", span.start},
          {"end", span.end},
          {"label", span.label.Name()},
          {"event_index", span.event_index}};
}

Span SpanFromJson(const ojson &j) {
  try {
    Span s;
    s.start = j.at("start").get<size_t>();
    s.end = j.at("end").get<size_t>();
    std::string label = j.at("label").get<std::string>();
    s.label = label == "Trigger" ? SpanLabel::Trigger()
                                 : SpanLabel::Role(std::move(label));
    s.event_index = j.at("event_index").get<int>();
    return s;
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kParse, std::string("span: ") + e.what());
  }
}

}  // namespace starforge
