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

#include "core/dataset.h"

#include <unicode/uchar.h>

#include <set>
#include <sstream>

#include "core/error.h"
#include "core/io.h"
#include "core/span_codec.h"
#include "core/text.h"

namespace starforge {

ojson ToJson(const DataInstance &instance) {
  ojson spans = ojson::array();
  for (const auto &s : instance.spans) spans.push_back(ToJson(s));
  ojson flags = ojson::array();
  for (const auto &f : instance.provenance.trace_summary.flags_remaining) {
    flags.push_back(ToJson(f));
  }
  const Provenance &p = instance.provenance;
  return {{"id", instance.id},
          {"task", TaskName(instance.task)},
          {"passage", instance.passage},
          {"structure", ToJson(instance.structure)},
          {"spans", std::move(spans)},
          {"provenance",
           {{"model_id", p.model_id},
            {"k", p.k},
            {"plan_item", ToJson(p.plan_item)},
            {"prompt_hash", p.prompt_hash},
            {"strategy", StrategyName(p.strategy)},
            {"trace_summary",
             {{"t", p.trace_summary.t},
              {"stop_reason", StopReasonName(p.trace_summary.stop_reason)},
              {"flags_remaining", std::move(flags)}}}}},
          {"created_at", instance.created_at}};
}

DataInstance DataInstanceFromJson(const ojson &j) {
  try {
    DataInstance d;
    d.id = j.at("id").get<std::string>();
    d.task = ParseTask(j.at("task").get<std::string>());
    d.passage = j.at("passage").get<std::string>();
    d.structure = TargetStructureFromJson(j.at("structure"), d.task);
    for (const auto &s : j.at("spans")) d.spans.push_back(SpanFromJson(s));
    const ojson &p = j.at("provenance");
    d.provenance.model_id = p.at("model_id").get<std::string>();
    d.provenance.k = p.at("k").get<int>();
    d.provenance.plan_item = PlanItemFromJson(p.at("plan_item"));
    d.provenance.prompt_hash = p.at("prompt_hash").get<std::string>();
    d.provenance.strategy = ParseStrategy(p.at("strategy").get<std::string>());
    const ojson &ts = p.at("trace_summary");
    d.provenance.trace_summary.t = ts.at("t").get<int>();
    d.provenance.trace_summary.stop_reason =
        ParseStopReason(ts.at("stop_reason").get<std::string>());
    for (const auto &f : ts.at("flags_remaining")) {
      d.provenance.trace_summary.flags_remaining.push_back(QualityFlagFromJson(f));
    }
    d.created_at = j.at("created_at").get<std::string>();
    return d;
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kParse, std::string("instance: ") + e.what());
  }
}

std::string SerializeInstances(const std::vector<DataInstance> &instances) {
  std::string out =
      ojson{{"schema_version", kSchemaVersion}, {"instances", instances.size()}}.dump();
  out += '\n';
  for (const auto &d : instances) {
    out += ToJson(d).dump();
    out += '\n';
  }
  return out;
}

void WriteInstances(const std::string &path,
                    const std::vector<DataInstance> &instances) {
  WriteFile(path, SerializeInstances(instances));
}

std::vector<DataInstance> ReadInstances(const std::string &path) {
  const std::vector<std::string> lines = ReadNonEmptyLines(path);
  if (lines.empty()) Fail(ErrorCode::kParse, path + ": missing schema header");
  std::vector<DataInstance> out;
  try {
    const ojson header = ojson::parse(lines[0]);
    if (!header.contains("schema_version")) {
      Fail(ErrorCode::kParse, path + ": missing schema header");
    }
    const ojson &version = header.at("schema_version");
    if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
      Fail(ErrorCode::kSchemaVersionMismatch,
           path + ": schema_version " + version.dump() + " is not supported (expected " +
               std::to_string(kSchemaVersion) + ")");
    }
    for (size_t i = 1; i < lines.size(); ++i) {
      out.push_back(DataInstanceFromJson(ojson::parse(lines[i])));
    }
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kParse, path + ": " + e.what());
  }
  return out;
}

std::vector<std::string> CheckInstance(const DataInstance &d,
                                       const Ontology &ontology) {
  std::vector<std::string> problems;
  const size_t len = CodepointLength(d.passage);
  if (d.task == Task::kRelation) {
    if (!ontology.FindRelationType(d.structure.relation.relation)) {
      problems.push_back("unknown relation type " + d.structure.relation.relation);
    }
  } else {
    for (const auto &e : d.structure.events) {
      const EventTypeSpec *type = ontology.FindEventType(e.event_type);
      if (type == nullptr) {
        problems.push_back("unknown event type " + e.event_type);
        continue;
      }
      for (const auto &a : e.args) {
        if (type->FindRole(a.role) == nullptr) {
          problems.push_back("role " + a.role + " is not defined for " + e.event_type);
        }
      }
    }
  }
  for (const auto &s : d.spans) {
    if (s.start >= s.end || s.end > len) {
      problems.push_back(s.label.Name() + " span [" + std::to_string(s.start) + ", " +
                         std::to_string(s.end) + ") is outside the passage");
      continue;
    }
    if (d.task == Task::kEvent &&
        (s.event_index < 0 ||
         static_cast<size_t>(s.event_index) >= d.structure.events.size())) {
      problems.push_back(s.label.Name() + " span refers to a missing event");
    }
  }
  for (size_t i = 0; i < d.spans.size(); ++i) {
    for (size_t j = i + 1; j < d.spans.size(); ++j) {
      if (d.spans[i].start < d.spans[j].end && d.spans[j].start < d.spans[i].end) {
        problems.push_back("spans " + d.spans[i].label.Name() + " and " +
                           d.spans[j].label.Name() + " overlap");
      }
    }
  }
  return problems;
}

std::vector<Token> Tokenize(const std::string &text) {
  const std::u32string cps = Utf8ToCodepoints(text);
  std::vector<Token> tokens;
  auto emit = [&](size_t start, size_t end) {
    tokens.push_back(
        {CodepointsToUtf8(cps.substr(start, end - start)), start, end});
  };
  size_t i = 0;
  while (i < cps.size()) {
    if (IsUnicodeSpace(cps[i])) {
      ++i;
      continue;
    }
    size_t end = i;
    while (end < cps.size() && !IsUnicodeSpace(cps[end])) ++end;
    size_t lo = i;
    size_t hi = end;
    while (lo < hi && u_ispunct(static_cast<UChar32>(cps[lo]))) {
      emit(lo, lo + 1);
      ++lo;
    }
    size_t trail = hi;
    while (trail > lo && u_ispunct(static_cast<UChar32>(cps[trail - 1]))) --trail;
    if (lo < trail) emit(lo, trail);
    for (size_t k = trail; k < hi; ++k) emit(k, k + 1);
    i = end;
  }
  return tokens;
}

namespace {

// Token range [first, last) covering exactly [start, end), or nullopt.
std::optional<std::pair<size_t, size_t>> TokenRange(const std::vector<Token> &tokens,
                                                    size_t start, size_t end) {
  std::optional<size_t> first;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].start == start) first = i;
    if (first && tokens[i].end == end) return std::make_pair(*first, i + 1);
    if (tokens[i].start >= end) break;
  }
  return std::nullopt;
}

}  // namespace

std::optional<ojson> ExportRecord(const DataInstance &d, std::string *reason) {
  const std::vector<Token> tokens = Tokenize(d.passage);
  std::map<const Span *, ojson> ranges;
  for (const auto &s : d.spans) {
    const auto r = TokenRange(tokens, s.start, s.end);
    if (!r) {
      if (reason != nullptr) {
        *reason = s.label.Name() + " span [" + std::to_string(s.start) + ", " +
                  std::to_string(s.end) + ") '" + SpanText(d.passage, s.start, s.end) +
                  "' does not align with token boundaries";
      }
      return std::nullopt;
    }
    ranges[&s] = ojson::array({r->first, r->second});
  }
  ojson token_texts = ojson::array();
  for (const auto &t : tokens) token_texts.push_back(t.text);
  ojson record = {{"id", d.id}, {"tokens", std::move(token_texts)}};

  auto find = [&](int event_index, const SpanLabel &label) -> ojson {
    for (const auto &s : d.spans) {
      if (s.event_index == event_index && s.label == label) return ranges[&s];
    }
    return nullptr;
  };

  if (d.task == Task::kRelation) {
    ojson subject = find(0, SpanLabel::Role(std::string(kSubjectRole)));
    ojson object = find(0, SpanLabel::Role(std::string(kObjectRole)));
    record["relations"] = ojson::array({{{"relation", d.structure.relation.relation},
                                         {"subject", subject},
                                         {"object", object}}});
    return record;
  }
  ojson events = ojson::array();
  for (size_t i = 0; i < d.structure.events.size(); ++i) {
    const EventSpec &e = d.structure.events[i];
    const int ei = static_cast<int>(i);
    ojson args = ojson::array();
    for (const auto &a : e.args) {
      ojson span = find(ei, SpanLabel::Role(a.role));
      if (!span.is_null()) args.push_back({{"role", a.role}, {"span", span}});
    }
    events.push_back({{"type", e.event_type},
                      {"trigger", find(ei, SpanLabel::Trigger())},
                      {"args", std::move(args)}});
  }
  record["events"] = std::move(events);
  return record;
}

ExportSummary ExportSpanFormat(const std::vector<DataInstance> &instances,
                               const std::string &path, bool drop_flagged) {
  ExportSummary summary;
  std::string out;
  for (const auto &d : instances) {
    if (drop_flagged && !d.provenance.trace_summary.flags_remaining.empty()) {
      ++summary.skipped;
      summary.log.push_back(d.id + ": dropped, " +
                            std::to_string(d.provenance.trace_summary.flags_remaining.size()) +
                            " remaining flag(s)");
      continue;
    }
    std::string reason;
    std::optional<ojson> record = ExportRecord(d, &reason);
    if (!record) {
      ++summary.skipped;
      summary.log.push_back(d.id + ": skipped, " + reason);
      continue;
    }
    out += record->dump();
    out += '\n';
    ++summary.written;
  }
  WriteFile(path, out);
  return summary;
}

std::string FormatBin(double bin) {
  std::ostringstream os;
  os << bin;
  return os.str();
}

ojson DatasetStats::ToJson() const {
  ojson density_json = ojson::object();
  for (const auto &[d, c] : density) density_json[std::to_string(d)] = c;
  return {{"total", total},
          {"flagged_instances", flagged_instances},
          {"per_type", per_type},
          {"density", std::move(density_json)},
          {"hallucination_bins", hallucination_bins},
          {"unique_triggers", unique_triggers},
          {"remaining_flag_rate", remaining_flag_rate}};
}

DatasetStats ComputeStats(const std::vector<DataInstance> &instances,
                          const GenerationConfig *config) {
  DatasetStats stats;
  stats.total = instances.size();
  const bool any_event = std::any_of(instances.begin(), instances.end(),
                                     [](const auto &d) { return d.task == Task::kEvent; });
  if (config != nullptr && any_event) {
    for (int d = 0; d <= config->max_density; ++d) stats.density[d] = 0;
    for (double b : config->hallucination_bins) stats.hallucination_bins[FormatBin(b)] = 0;
  }
  std::map<std::string, std::set<std::string>> triggers;
  std::map<std::string, size_t> flagged_by_dim;
  std::set<Task> tasks;
  for (const auto &d : instances) {
    tasks.insert(d.task);
    const PlanItem &item = d.provenance.plan_item;
    ++stats.per_type[item.primary_type];
    if (d.task == Task::kEvent) {
      ++stats.density[item.density];
      ++stats.hallucination_bins[FormatBin(item.hallucination_bin)];
      for (const auto &e : d.structure.events) {
        triggers[e.event_type].insert(NormalizeMention(e.trigger));
      }
    }
    const auto &remaining = d.provenance.trace_summary.flags_remaining;
    if (!remaining.empty()) ++stats.flagged_instances;
    std::set<std::string> dims;
    for (const auto &f : remaining) dims.insert(DimensionName(f.dimension));
    for (const auto &dim : dims) ++flagged_by_dim[dim];
  }
  for (const auto &[type, set] : triggers) stats.unique_triggers[type] = set.size();
  for (const auto &dim : QualityDimensions()) {
    const bool ee = dim.id <= DimensionId::kEE6;
    if (!tasks.count(ee ? Task::kEvent : Task::kRelation)) continue;
    const std::string name = DimensionName(dim.id);
    stats.remaining_flag_rate[name] =
        stats.total == 0 ? 0.0
                         : static_cast<double>(flagged_by_dim[name]) /
                               static_cast<double>(stats.total);
  }
  return stats;
}

}  // namespace starforge
