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

#include "core/span_codec.h"

#include <algorithm>
#include <map>
#include <set>

#include "core/error.h"
#include "core/text.h"

namespace starforge {

namespace {

bool IsTagStart(char32_t c) {
  return (c >= U'A' && c <= U'Z') || (c >= U'a' && c <= U'z');
}

bool IsTagChar(char32_t c) {
  return IsTagStart(c) || (c >= U'0' && c <= U'9') || c == U'-' ||
         c == U'_' || c == U'.';
}

// A tag marker found in the input: <Name> or </Name>.
struct Marker {
  bool closing = false;
  std::string name;
  size_t length = 0;  // in scalar values, including brackets
};

std::optional<Marker> MatchMarker(const std::u32string &text, size_t pos) {
  if (text[pos] != U'<') return std::nullopt;
  size_t i = pos + 1;
  Marker m;
  if (i < text.size() && text[i] == U'/') {
    m.closing = true;
    ++i;
  }
  if (i >= text.size() || !IsTagStart(text[i])) return std::nullopt;
  size_t name_start = i;
  while (i < text.size() && IsTagChar(text[i])) ++i;
  if (i >= text.size() || text[i] != U'>') return std::nullopt;
  m.name = CodepointsToUtf8(
      std::u32string_view(text).substr(name_start, i - name_start));
  m.length = i + 1 - pos;
  return m;
}

struct ResolvedLabel {
  SpanLabel label;
  std::optional<int> event;  // from an explicit suffix
};

// Maps tag names to labels. Role tags cover every role of the ontology (for
// event tasks) so that valid-but-misplaced roles are distinguishable from
// unknown ones.
class LabelTable {
 public:
  LabelTable(const TargetStructure &expected, const Ontology &ontology) {
    if (expected.task == Task::kRelation) {
      tags_.emplace(std::string(kSubjectRole),
                    SpanLabel::Role(std::string(kSubjectRole)));
      tags_.emplace(std::string(kObjectRole),
                    SpanLabel::Role(std::string(kObjectRole)));
      return;
    }
    tags_.emplace("Trigger", SpanLabel::Trigger());
    for (const auto &type : ontology.event_types()) {
      for (const auto &role : type.roles) {
        tags_.emplace(RoleTagName(role.role), SpanLabel::Role(role.role));
      }
    }
    // Roles of expected event types that the ontology does not know.
    for (const auto &e : expected.events) {
      for (const auto &a : e.args) {
        tags_.emplace(RoleTagName(a.role), SpanLabel::Role(a.role));
      }
    }
  }

  std::optional<ResolvedLabel> Resolve(const std::string &name) const {
    if (auto it = tags_.find(name); it != tags_.end()) {
      return ResolvedLabel{it->second, std::nullopt};
    }
    size_t cut = name.size();
    while (cut > 0 && name[cut - 1] >= '0' && name[cut - 1] <= '9') --cut;
    if (cut == name.size() || cut == 0) return std::nullopt;
    std::string digits = name.substr(cut);
    if (digits.size() > 6 || digits[0] == '0') return std::nullopt;
    auto it = tags_.find(name.substr(0, cut));
    if (it == tags_.end()) return std::nullopt;
    return ResolvedLabel{it->second, std::stoi(digits) - 1};
  }

 private:
  std::map<std::string, SpanLabel> tags_;
};

struct RawSpan {
  size_t start;
  size_t end;
  ResolvedLabel label;
  size_t location;
};

bool EventHasRole(const TargetStructure &y, int event, const std::string &role) {
  if (event < 0 || static_cast<size_t>(event) >= y.events.size()) return false;
  return y.events[event].FindArg(role) != nullptr;
}

std::optional<std::string> ExpectedMention(const TargetStructure &y, int event,
                                           const SpanLabel &label) {
  if (y.task == Task::kRelation) {
    if (label.role == kSubjectRole) return y.relation.subject;
    if (label.role == kObjectRole) return y.relation.object;
    return std::nullopt;
  }
  if (event < 0 || static_cast<size_t>(event) >= y.events.size()) {
    return std::nullopt;
  }
  const EventSpec &e = y.events[event];
  if (label.is_trigger) return e.trigger;
  const RoleValue *rv = e.FindArg(label.role);
  return rv ? rv->mention : std::nullopt;
}

}  // namespace

std::string_view DecodeIssueName(DecodeIssueKind kind) {
  switch (kind) {
    case DecodeIssueKind::kUnclosedTag: return "UnclosedTag";
    case DecodeIssueKind::kUnknownLabel: return "UnknownLabel";
    case DecodeIssueKind::kNestedTag: return "NestedTag";
    case DecodeIssueKind::kDuplicateRole: return "DuplicateRole";
    case DecodeIssueKind::kUnassignedArgument: return "UnassignedArgument";
  }
  return "Unknown";
}

std::string Encode(const AnnotatedPassage &passage) {
  const std::u32string text = Utf8ToCodepoints(passage.text);
  std::vector<Span> spans = passage.spans;
  std::sort(spans.begin(), spans.end());
  int max_event = 0;
  for (size_t i = 0; i < spans.size(); ++i) {
    const Span &s = spans[i];
    if (s.start >= s.end || s.end > text.size()) {
      Fail(ErrorCode::kInvalidArgument,
           "span [" + std::to_string(s.start) + "," + std::to_string(s.end) +
               ") is empty or out of bounds");
    }
    if (s.event_index < 0) {
      Fail(ErrorCode::kInvalidArgument, "negative event index");
    }
    if (i > 0 && s.start < spans[i - 1].end) {
      Fail(ErrorCode::kOverlap,
           "span " + s.label.Name() + "[" + std::to_string(s.start) + "," +
               std::to_string(s.end) + ") overlaps " +
               spans[i - 1].label.Name() + "[" +
               std::to_string(spans[i - 1].start) + "," +
               std::to_string(spans[i - 1].end) + ")");
    }
    max_event = std::max(max_event, s.event_index);
  }

  std::u32string out;
  size_t cursor = 0;
  for (const Span &s : spans) {
    std::string tag = s.label.is_trigger ? "Trigger" : RoleTagName(s.label.role);
    if (max_event > 0) tag += std::to_string(s.event_index + 1);
    const std::u32string tag32 = Utf8ToCodepoints(tag);
    out.append(text, cursor, s.start - cursor);
    out += U'<';
    out += tag32;
    out += U'>';
    out.append(text, s.start, s.end - s.start);
    out += U"</";
    out += tag32;
    out += U'>';
    cursor = s.end;
  }
  out.append(text, cursor, std::u32string::npos);
  return CodepointsToUtf8(out);
}

DecodeReport Decode(std::string_view tagged, const TargetStructure &expected,
                    const Ontology &ontology) {
  DecodeReport report;
  const std::u32string input = Utf8ToCodepoints(tagged);
  const LabelTable labels(expected, ontology);

  struct Open {
    Marker marker;
    ResolvedLabel label;
    size_t plain_start;
    size_t location;
  };
  std::optional<Open> active;
  std::vector<std::string> superseded;  // names of outer tags lost to nesting
  std::vector<RawSpan> raw;
  std::u32string plain;
  plain.reserve(input.size());

  auto issue = [&](DecodeIssueKind kind, size_t loc, std::string detail) {
    report.issues.push_back({kind, loc, std::move(detail)});
  };

  size_t i = 0;
  while (i < input.size()) {
    std::optional<Marker> marker = MatchMarker(input, i);
    if (!marker) {
      plain.push_back(input[i]);
      ++i;
      continue;
    }
    const size_t loc = i;
    i += marker->length;
    std::optional<ResolvedLabel> label = labels.Resolve(marker->name);
    if (!label) {
      issue(DecodeIssueKind::kUnknownLabel, loc,
            "unknown tag '" + marker->name + "'");
      continue;
    }
    if (!marker->closing) {
      if (active) {
        issue(DecodeIssueKind::kNestedTag, active->location,
              "tag '" + active->marker.name + "' encloses '" + marker->name +
                  "'; inner tag kept");
        superseded.push_back(active->marker.name);
      }
      active = Open{*marker, *label, plain.size(), loc};
      continue;
    }
    if (active && active->marker.name == marker->name) {
      if (plain.size() > active->plain_start) {
        raw.push_back({active->plain_start, plain.size(), active->label,
                       active->location});
      } else {
        report.notes.push_back("empty tag '" + marker->name + "' at " +
                               std::to_string(active->location) + " ignored");
      }
      active.reset();
      continue;
    }
    auto it = std::find(superseded.rbegin(), superseded.rend(), marker->name);
    if (it != superseded.rend()) {
      superseded.erase(std::next(it).base());
      continue;
    }
    issue(DecodeIssueKind::kUnclosedTag, loc,
          "closing tag '" + marker->name + "' without an opening tag");
  }
  if (active) {
    issue(DecodeIssueKind::kUnclosedTag, active->location,
          "tag '" + active->marker.name + "' is never closed");
  }

  report.passage.text = CodepointsToUtf8(plain);
  const std::string &passage = report.passage.text;
  auto mention_of = [&](size_t s, size_t e) {
    return CodepointsToUtf8(std::u32string_view(plain).substr(s, e - s));
  };

  // Attribute spans to events.
  std::vector<Span> spans;
  std::set<std::pair<int, std::string>> taken;  // (event, label name)
  auto accept = [&](const RawSpan &r, int event) {
    Span span{r.start, r.end, r.label.label, event};
    if (!taken.insert({event, span.label.Name()}).second) {
      issue(DecodeIssueKind::kDuplicateRole, r.location,
            span.label.Name() + " of event " + std::to_string(event + 1) +
                " tagged more than once; first kept");
      return;
    }
    std::optional<std::string> want = ExpectedMention(expected, event, span.label);
    std::string got = mention_of(r.start, r.end);
    if (!want) {
      report.notes.push_back(span.label.Name() + " '" + got + "' of event " +
                             std::to_string(event + 1) +
                             " has no expected value");
    } else if (*want != got) {
      report.notes.push_back(span.label.Name() + " '" + got + "' of event " +
                             std::to_string(event + 1) + " differs from '" +
                             *want + "'");
    }
    spans.push_back(span);
  };

  if (expected.task == Task::kRelation) {
    for (const RawSpan &r : raw) {
      if (r.label.event && *r.label.event != 0) {
        issue(DecodeIssueKind::kUnassignedArgument, r.location,
              "relation tags carry no event suffix");
        continue;
      }
      accept(r, 0);
    }
  } else {
    const int num_events = static_cast<int>(expected.events.size());
    // Triggers first: they anchor the argument attribution.
    std::vector<std::pair<size_t, int>> trigger_pos;  // (start, event)
    std::vector<bool> has_trigger(num_events, false);
    for (const RawSpan &r : raw) {
      if (!r.label.label.is_trigger) continue;
      int event = -1;
      if (r.label.event) {
        event = *r.label.event < num_events ? *r.label.event : -1;
      } else {
        const std::string text = mention_of(r.start, r.end);
        for (int e = 0; e < num_events && event < 0; ++e) {
          if (!has_trigger[e] && expected.events[e].trigger == text) event = e;
        }
        for (int e = 0; e < num_events && event < 0; ++e) {
          if (!has_trigger[e]) event = e;
        }
        for (int e = 0; e < num_events && event < 0; ++e) {
          if (expected.events[e].trigger == text) event = e;
        }
      }
      if (event < 0) {
        issue(DecodeIssueKind::kUnassignedArgument, r.location,
              "trigger '" + mention_of(r.start, r.end) +
                  "' matches no expected event");
        continue;
      }
      if (!has_trigger[event]) trigger_pos.emplace_back(r.start, event);
      has_trigger[event] = true;
      accept(r, event);
    }
    std::sort(trigger_pos.begin(), trigger_pos.end());

    for (const RawSpan &r : raw) {
      if (r.label.label.is_trigger) continue;
      const std::string &role = r.label.label.role;
      int event = -1;
      if (r.label.event) {
        if (EventHasRole(expected, *r.label.event, role)) event = *r.label.event;
      } else {
        // Nearest preceding trigger, then nearest following, then events
        // without a tagged trigger in index order.
        std::vector<int> order;
        for (auto it = trigger_pos.rbegin(); it != trigger_pos.rend(); ++it) {
          if (it->first <= r.start) order.push_back(it->second);
        }
        for (const auto &[pos, e] : trigger_pos) {
          if (pos > r.start) order.push_back(e);
        }
        for (int e = 0; e < num_events; ++e) {
          if (std::find(order.begin(), order.end(), e) == order.end()) {
            order.push_back(e);
          }
        }
        for (int e : order) {
          if (EventHasRole(expected, e, role)) {
            event = e;
            break;
          }
        }
      }
      if (event < 0) {
        issue(DecodeIssueKind::kUnassignedArgument, r.location,
              role + " '" + mention_of(r.start, r.end) +
                  "' cannot be attributed to an expected event");
        continue;
      }
      accept(r, event);
    }
  }

  // Locate expected mentions that were left untagged.
  auto locate = [&](int event, const SpanLabel &label,
                    const std::string &mention) {
    if (taken.count({event, label.Name()})) return;
    auto found = FindSubsequence(mention, passage);
    if (!found) return;
    for (const Span &s : spans) {
      if (found->first < s.end && s.start < found->second) return;
    }
    spans.push_back({found->first, found->second, label, event});
    taken.insert({event, label.Name()});
    report.notes.push_back("untagged " + label.Name() + " '" + mention +
                           "' located by search");
  };
  if (expected.task == Task::kRelation) {
    locate(0, SpanLabel::Role(std::string(kSubjectRole)),
           expected.relation.subject);
    locate(0, SpanLabel::Role(std::string(kObjectRole)),
           expected.relation.object);
  } else {
    for (int e = 0; e < static_cast<int>(expected.events.size()); ++e) {
      const EventSpec &ev = expected.events[e];
      locate(e, SpanLabel::Trigger(), ev.trigger);
      for (const auto &a : ev.args) {
        if (a.mention) locate(e, SpanLabel::Role(a.role), *a.mention);
      }
    }
  }

  for (const Span &s : spans) {
    const std::string text = mention_of(s.start, s.end);
    if (CountOccurrences(text, passage) > 1) {
      report.notes.push_back("mention '" + text +
                             "' occurs more than once in the passage");
    }
  }

  std::sort(spans.begin(), spans.end());
  report.passage.spans = std::move(spans);
  return report;
}

std::optional<std::pair<size_t, size_t>> FindSubsequence(
    std::string_view mention, std::string_view passage) {
  if (mention.empty()) return std::nullopt;
  const std::u32string m = Utf8ToCodepoints(mention);
  const std::u32string p = Utf8ToCodepoints(passage);
  size_t pos = p.find(m);
  if (pos == std::u32string::npos) return std::nullopt;
  return std::make_pair(pos, pos + m.size());
}

size_t CountOccurrences(std::string_view mention, std::string_view passage) {
  if (mention.empty()) return 0;
  const std::u32string m = Utf8ToCodepoints(mention);
  const std::u32string p = Utf8ToCodepoints(passage);
  size_t count = 0;
  for (size_t pos = p.find(m); pos != std::u32string::npos;
       pos = p.find(m, pos + m.size())) {
    ++count;
  }
  return count;
}

std::string SpanText(std::string_view passage, size_t start, size_t end) {
  const std::u32string p = Utf8ToCodepoints(passage);
  if (start > p.size() || end < start) return {};
  return CodepointsToUtf8(
      std::u32string_view(p).substr(start, std::min(end, p.size()) - start));
}

}  // namespace starforge
