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

#include "support/generators.h"

#include <algorithm>
#include <set>
#include <vector>

#include "core/text.h"

namespace starforge::testing {

namespace {

const std::vector<std::u32string> &Alphabet() {
  static const std::vector<std::u32string> kPieces = {
      U"a", U"b", U"e", U"s", U"T", U"Q", U"z", U"0", U"7", U" ", U" ", U"  ",
      U"\t", U"\n", U".", U",", U"!", U"'", U"\"", U"(", U")", U">", U"/",
      U"-", U"é", U"ü", U"ß", U"日", U"本",
      U"\U0001F600", U" ", U" ", U"&", U"[", U"]"};
  return kPieces;
}

}  // namespace

GeneratedPassage RandomAnnotatedPassage(Rng &rng, const Ontology &ontology) {
  std::u32string text;
  const size_t length = rng.Uniform(61);
  while (text.size() < length) {
    const auto &a = Alphabet();
    text += a[rng.Uniform(a.size())];
  }

  GeneratedPassage out;
  const int num_events = static_cast<int>(rng.Uniform(6));
  const auto &types = ontology.event_types();
  std::vector<const EventTypeSpec *> event_types;
  for (int e = 0; e < num_events; ++e) {
    event_types.push_back(&types[rng.Uniform(types.size())]);
  }

  // Up to 6 disjoint [start, end) intervals.
  std::vector<std::pair<size_t, size_t>> intervals;
  if (num_events > 0 && !text.empty()) {
    const size_t wanted = rng.Uniform(7);
    for (size_t attempt = 0; attempt < 40 && intervals.size() < wanted; ++attempt) {
      const size_t start = rng.Uniform(text.size());
      const size_t end = start + 1 + rng.Uniform(std::min<size_t>(6, text.size() - start));
      const bool clash = std::any_of(intervals.begin(), intervals.end(), [&](auto &iv) {
        return start < iv.second && iv.first < end;
      });
      if (!clash) intervals.emplace_back(start, end);
    }
  }

  std::set<std::pair<int, std::string>> used;  // (event, label)
  std::vector<EventSpec> events(num_events);
  for (int e = 0; e < num_events; ++e) {
    events[e].event_type = event_types[e]->name;
    // A trigger string that never occurs in the text.
    events[e].trigger = "\x01untagged-" + std::to_string(e);
  }
  for (const auto &[start, end] : intervals) {
    const int e = static_cast<int>(rng.Uniform(num_events));
    const std::string mention =
        CodepointsToUtf8(std::u32string_view(text).substr(start, end - start));
    const auto &roles = event_types[e]->roles;
    const size_t pick = rng.Uniform(roles.size() + 1);
    if (pick == roles.size()) {
      if (!used.insert({e, "Trigger"}).second) continue;
      events[e].trigger = mention;
      out.passage.spans.push_back({start, end, SpanLabel::Trigger(), e});
    } else {
      const std::string &role = roles[pick].role;
      if (!used.insert({e, role}).second) continue;
      events[e].args.push_back({role, mention});
      out.passage.spans.push_back({start, end, SpanLabel::Role(role), e});
    }
  }
  std::sort(out.passage.spans.begin(), out.passage.spans.end());
  out.passage.text = CodepointsToUtf8(text);
  out.expected.task = Task::kEvent;
  out.expected.events = std::move(events);
  return out;
}

std::string RandomTaggedNoise(Rng &rng) {
  static const std::vector<std::string> kFragments = {
      "<Trigger>", "</Trigger>", "<Trigger2>", "</Trigger2>", "<Plaintiff>",
      "</Plaintiff>", "<Place1>", "</Place1>", "<Unknown>", "</", "<", ">",
      "<Trigger0>", "<Agent999999999>", "<Subject>", "</Object>", "sue", " ",
      "\xC3\xA9", "\xF0\x9F\x98\x80", "\xFF", "\xC3", "\xE2\x82", "\n", "<<>>",
      "<Trigger", "Trigger>", "<Defendant12>", "</Defendant12>", "<a-b.c_d>"};
  std::string out;
  const size_t pieces = rng.Uniform(40);
  for (size_t i = 0; i < pieces; ++i) {
    if (rng.Uniform(4) == 0) {
      out.push_back(static_cast<char>(rng.Uniform(256)));
    } else {
      out += kFragments[rng.Uniform(kFragments.size())];
    }
  }
  return out;
}

}  // namespace starforge::testing
