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

#include <gtest/gtest.h>

#include "core/error.h"
#include "support/fixtures.h"
#include "support/generators.h"

namespace starforge {
namespace {

const Ontology &Toy() { return testing::ToyOntology(); }

TargetStructure SueStructure() {
  TargetStructure y;
  y.events.push_back({"Justice:Sue", "sue", {{"Plaintiff", "He"}}});
  return y;
}

std::vector<DecodeIssueKind> Kinds(const DecodeReport &r) {
  std::vector<DecodeIssueKind> out;
  for (const auto &i : r.issues) out.push_back(i.kind);
  return out;
}

TEST(EncodeTest, SingleEventUsesPlainTags) {
  const AnnotatedPassage a{"He threatened to sue the company.",
                           {{17, 20, SpanLabel::Trigger(), 0},
                            {0, 2, SpanLabel::Role("Plaintiff"), 0}}};
  EXPECT_EQ(Encode(a),
            "<Plaintiff>He</Plaintiff> threatened to <Trigger>sue</Trigger> the company.");
}

TEST(EncodeTest, MultipleEventsGetOneBasedSuffixes) {
  const AnnotatedPassage a{"sued and jailed",
                           {{0, 4, SpanLabel::Trigger(), 0}, {9, 15, SpanLabel::Trigger(), 1}}};
  EXPECT_EQ(Encode(a), "<Trigger1>sued</Trigger1> and <Trigger2>jailed</Trigger2>");
}

TEST(EncodeTest, OffsetsCountScalarValues) {
  const AnnotatedPassage a{"\xC3\xA9t\xC3\xA9 sue", {{4, 7, SpanLabel::Trigger(), 0}}};
  EXPECT_EQ(Encode(a), "\xC3\xA9t\xC3\xA9 <Trigger>sue</Trigger>");
}

TEST(EncodeTest, RejectsOverlapsAndBadSpans) {
  try {
    Encode({"abcdef", {{0, 3, SpanLabel::Trigger(), 0}, {2, 4, SpanLabel::Role("Place"), 1}}});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kOverlap);
  }
  EXPECT_THROW(Encode({"abc", {{2, 2, SpanLabel::Trigger(), 0}}}), Error);
  EXPECT_THROW(Encode({"abc", {{1, 9, SpanLabel::Trigger(), 0}}}), Error);
  EXPECT_THROW(Encode({"abc", {{0, 1, SpanLabel::Trigger(), -1}}}), Error);
}

TEST(DecodeTest, SueExampleRoundTrip) {
  const auto r = Decode(
      "<Plaintiff>He</Plaintiff> threatened to <Trigger>sue</Trigger> the company.",
      SueStructure(), Toy());
  EXPECT_TRUE(r.issues.empty());
  EXPECT_EQ(r.passage.text, "He threatened to sue the company.");
  ASSERT_EQ(r.passage.spans.size(), 2u);
  EXPECT_EQ(r.passage.spans[0], (Span{0, 2, SpanLabel::Role("Plaintiff"), 0}));
  EXPECT_EQ(r.passage.spans[1], (Span{17, 20, SpanLabel::Trigger(), 0}));
}

TEST(DecodeTest, UnsuffixedArgumentsFollowTheNearestPrecedingTrigger) {
  TargetStructure y;
  y.events.push_back({"Justice:Sue", "sued", {{"Place", "Canada"}}});
  y.events.push_back({"Justice:Arrest-Jail", "jailed", {{"Place", "Chile"}}});
  const auto r = Decode(
      "<Trigger>sued</Trigger> in <Place>Canada</Place>, <Trigger>jailed</Trigger> in "
      "<Place>Chile</Place>",
      y, Toy());
  EXPECT_TRUE(r.issues.empty());
  ASSERT_EQ(r.passage.spans.size(), 4u);
  EXPECT_EQ(r.passage.spans[1].event_index, 0);
  EXPECT_EQ(r.passage.spans[3].event_index, 1);
}

TEST(DecodeTest, UntaggedExpectedMentionIsLocatedBySearch) {
  const auto r = Decode("He threatened to <Trigger>sue</Trigger>.", SueStructure(), Toy());
  EXPECT_TRUE(r.issues.empty());
  ASSERT_EQ(r.passage.spans.size(), 2u);
  EXPECT_EQ(r.passage.spans[0], (Span{0, 2, SpanLabel::Role("Plaintiff"), 0}));
  ASSERT_FALSE(r.notes.empty());
}

TEST(DecodeTest, ReportsMalformedTags) {
  const TargetStructure y = SueStructure();
  EXPECT_EQ(Kinds(Decode("<Bogus>x</Bogus>", y, Toy())),
            (std::vector<DecodeIssueKind>{DecodeIssueKind::kUnknownLabel,
                                          DecodeIssueKind::kUnknownLabel}));
  EXPECT_EQ(Kinds(Decode("<Trigger>sue", y, Toy())),
            (std::vector<DecodeIssueKind>{DecodeIssueKind::kUnclosedTag}));
  EXPECT_EQ(Kinds(Decode("sue</Trigger>", y, Toy())),
            (std::vector<DecodeIssueKind>{DecodeIssueKind::kUnclosedTag}));
  EXPECT_EQ(Kinds(Decode("<Plaintiff>He <Trigger>sue</Trigger></Plaintiff>", y, Toy())),
            (std::vector<DecodeIssueKind>{DecodeIssueKind::kNestedTag}));
  EXPECT_EQ(Kinds(Decode("<Plaintiff>He</Plaintiff> <Plaintiff>She</Plaintiff> <Trigger>sue</Trigger>",
                         y, Toy())),
            (std::vector<DecodeIssueKind>{DecodeIssueKind::kDuplicateRole}));
  EXPECT_EQ(Kinds(Decode("<Trigger>sue</Trigger> <Crime>fraud</Crime>", y, Toy())),
            (std::vector<DecodeIssueKind>{DecodeIssueKind::kUnassignedArgument}));
  EXPECT_EQ(Kinds(Decode("<Trigger7>sue</Trigger7>", y, Toy())),
            (std::vector<DecodeIssueKind>{DecodeIssueKind::kUnassignedArgument}));
}

TEST(DecodeTest, NestedTagKeepsTheInnerSpan) {
  const auto r =
      Decode("<Plaintiff>He <Trigger>sue</Trigger></Plaintiff>", SueStructure(), Toy());
  EXPECT_EQ(r.passage.text, "He sue");
  ASSERT_EQ(r.passage.spans.size(), 2u);  // inner trigger, plus Plaintiff found by search
  EXPECT_EQ(r.passage.spans[1], (Span{3, 6, SpanLabel::Trigger(), 0}));
}

TEST(DecodeTest, RelationTags) {
  TargetStructure y;
  y.task = Task::kRelation;
  y.relation = {"Lumen Software", "Elena Petrova", "org:founded_by"};
  const auto r = Decode(
      "<Subject>Lumen Software</Subject> was started by <Object>Elena Petrova</Object>.", y,
      Ontology());
  EXPECT_TRUE(r.issues.empty());
  ASSERT_EQ(r.passage.spans.size(), 2u);
  EXPECT_EQ(r.passage.spans[1].label, SpanLabel::Role("Object"));
}

TEST(DecodeTest, LessThanSignsThatAreNotTagsStayInText) {
  const auto r = Decode("a < b <3 <Trigger>sue</Trigger>", SueStructure(), Toy());
  EXPECT_EQ(r.passage.text, "a < b <3 sue");
}

TEST(FindSubsequenceTest, ScalarOffsets) {
  EXPECT_EQ(FindSubsequence("sue", "\xC3\xA9 sue"), std::make_pair(size_t{2}, size_t{5}));
  EXPECT_FALSE(FindSubsequence("", "abc"));
  EXPECT_FALSE(FindSubsequence("x", "abc"));
  EXPECT_EQ(CountOccurrences("aa", "aaaa"), 2u);
  EXPECT_EQ(SpanText("\xC3\xA9t\xC3\xA9", 1, 3), "t\xC3\xA9");
}

TEST(SpanCodecPropertyTest, DecodeInvertsEncode) {
  Rng rng(20260101);
  for (int i = 0; i < 300; ++i) {
    const auto g = testing::RandomAnnotatedPassage(rng, Toy());
    const std::string tagged = Encode(g.passage);
    const auto r = Decode(tagged, g.expected, Toy());
    ASSERT_TRUE(r.issues.empty()) << tagged;
    ASSERT_EQ(r.passage, g.passage) << tagged;
  }
}

TEST(SpanCodecPropertyTest, DecodeNeverThrowsOnNoise) {
  Rng rng(99);
  const TargetStructure y = SueStructure();
  for (int i = 0; i < 2000; ++i) {
    const std::string input = testing::RandomTaggedNoise(rng);
    EXPECT_NO_THROW(Decode(input, y, Toy())) << input;
  }
}

}  // namespace
}  // namespace starforge
