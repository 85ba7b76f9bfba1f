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

#include "core/refine.h"

#include <algorithm>
#include <optional>
#include <set>

#include "core/error.h"
#include "core/prompts.h"
#include "core/span_codec.h"
#include "core/text.h"

namespace starforge {

namespace {

constexpr Strategy kAllChecks[] = {Strategy::kRuleBased,
                                   Strategy::kReflectEntailment,
                                   Strategy::kReflectLLM};

}  // namespace

std::string StrategyName(Strategy strategy) {
  switch (strategy) {
    case Strategy::kNoCheck: return "none";
    case Strategy::kRuleBased: return "rule-based";
    case Strategy::kReflectEntailment: return "reflect-entailment";
    case Strategy::kReflectLLM: return "reflect-llm";
  }
  return "none";
}

Strategy ParseStrategy(const std::string &name) {
  for (Strategy s : {Strategy::kNoCheck, Strategy::kRuleBased,
                     Strategy::kReflectEntailment, Strategy::kReflectLLM}) {
    if (StrategyName(s) == name) return s;
  }
  Fail(ErrorCode::kConfig, "unknown strategy '" + name +
                               "' (expected none, rule-based, "
                               "reflect-entailment or reflect-llm)");
}

std::string DimensionName(DimensionId id) {
  static const char *kNames[] = {"EE1", "EE2", "EE3", "EE4", "EE5",
                                 "EE6", "RE1", "RE2", "RE3"};
  return kNames[static_cast<int>(id)];
}

DimensionId ParseDimension(const std::string &name) {
  for (const auto &d : QualityDimensions()) {
    if (DimensionName(d.id) == name) return d.id;
  }
  Fail(ErrorCode::kParse, "unknown quality dimension '" + name + "'");
}

const std::vector<QualityDimension> &QualityDimensions() {
  static const std::vector<QualityDimension> kDims = {
      {DimensionId::kEE1,
       "Does '{mention}' appear in the passage?",
       "The passage mentions '{mention}'.",
       "The passage does not contain '{mention}', include '{mention}' verbatim "
       "in the passage.",
       false,
       {std::begin(kAllChecks), std::end(kAllChecks)}},
      {DimensionId::kEE2,
       "Is '{trigger}' used to describe an occurrence of a {event_type} event?",
       "'{trigger}' describes an occurrence of a {event_type} event.",
       "The trigger '{trigger}' does not describe a {event_type} event, revise "
       "the passage so that '{trigger}' initiates a {event_type} event.",
       false,
       {Strategy::kReflectEntailment, Strategy::kReflectLLM}},
      {DimensionId::kEE3,
       "Is '{mention}' a participant or attribute of the event triggered by "
       "'{trigger}'?",
       "'{mention}' is a participant or attribute of the event triggered by "
       "'{trigger}'.",
       "The argument '{mention}' is not involved in the event triggered by "
       "'{trigger}', revise the passage so that '{mention}' takes part in "
       "that event.",
       false,
       {Strategy::kReflectEntailment, Strategy::kReflectLLM}},
      {DimensionId::kEE4,
       "Is '{mention}' a {role} argument describing the event triggered by "
       "'{trigger}'?",
       "'{mention}' is the {role} of the event triggered by '{trigger}'.",
       "The argument '{mention}' does not serve as the {role} argument, revise "
       "the passage so that '{mention}' is the {role} of the event triggered "
       "by '{trigger}'.",
       false,
       {std::begin(kAllChecks), std::end(kAllChecks)}},
      {DimensionId::kEE5,
       "Does the passage contain information that could serve as the {role} "
       "argument of the event triggered by '{trigger}'?",
       "The passage contains information about the {role} of the event "
       "triggered by '{trigger}'.",
       "The passage contains a hallucinated argument {role} incorrectly, "
       "remove {role} information for event triggered by '{trigger}'.",
       true,
       {Strategy::kReflectEntailment, Strategy::kReflectLLM}},
      {DimensionId::kEE6,
       "Is the part of speech of '{mention}' appropriate for the {role} "
       "argument?",
       "The part of speech of '{mention}' is appropriate for the {role} "
       "argument.",
       "The argument '{mention}' is tagged {detail}, which does not fit the "
       "{role} argument, revise how '{mention}' is used in the passage.",
       false,
       {std::begin(kAllChecks), std::end(kAllChecks)}},
      {DimensionId::kRE1,
       "Does '{mention}' appear in the passage?",
       "The passage mentions '{mention}'.",
       "The passage does not contain '{mention}', include '{mention}' verbatim "
       "in the passage.",
       false,
       {std::begin(kAllChecks), std::end(kAllChecks)}},
      {DimensionId::kRE2,
       "Is there a relation between '{subject}' and '{object}' in the passage?",
       "'{subject}' and '{object}' are related.",
       "The passage does not relate '{subject}' to '{object}', revise the "
       "passage to connect them.",
       false,
       {Strategy::kReflectEntailment, Strategy::kReflectLLM}},
      {DimensionId::kRE3,
       "Does the passage express that '{subject}' has the {relation} relation "
       "with '{object}'?",
       "'{subject}' has the {relation} relation with '{object}'.",
       "The passage does not express the {relation} relation between "
       "'{subject}' and '{object}', revise the passage so that it does.",
       false,
       {Strategy::kReflectEntailment, Strategy::kReflectLLM}},
  };
  return kDims;
}

const QualityDimension &Dimension(DimensionId id) {
  return QualityDimensions()[static_cast<size_t>(id)];
}

ojson ToJson(const QualityFlag &flag) {
  return {{"dimension", DimensionName(flag.dimension)},
          {"event_index", flag.event_index},
          {"target", flag.target},
          {"mention", flag.mention},
          {"detail", flag.detail}};
}

QualityFlag QualityFlagFromJson(const ojson &j) {
  try {
    QualityFlag f;
    f.dimension = ParseDimension(j.at("dimension").get<std::string>());
    f.event_index = j.at("event_index").get<int>();
    f.target = j.at("target").get<std::string>();
    f.mention = j.value("mention", std::string());
    f.detail = j.value("detail", std::string());
    return f;
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kParse, std::string("quality flag: ") + e.what());
  }
}

std::string FillTemplate(const std::string &tmpl, const QuestionFields &fields) {
  const std::pair<const char *, const std::string *> slots[] = {
      {"event_type", &fields.event_type}, {"trigger", &fields.trigger},
      {"role", &fields.role},             {"mention", &fields.mention},
      {"subject", &fields.subject},       {"object", &fields.object},
      {"relation", &fields.relation},     {"detail", &fields.detail},
  };
  std::string out;
  size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] != '{') {
      out += tmpl[i++];
      continue;
    }
    const size_t close = tmpl.find('}', i);
    if (close == std::string::npos) {
      out += tmpl.substr(i);
      break;
    }
    const std::string name = tmpl.substr(i + 1, close - i - 1);
    const std::string *value = nullptr;
    for (const auto &[slot, v] : slots) {
      if (name == slot) value = v;
    }
    if (value == nullptr) {
      Fail(ErrorCode::kInvalidArgument, "unknown template field {" + name + "}");
    }
    if (value->empty()) {
      Fail(ErrorCode::kMissingField, "template needs a value for {" + name + "}");
    }
    out += *value;
    i = close + 1;
  }
  return out;
}

std::string BuildReflectionQuestion(DimensionId dim, const QuestionFields &fields) {
  return FillTemplate(Dimension(dim).question_template, fields);
}

std::string BuildReflectionPrompt(const std::string &passage,
                                  const std::string &question) {
  return "Read the passage and answer the question. Start your answer with "
         "yes or no.\n\nPassage: " +
         passage + "\n\nQuestion: " + question;
}

bool StandardizeResponse(const std::string &answer, AnswerStandardizer &checker) {
  return checker.IsAffirmative(answer);
}

QuestionFields FieldsOf(const QualityFlag &flag, const TargetStructure &y) {
  QuestionFields f;
  f.mention = flag.mention;
  f.detail = flag.detail;
  if (y.task == Task::kRelation) {
    f.subject = y.relation.subject;
    f.object = y.relation.object;
    f.relation = y.relation.relation;
    return f;
  }
  if (flag.event_index >= 0 &&
      static_cast<size_t>(flag.event_index) < y.events.size()) {
    const EventSpec &e = y.events[flag.event_index];
    f.event_type = e.event_type;
    f.trigger = e.trigger;
  }
  if (flag.target != "Trigger") f.role = flag.target;
  return f;
}

std::string RenderFeedback(const std::vector<QualityFlag> &flags,
                           const TargetStructure &y) {
  std::vector<QualityFlag> ordered = flags;
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const QualityFlag &a, const QualityFlag &b) {
                     if (a.event_index != b.event_index) {
                       return a.event_index < b.event_index;
                     }
                     return a.dimension < b.dimension;
                   });
  std::vector<std::string> sentences;
  for (const auto &flag : ordered) {
    sentences.push_back(
        FillTemplate(Dimension(flag.dimension).feedback_template, FieldsOf(flag, y)));
  }
  return Join(sentences, "\n");
}

namespace {

// One check to run: a dimension applied to one slot of the structure.
struct Probe {
  DimensionId dim;
  int event_index;
  std::string target;
  std::string mention;
  QuestionFields fields;
};

std::vector<Probe> ReflectionProbes(const TargetStructure &y) {
  std::vector<Probe> probes;
  if (y.task == Task::kRelation) {
    QuestionFields base;
    base.subject = y.relation.subject;
    base.object = y.relation.object;
    base.relation = y.relation.relation;
    for (const auto &[target, mention] :
         {std::pair<std::string, std::string>{std::string(kSubjectRole),
                                              y.relation.subject},
          {std::string(kObjectRole), y.relation.object}}) {
      QuestionFields f = base;
      f.mention = mention;
      probes.push_back({DimensionId::kRE1, 0, target, mention, f});
    }
    probes.push_back({DimensionId::kRE2, 0, "Relation", "", base});
    probes.push_back({DimensionId::kRE3, 0, "Relation", "", base});
    return probes;
  }
  for (size_t i = 0; i < y.events.size(); ++i) {
    const EventSpec &e = y.events[i];
    const int ei = static_cast<int>(i);
    QuestionFields base;
    base.event_type = e.event_type;
    base.trigger = e.trigger;
    {
      QuestionFields f = base;
      f.mention = e.trigger;
      probes.push_back({DimensionId::kEE1, ei, "Trigger", e.trigger, f});
      probes.push_back({DimensionId::kEE2, ei, "Trigger", e.trigger, f});
    }
    for (const auto &arg : e.args) {
      QuestionFields f = base;
      f.role = arg.role;
      if (arg.mention) {
        f.mention = *arg.mention;
        probes.push_back({DimensionId::kEE1, ei, arg.role, *arg.mention, f});
        probes.push_back({DimensionId::kEE3, ei, arg.role, *arg.mention, f});
        probes.push_back({DimensionId::kEE4, ei, arg.role, *arg.mention, f});
      } else {
        probes.push_back({DimensionId::kEE5, ei, arg.role, "", f});
      }
    }
  }
  return probes;
}

std::vector<Probe> SubsequenceProbes(const TargetStructure &y) {
  std::vector<Probe> out;
  for (auto &p : ReflectionProbes(y)) {
    if (p.dim == DimensionId::kEE1 || p.dim == DimensionId::kRE1) {
      out.push_back(std::move(p));
    }
  }
  return out;
}

QualityFlag FlagOf(const Probe &p, std::string detail) {
  return {p.dim, p.event_index, p.target, p.mention, std::move(detail)};
}

// Scalar offsets of each token, matched left to right; nullopt when a token
// cannot be found.
std::vector<std::optional<std::pair<size_t, size_t>>> AlignTokens(
    const std::u32string &text, const std::vector<std::string> &tokens) {
  std::vector<std::optional<std::pair<size_t, size_t>>> out;
  size_t cursor = 0;
  for (const auto &tok : tokens) {
    const std::u32string t = Utf8ToCodepoints(tok);
    const size_t at = t.empty() ? std::u32string::npos : text.find(t, cursor);
    if (at == std::u32string::npos) {
      out.push_back(std::nullopt);
      continue;
    }
    out.push_back(std::make_pair(at, at + t.size()));
    cursor = at + t.size();
  }
  return out;
}

std::optional<std::pair<size_t, size_t>> LocateMention(const AnnotatedPassage &x,
                                                       int event_index,
                                                       const std::string &role,
                                                       const std::string &mention) {
  for (const auto &s : x.spans) {
    if (s.event_index == event_index && !s.label.is_trigger && s.label.role == role) {
      return std::make_pair(s.start, s.end);
    }
  }
  return FindSubsequence(mention, x.text);
}

// Index of the last token inside [start, end), the mention's head.
std::optional<size_t> HeadToken(
    const std::vector<std::optional<std::pair<size_t, size_t>>> &aligned,
    size_t start, size_t end) {
  std::optional<size_t> head;
  for (size_t i = 0; i < aligned.size(); ++i) {
    if (aligned[i] && aligned[i]->first < end && aligned[i]->second > start) head = i;
  }
  return head;
}

std::string StripBio(const std::string &tag) {
  if (tag.size() > 2 && tag[1] == '-' &&
      (tag[0] == 'B' || tag[0] == 'I' || tag[0] == 'E' || tag[0] == 'S' ||
       tag[0] == 'L' || tag[0] == 'U')) {
    return tag.substr(2);
  }
  return tag;
}

void TaggerChecks(const TargetStructure &y, const AnnotatedPassage &x,
                  const RefineContext &ctx, bool entity_check,
                  std::vector<QualityFlag> &flags) {
  if (ctx.checkers == nullptr || !ctx.checkers->tagger || y.task != Task::kEvent) {
    return;
  }
  const bool pos_check = !ctx.checkers->expected_pos.empty();
  if (!pos_check && !entity_check) return;
  const TaggedText tagged = ctx.checkers->tagger->Tag(x.text);
  const auto aligned = AlignTokens(Utf8ToCodepoints(x.text), tagged.tokens);
  const auto &expected = ctx.checkers->expected_pos;
  for (size_t i = 0; i < y.events.size(); ++i) {
    const EventSpec &e = y.events[i];
    for (const auto &arg : e.args) {
      if (!arg.mention) continue;
      const auto where = LocateMention(x, static_cast<int>(i), arg.role, *arg.mention);
      if (!where) continue;
      const auto head = HeadToken(aligned, where->first, where->second);
      if (!head) continue;
      Probe p{DimensionId::kEE6, static_cast<int>(i), arg.role, *arg.mention, {}};
      if (pos_check) {
        auto it = expected.find(arg.role);
        if (it == expected.end()) it = expected.find("*");
        if (it != expected.end()) {
          const std::string &tag = tagged.pos_tags[*head];
          if (std::find(it->second.begin(), it->second.end(), tag) == it->second.end()) {
            flags.push_back(FlagOf(p, tag));
          }
        }
      }
      if (entity_check && !tagged.entity_tags.empty() && ctx.ontology != nullptr) {
        const std::string entity = StripBio(tagged.entity_tags[*head]);
        const ArgumentRoleSpec *role =
            ctx.ontology->EventType(e.event_type).FindRole(arg.role);
        if (entity != "O" && !entity.empty() && role != nullptr &&
            !role->Allows(entity)) {
          p.dim = DimensionId::kEE4;
          flags.push_back(FlagOf(p, "recognized as " + entity));
        }
      }
    }
  }
}

bool Affirmed(const Probe &p, const AnnotatedPassage &x, const RefineContext &ctx) {
  const QualityDimension &dim = Dimension(p.dim);
  if (ctx.strategy == Strategy::kReflectEntailment) {
    return ctx.checkers->entailment
        ->Judge(x.text, FillTemplate(dim.statement_template, p.fields))
        .entailed;
  }
  const std::string question = FillTemplate(dim.question_template, p.fields);
  const ChatResponse answer = ctx.backend->Complete(
      ctx.settings.Judgment({{"user", BuildReflectionPrompt(x.text, question)}}));
  return StandardizeResponse(answer.text, *ctx.checkers->standardizer);
}

std::vector<QualityFlag> Dedup(std::vector<QualityFlag> flags) {
  std::vector<QualityFlag> out;
  std::set<std::tuple<DimensionId, int, std::string>> seen;
  for (auto &f : flags) {
    if (seen.insert(f.Key()).second) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace

std::vector<QualityFlag> IdentifyErrors(const TargetStructure &y,
                                        const AnnotatedPassage &x,
                                        const RefineContext &ctx) {
  std::vector<QualityFlag> flags;
  switch (ctx.strategy) {
    case Strategy::kNoCheck:
      return flags;
    case Strategy::kRuleBased:
      for (const auto &p : SubsequenceProbes(y)) {
        if (!FindSubsequence(p.mention, x.text)) {
          flags.push_back(FlagOf(p, "not found in passage"));
        }
      }
      TaggerChecks(y, x, ctx, /*entity_check=*/true, flags);
      return Dedup(std::move(flags));
    case Strategy::kReflectEntailment:
      if (ctx.checkers == nullptr || !ctx.checkers->entailment) {
        Fail(ErrorCode::kCheckerUnavailable,
             "strategy reflect-entailment needs an entailment checker");
      }
      break;
    case Strategy::kReflectLLM:
      if (ctx.backend == nullptr) {
        Fail(ErrorCode::kCheckerUnavailable, "strategy reflect-llm needs a backend");
      }
      if (ctx.checkers == nullptr || !ctx.checkers->standardizer) {
        Fail(ErrorCode::kCheckerUnavailable,
             "strategy reflect-llm needs an answer standardizer");
      }
      break;
  }
  for (const auto &p : ReflectionProbes(y)) {
    const bool affirmed = Affirmed(p, x, ctx);
    if (affirmed == Dimension(p.dim).flag_when_affirmed) {
      flags.push_back(FlagOf(p, affirmed ? "answered yes" : "answered no"));
    }
  }
  TaggerChecks(y, x, ctx, /*entity_check=*/false, flags);
  return Dedup(std::move(flags));
}

std::string StopReasonName(StopReason reason) {
  switch (reason) {
    case StopReason::kClean: return "Clean";
    case StopReason::kMaxIterations: return "MaxIterations";
    case StopReason::kNoProgress: return "NoProgress";
  }
  return "Clean";
}

StopReason ParseStopReason(const std::string &name) {
  for (StopReason r :
       {StopReason::kClean, StopReason::kMaxIterations, StopReason::kNoProgress}) {
    if (StopReasonName(r) == name) return r;
  }
  Fail(ErrorCode::kParse, "unknown stop reason '" + name + "'");
}

std::vector<ChatMessage> BuildRevisionMessages(const std::string &generation_prompt,
                                               const std::string &previous_tagged,
                                               const std::string &feedback) {
  return {{"user", generation_prompt},
          {"assistant", "Passage: " + previous_tagged},
          {"user", "Feedback:\n" + feedback +
                       "\n\nRevise the passage to address the feedback. Keep the "
                       "tags and reply with the revised passage only, starting "
                       "with \"Passage:\"."}};
}

namespace {

bool SameKeys(const std::vector<QualityFlag> &a, const std::vector<QualityFlag> &b) {
  std::set<std::tuple<DimensionId, int, std::string>> ka, kb;
  for (const auto &f : a) ka.insert(f.Key());
  for (const auto &f : b) kb.insert(f.Key());
  return ka == kb;
}

}  // namespace

void Refine(const TargetStructure &y, const AnnotatedPassage &x0,
            const std::string &generation_prompt, const RefineContext &ctx,
            RefinementTrace &trace) {
  if (ctx.max_iterations < 0) {
    Fail(ErrorCode::kInvalidArgument, "max_iterations must be >= 0");
  }
  trace = RefinementTrace{};
  trace.versions.push_back(x0);
  trace.flags_per_iteration.push_back(IdentifyErrors(y, x0, ctx));
  while (true) {
    const auto &flags = trace.flags_per_iteration.back();
    if (flags.empty()) {
      trace.stop_reason = StopReason::kClean;
      return;
    }
    if (trace.t >= 1 &&
        SameKeys(flags, trace.flags_per_iteration[trace.t - 1])) {
      trace.stop_reason = StopReason::kNoProgress;
      return;
    }
    if (trace.t >= ctx.max_iterations) {
      trace.stop_reason = StopReason::kMaxIterations;
      return;
    }
    if (ctx.backend == nullptr || ctx.ontology == nullptr) {
      Fail(ErrorCode::kInvalidArgument, "revision needs a backend and an ontology");
    }
    const std::string feedback = RenderFeedback(flags, y);
    const ChatResponse reply = ctx.backend->Complete(ctx.settings.Generation(
        BuildRevisionMessages(generation_prompt, Encode(trace.versions.back()),
                              feedback)));
    DecodeReport report = Decode(ExtractPassage(reply.text), y, *ctx.ontology);
    trace.versions.push_back(std::move(report.passage));
    trace.t += 1;
    trace.flags_per_iteration.push_back(
        IdentifyErrors(y, trace.versions.back(), ctx));
  }
}

}  // namespace starforge
