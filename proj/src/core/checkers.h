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

// External judges used while refining passages: an entailment checker, a
// token tagger, and answer standardizers that reduce a free-form reflection
// answer to yes/no.

#ifndef STAR_FORGE_CORE_CHECKERS_H_
#define STAR_FORGE_CORE_CHECKERS_H_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "core/http_backend.h"
#include "json.hpp"

namespace starforge {

// The phrase an affirmative answer must entail.
inline constexpr const char *kConfirmativePhrase = "Yes, it is.";

struct EntailmentVerdict {
  bool entailed = false;
  double score = 0.0;
};

class EntailmentChecker {
 public:
  virtual ~EntailmentChecker() = default;
  virtual EntailmentVerdict Judge(const std::string &premise,
                                  const std::string &hypothesis) = 0;
};

// POST {premise, hypothesis} -> {entailed, score}. Any transport or protocol
// failure raises Error(kCheckerUnavailable).
class HttpEntailmentChecker : public EntailmentChecker {
 public:
  HttpEntailmentChecker(std::string url, int timeout_ms);
  EntailmentVerdict Judge(const std::string &premise,
                          const std::string &hypothesis) override;

 private:
  std::string base_;
  std::string path_;
  int timeout_ms_;
};

// Key of a recorded judgment.
std::string JudgmentKey(const std::string &premise, const std::string &hypothesis);

// Serves verdicts from a JSONL judgment cassette of
// {key, premise, hypothesis, entailed, score}. Unknown pairs raise
// Error(kCassetteMiss).
class ReplayEntailmentChecker : public EntailmentChecker {
 public:
  static std::unique_ptr<ReplayEntailmentChecker> FromFile(const std::string &path);
  EntailmentVerdict Judge(const std::string &premise,
                          const std::string &hypothesis) override;

 private:
  std::map<std::string, EntailmentVerdict> verdicts_;
};

// Forwards to a live checker and appends each verdict to a judgment cassette.
class RecordingEntailmentChecker : public EntailmentChecker {
 public:
  RecordingEntailmentChecker(std::shared_ptr<EntailmentChecker> live,
                             std::string path);
  EntailmentVerdict Judge(const std::string &premise,
                          const std::string &hypothesis) override;

 private:
  std::shared_ptr<EntailmentChecker> live_;
  std::string path_;
  std::mutex mu_;
};

struct TaggedText {
  std::vector<std::string> tokens;
  std::vector<std::string> pos_tags;
  std::vector<std::string> entity_tags;  // optional; empty when not provided
};

class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual TaggedText Tag(const std::string &text) = 0;
};

// POST {text} -> {tokens, pos_tags[, entity_tags]}.
class HttpTagger : public Tagger {
 public:
  HttpTagger(std::string url, int timeout_ms);
  TaggedText Tag(const std::string &text) override;

 private:
  std::string base_;
  std::string path_;
  int timeout_ms_;
};

class AnswerStandardizer {
 public:
  virtual ~AnswerStandardizer() = default;
  // True iff `answer` affirms the question it responds to.
  virtual bool IsAffirmative(const std::string &answer) = 0;
};

// First sentence carries an affirmation and no negation or hedge.
class LexicalStandardizer : public AnswerStandardizer {
 public:
  bool IsAffirmative(const std::string &answer) override;
};

// Asks an entailment checker whether the answer entails kConfirmativePhrase.
class EntailmentStandardizer : public AnswerStandardizer {
 public:
  explicit EntailmentStandardizer(std::shared_ptr<EntailmentChecker> checker)
      : checker_(std::move(checker)) {}
  bool IsAffirmative(const std::string &answer) override;

 private:
  std::shared_ptr<EntailmentChecker> checker_;
};

// First sentence of `text`: up to the first '.', '!' or '?' followed by
// whitespace or the end, or the first newline.
std::string FirstSentence(const std::string &text);

struct CheckerConfig {
  struct Endpoint {
    std::string url;
    BackendMode mode = BackendMode::kLive;
    std::string cassette_path;  // entailment only
    int timeout_ms = 30000;
  };
  std::optional<Endpoint> entailment;
  std::optional<Endpoint> tagger;
  // Allowed POS tags for the head token of an argument mention, by role; the
  // "*" entry applies to roles without their own entry.
  std::map<std::string, std::vector<std::string>> expected_pos;
  std::string standardizer = "lexical";  // lexical | entailment

  // Throws Error(kConfig).
  void Validate() const;
  static CheckerConfig FromJson(const nlohmann::json &j);
  nlohmann::json ToJson() const;
};

struct Checkers {
  std::shared_ptr<EntailmentChecker> entailment;  // may be null
  std::shared_ptr<Tagger> tagger;                 // may be null
  std::shared_ptr<AnswerStandardizer> standardizer;
  std::map<std::string, std::vector<std::string>> expected_pos;

  static Checkers Make(const CheckerConfig &config);
};

}  // namespace starforge

#endif  // STAR_FORGE_CORE_CHECKERS_H_
