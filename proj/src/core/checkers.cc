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

#include "core/checkers.h"

#include <fstream>
#include <set>

#include "core/digest.h"
#include "core/error.h"
#include "core/io.h"
#include "core/text.h"
#include "httplib.h"

namespace starforge {

using json = nlohmann::json;

namespace {

json PostJson(const std::string &base, const std::string &path, int timeout_ms,
              const json &body, const std::string &what) {
  httplib::Client client(base);
  const auto timeout = std::chrono::milliseconds(timeout_ms);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  auto result = client.Post(path, body.dump(), "application/json");
  if (!result) {
    Fail(ErrorCode::kCheckerUnavailable,
         what + " unreachable: " + httplib::to_string(result.error()));
  }
  if (result->status != 200) {
    Fail(ErrorCode::kCheckerUnavailable,
         what + " returned HTTP " + std::to_string(result->status));
  }
  try {
    return json::parse(result->body);
  } catch (const json::exception &e) {
    Fail(ErrorCode::kCheckerUnavailable, what + " sent invalid JSON: " + e.what());
  }
}

std::vector<std::string> Words(const std::string &sentence) {
  std::string text;
  // Fold the typographic apostrophe so "isn’t" is caught as a negation.
  for (size_t i = 0; i < sentence.size(); ++i) {
    if (sentence.compare(i, 3, "\xE2\x80\x99") == 0) {
      text += '\'';
      i += 2;
    } else {
      text += sentence[i];
    }
  }
  text = AsciiLower(text);
  std::vector<std::string> words;
  std::string cur;
  for (char c : text) {
    if ((c >= 'a' && c <= 'z') || c == '\'') {
      cur += c;
    } else if (!cur.empty()) {
      words.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(cur);
  return words;
}

bool EndsWith(const std::string &s, const std::string &suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

HttpEntailmentChecker::HttpEntailmentChecker(std::string url, int timeout_ms)
    : timeout_ms_(timeout_ms) {
  std::tie(base_, path_) = SplitUrl(url);
}

EntailmentVerdict HttpEntailmentChecker::Judge(const std::string &premise,
                                               const std::string &hypothesis) {
  json reply = PostJson(base_, path_, timeout_ms_,
                        {{"premise", premise}, {"hypothesis", hypothesis}},
                        "entailment checker");
  try {
    return {reply.at("entailed").get<bool>(), reply.value("score", 0.0)};
  } catch (const json::exception &e) {
    Fail(ErrorCode::kCheckerUnavailable,
         std::string("entailment checker reply: ") + e.what());
  }
}

std::string JudgmentKey(const std::string &premise, const std::string &hypothesis) {
  return Sha256Hex(json{{"premise", premise}, {"hypothesis", hypothesis}}.dump());
}

std::unique_ptr<ReplayEntailmentChecker> ReplayEntailmentChecker::FromFile(
    const std::string &path) {
  auto checker = std::make_unique<ReplayEntailmentChecker>();
  for (const auto &line : ReadNonEmptyLines(path)) {
    try {
      json j = json::parse(line);
      std::string key = j.contains("key")
                            ? j.at("key").get<std::string>()
                            : JudgmentKey(j.at("premise").get<std::string>(),
                                          j.at("hypothesis").get<std::string>());
      checker->verdicts_[key] = {j.at("entailed").get<bool>(),
                                 j.value("score", 0.0)};
    } catch (const json::exception &e) {
      Fail(ErrorCode::kParse, path + ": " + e.what());
    }
  }
  return checker;
}

EntailmentVerdict ReplayEntailmentChecker::Judge(const std::string &premise,
                                                 const std::string &hypothesis) {
  const std::string key = JudgmentKey(premise, hypothesis);
  auto it = verdicts_.find(key);
  if (it == verdicts_.end()) {
    Fail(ErrorCode::kCassetteMiss, "no recorded judgment for key " + key);
  }
  return it->second;
}

RecordingEntailmentChecker::RecordingEntailmentChecker(
    std::shared_ptr<EntailmentChecker> live, std::string path)
    : live_(std::move(live)), path_(std::move(path)) {}

EntailmentVerdict RecordingEntailmentChecker::Judge(const std::string &premise,
                                                    const std::string &hypothesis) {
  EntailmentVerdict v = live_->Judge(premise, hypothesis);
  json line = {{"key", JudgmentKey(premise, hypothesis)},
               {"premise", premise},
               {"hypothesis", hypothesis},
               {"entailed", v.entailed},
               {"score", v.score}};
  std::lock_guard<std::mutex> lock(mu_);
  std::ofstream out(path_, std::ios::app | std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot append to " + path_);
  out << line.dump() << '\n';
  return v;
}

HttpTagger::HttpTagger(std::string url, int timeout_ms) : timeout_ms_(timeout_ms) {
  std::tie(base_, path_) = SplitUrl(url);
}

TaggedText HttpTagger::Tag(const std::string &text) {
  json reply = PostJson(base_, path_, timeout_ms_, {{"text", text}}, "tagger");
  try {
    TaggedText t;
    t.tokens = reply.at("tokens").get<std::vector<std::string>>();
    t.pos_tags = reply.at("pos_tags").get<std::vector<std::string>>();
    if (reply.contains("entity_tags")) {
      t.entity_tags = reply.at("entity_tags").get<std::vector<std::string>>();
    }
    if (t.pos_tags.size() != t.tokens.size() ||
        (!t.entity_tags.empty() && t.entity_tags.size() != t.tokens.size())) {
      Fail(ErrorCode::kCheckerUnavailable, "tagger returned misaligned tags");
    }
    return t;
  } catch (const json::exception &e) {
    Fail(ErrorCode::kCheckerUnavailable, std::string("tagger reply: ") + e.what());
  }
}

std::string FirstSentence(const std::string &text) {
  const std::string t = Trim(text);
  for (size_t i = 0; i < t.size(); ++i) {
    const char c = t[i];
    if (c == '\n') return Trim(t.substr(0, i));
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 == t.size() || t[i + 1] == ' ' || t[i + 1] == '\n' ||
         t[i + 1] == '\t' || t[i + 1] == '\r')) {
      return t.substr(0, i + 1);
    }
  }
  return t;
}

bool LexicalStandardizer::IsAffirmative(const std::string &answer) {
  static const std::set<std::string> kAffirm = {
      "yes",     "yeah",       "yep",         "yup",  "correct", "indeed",
      "certainly", "absolutely", "definitely", "true", "right",   "affirmative",
      "exactly", "sure"};
  static const std::set<std::string> kNegate = {
      "no",   "not",     "never",   "neither", "nor",  "none",
      "nope", "cannot",  "nothing", "nobody",  "false", "incorrect"};
  static const std::set<std::string> kHedge = {
      "might",   "may",     "possibly", "perhaps", "maybe",
      "unclear", "uncertain", "probably", "likely", "could", "unsure"};
  static const std::set<std::string> kCopulaSubjects = {"it", "that", "this",
                                                        "they", "he", "she"};
  static const std::set<std::string> kCopulas = {"is", "does", "was", "are",
                                                 "did", "appears"};

  const std::vector<std::string> words = Words(FirstSentence(answer));
  bool affirm = false;
  for (size_t i = 0; i < words.size(); ++i) {
    const std::string &w = words[i];
    if (kNegate.count(w) || EndsWith(w, "n't")) return false;
    if (kHedge.count(w)) return false;
    if (kAffirm.count(w)) affirm = true;
    if (i + 1 < words.size() && kCopulaSubjects.count(w) &&
        kCopulas.count(words[i + 1])) {
      affirm = true;
    }
  }
  return affirm;
}

bool EntailmentStandardizer::IsAffirmative(const std::string &answer) {
  return checker_->Judge(answer, kConfirmativePhrase).entailed;
}

void CheckerConfig::Validate() const {
  for (const auto *ep : {&entailment, &tagger}) {
    if (*ep && (*ep)->mode != BackendMode::kReplay && (*ep)->url.empty()) {
      Fail(ErrorCode::kConfig, "checker endpoint needs a url");
    }
  }
  if (entailment && entailment->mode != BackendMode::kLive &&
      entailment->cassette_path.empty()) {
    Fail(ErrorCode::kConfig, "entailment record/replay needs a cassette_path");
  }
  if (tagger && tagger->mode != BackendMode::kLive) {
    Fail(ErrorCode::kConfig, "the tagger supports live mode only");
  }
  if (standardizer != "lexical" && standardizer != "entailment") {
    Fail(ErrorCode::kConfig, "standardizer must be lexical or entailment");
  }
}

namespace {

CheckerConfig::Endpoint EndpointFromJson(const json &j) {
  CheckerConfig::Endpoint ep;
  ep.url = j.value("url", std::string());
  ep.mode = ParseBackendMode(j.value("mode", std::string("live")));
  ep.cassette_path = j.value("cassette_path", std::string());
  ep.timeout_ms = j.value("timeout_ms", ep.timeout_ms);
  return ep;
}

json EndpointToJson(const CheckerConfig::Endpoint &ep) {
  json j = {{"url", ep.url},
            {"mode", BackendModeName(ep.mode)},
            {"timeout_ms", ep.timeout_ms}};
  if (!ep.cassette_path.empty()) j["cassette_path"] = ep.cassette_path;
  return j;
}

}  // namespace

CheckerConfig CheckerConfig::FromJson(const json &j) {
  CheckerConfig c;
  try {
    if (j.contains("entailment") && !j.at("entailment").is_null()) {
      c.entailment = EndpointFromJson(j.at("entailment"));
    }
    if (j.contains("tagger") && !j.at("tagger").is_null()) {
      c.tagger = EndpointFromJson(j.at("tagger"));
    }
    if (j.contains("expected_pos")) {
      c.expected_pos =
          j.at("expected_pos").get<std::map<std::string, std::vector<std::string>>>();
    }
    c.standardizer = j.value("standardizer", c.standardizer);
  } catch (const json::exception &e) {
    Fail(ErrorCode::kConfig, std::string("checker config: ") + e.what());
  }
  return c;
}

json CheckerConfig::ToJson() const {
  json j = json::object();
  if (entailment) j["entailment"] = EndpointToJson(*entailment);
  if (tagger) j["tagger"] = EndpointToJson(*tagger);
  if (!expected_pos.empty()) j["expected_pos"] = expected_pos;
  j["standardizer"] = standardizer;
  return j;
}

Checkers Checkers::Make(const CheckerConfig &config) {
  config.Validate();
  Checkers c;
  if (config.entailment) {
    const auto &ep = *config.entailment;
    switch (ep.mode) {
      case BackendMode::kReplay:
        c.entailment = ReplayEntailmentChecker::FromFile(ep.cassette_path);
        break;
      case BackendMode::kRecord:
        c.entailment = std::make_shared<RecordingEntailmentChecker>(
            std::make_shared<HttpEntailmentChecker>(ep.url, ep.timeout_ms),
            ep.cassette_path);
        break;
      case BackendMode::kLive:
        c.entailment = std::make_shared<HttpEntailmentChecker>(ep.url, ep.timeout_ms);
        break;
    }
  }
  if (config.tagger) {
    c.tagger = std::make_shared<HttpTagger>(config.tagger->url,
                                            config.tagger->timeout_ms);
  }
  if (config.standardizer == "entailment") {
    if (!c.entailment) {
      Fail(ErrorCode::kCheckerUnavailable,
           "entailment standardizer selected but no entailment checker is configured");
    }
    c.standardizer = std::make_shared<EntailmentStandardizer>(c.entailment);
  } else {
    c.standardizer = std::make_shared<LexicalStandardizer>();
  }
  c.expected_pos = config.expected_pos;
  return c;
}

}  // namespace starforge
