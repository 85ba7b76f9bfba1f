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

// Acceptance suite: runs every acceptance criterion and prints one PASS/FAIL
// line per criterion. Exits non-zero if any criterion fails.

#include <algorithm>
#include <atomic>
#include <boost/math/distributions/chi_squared.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "core/backend.h"
#include "core/checkers.h"
#include "core/dataset.h"
#include "core/error.h"
#include "core/http_backend.h"
#include "core/io.h"
#include "core/pipeline.h"
#include "core/pools.h"
#include "core/refine.h"
#include "core/sampler.h"
#include "core/span_codec.h"
#include "core/text.h"
#include "support/fake_server.h"
#include "support/fixtures.h"
#include "support/generators.h"
#include "support/reference_strings.h"
#include "support/sim_llm.h"

namespace starforge {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using SteadyClock = std::chrono::steady_clock;

// Pinned tolerances and sizes.
constexpr int kPlanN = 50;
constexpr int kPlanD = 5;
constexpr int kMaxCountSpread = 1;
constexpr double kPlanSeconds = 1.0;
constexpr int kHallucinationDraws = 10000;
constexpr double kMinChiSquareP = 0.01;
constexpr double kSigmaBand = 3.0;
constexpr int kRoundTrips = 1000;
constexpr int kFuzzInputs = 10000;
constexpr double kRefineSeconds = 1.0;
constexpr int kRefineBudget = 3;
constexpr size_t kE2eInstances = 30;
constexpr double kE2eSeconds = 10.0;
constexpr int kRateCap = 8;
constexpr int kLoadRequests = 24;

const std::vector<std::string> kStrategies = {"none", "rule-based", "reflect-entailment",
                                              "reflect-llm"};

// Collects failed expectations for one criterion.
class Check {
 public:
  void Expect(bool ok, const std::string &what) {
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void Note(const std::string &s) { notes_.push_back(s); }
  bool ok() const { return failed_ == 0; }
  std::string Summary() const {
    if (!ok()) {
      std::string s = std::to_string(failed_) + " failed: " + Join(failures_, "; ");
      return s;
    }
    return Join(notes_, ", ");
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
  int failed_ = 0;
};

double Seconds(SteadyClock::time_point since) {
  return std::chrono::duration<double>(SteadyClock::now() - since).count();
}

std::string Fmt(double v, int precision = 3) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

template <typename K>
int Spread(const std::map<K, int> &counts, size_t buckets) {
  if (counts.size() < buckets) {
    int hi = 0;
    for (const auto &[k, v] : counts) hi = std::max(hi, v);
    return hi;
  }
  int lo = INT32_MAX, hi = 0;
  for (const auto &[k, v] : counts) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

// 1. Plan balance over the three-type toy ontology.
void DistributionControl(Check &c) {
  GenerationConfig config;
  config.n = kPlanN;
  config.max_density = kPlanD;
  config.hallucination_bins = {0.0, 0.25, 0.5, 0.75, 1.0};
  config.rng_seed = 20260101;
  const auto start = SteadyClock::now();
  const BatchPlan plan = PlanBatch(config, testing::ToyOntology());
  const double elapsed = Seconds(start);
  std::map<std::string, int> per_type;
  std::map<std::string, std::map<int, int>> density;
  std::map<std::string, std::map<double, int>> bins;
  for (const auto &item : plan.items) {
    per_type[item.primary_type]++;
    density[item.primary_type][item.density]++;
    bins[item.primary_type][item.hallucination_bin]++;
  }
  c.Expect(per_type.size() == 3, "expected 3 types");
  for (const auto &[type, n] : per_type) {
    c.Expect(n == kPlanN, type + " count " + std::to_string(n));
    c.Expect(Spread(density[type], kPlanD + 1) <= kMaxCountSpread, type + " density spread");
    c.Expect(Spread(bins[type], config.hallucination_bins.size()) <= kMaxCountSpread,
             type + " bin spread");
  }
  c.Expect(elapsed < kPlanSeconds, "runtime " + Fmt(elapsed) + "s");
  c.Note(std::to_string(plan.items.size()) + " items in " + Fmt(elapsed * 1000) + " ms");
}

// 2. Exact None counts and uniform choice of the None subset.
void HallucinationExactness(Check &c) {
  Rng rng(20260102);
  for (double ratio : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (size_t roles = 0; roles <= 10; ++roles) {
      const size_t want = static_cast<size_t>(std::floor(ratio * roles + 0.5));
      EventSpec e{"T", "t", {}};
      for (size_t r = 0; r < roles; ++r) e.args.push_back({"R" + std::to_string(r), "m"});
      size_t none = 0;
      for (const auto &a : ApplyHallucination(e, ratio, rng).args) none += a.mention ? 0 : 1;
      c.Expect(none == want && HallucinationCount(ratio, roles) == want,
               "ratio " + Fmt(ratio) + " roles " + std::to_string(roles));
    }
  }
  std::map<std::string, int> counts;
  for (int i = 0; i < kHallucinationDraws; ++i) {
    EventSpec e{"T", "t", {{"A", "a"}, {"B", "b"}, {"C", "c"}, {"D", "d"}}};
    std::string key;
    for (const auto &a : ApplyHallucination(e, 0.5, rng).args) key += a.mention ? '.' : 'x';
    counts[key]++;
  }
  c.Expect(counts.size() == 6, "saw " + std::to_string(counts.size()) + " subsets");
  const double p = 1.0 / 6.0;
  const double expected = kHallucinationDraws * p;
  const double sigma = std::sqrt(kHallucinationDraws * p * (1 - p));
  double chi2 = 0;
  for (const auto &[k, v] : counts) {
    c.Expect(std::abs(v - expected) <= kSigmaBand * sigma, "subset " + k + " count " +
                                                             std::to_string(v));
    chi2 += (v - expected) * (v - expected) / expected;
  }
  const boost::math::chi_squared dist(5);
  const double pvalue = boost::math::cdf(boost::math::complement(dist, chi2));
  c.Expect(pvalue > kMinChiSquareP, "chi-square p " + Fmt(pvalue));
  c.Note("chi2=" + Fmt(chi2) + " p=" + Fmt(pvalue));
}

// 3. Codec round trip and decoder fuzzing.
void SpanCodecRoundTrip(Check &c) {
  const Ontology &ontology = testing::ToyOntology();
  Rng rng(20260103);
  int spans = 0;
  for (int i = 0; i < kRoundTrips; ++i) {
    const auto g = testing::RandomAnnotatedPassage(rng, ontology);
    spans += static_cast<int>(g.passage.spans.size());
    const std::string tagged = Encode(g.passage);
    const DecodeReport r = Decode(tagged, g.expected, ontology);
    c.Expect(r.issues.empty() && r.passage == g.passage, "round trip of " + tagged);
  }
  const TargetStructure sue{Task::kEvent, {{"Justice:Sue", "sue", {{"Plaintiff", "He"}}}}, {}};
  int crashes = 0;
  for (int i = 0; i < kFuzzInputs; ++i) {
    const std::string input = testing::RandomTaggedNoise(rng);
    try {
      Decode(input, sue, ontology);
    } catch (...) {
      ++crashes;
    }
  }
  c.Expect(crashes == 0, std::to_string(crashes) + " decoder exceptions");
  c.Note(std::to_string(kRoundTrips) + " round trips (" + std::to_string(spans) + " spans), " +
         std::to_string(kFuzzInputs) + " fuzz inputs");
}

// 4. Worked examples reproduced verbatim.
void ExampleFidelity(Check &c) {
  const AnnotatedPassage sue{testing::kSueText,
                             {{0, 2, SpanLabel::Role("Plaintiff"), 0},
                              {17, 20, SpanLabel::Trigger(), 0}}};
  c.Expect(Encode(sue) == testing::kSueTagged, "tagged sentence");

  const Ontology injure = Ontology::Parse(testing::kInjureOntology);
  const EventTypeSpec &type = injure.EventType("Life:Injure");
  const std::string prompt = BuildArgumentPrompt(type, *type.FindRole("Instrument"), "vehicle");
  c.Expect(prompt.substr(0, prompt.find('\n')) == testing::kInstrumentQuestion,
           "argument question");

  QuestionFields f;
  f.event_type = "Movement:Transport";
  f.trigger = "flee";
  f.role = "Destination";
  f.mention = "Syria";
  c.Expect(BuildReflectionQuestion(DimensionId::kEE4, f) == testing::kSyriaQuestion,
           "reflection question");

  TargetStructure y;
  y.events.push_back({"Justice:Arrest-Jail", "jailed", {{"Crime", std::nullopt}}});
  c.Expect(RenderFeedback({{DimensionId::kEE5, 0, "Crime", "", ""}}, y) == testing::kCrimeFeedback,
           "feedback sentence");
  c.Note("4 strings equal");
}

// 5. Refinement stop conditions over the recorded cassettes.
void RefinementContract(Check &c) {
  const auto start = SteadyClock::now();
  const testing::RefineCase rc = testing::LoadRefineCase();
  Checkers checkers;
  checkers.standardizer = std::make_shared<LexicalStandardizer>();
  auto run = [&](const std::string &cassette, Strategy strategy) {
    std::unique_ptr<ReplayBackend> backend;
    RefineContext ctx;
    ctx.strategy = strategy;
    if (!cassette.empty()) {
      backend = ReplayBackend::FromFile(testing::Fixture("refine/" + cassette).string());
      ctx.backend = backend.get();
    }
    ctx.checkers = &checkers;
    ctx.ontology = &testing::ToyOntology();
    ctx.settings.model_id = "sim-chat-1";
    ctx.max_iterations = kRefineBudget;
    RefinementTrace trace;
    Refine(rc.structure, rc.passage, rc.prompt, ctx, trace);
    return trace;
  };
  const auto repaired = run("repair.jsonl", Strategy::kReflectLLM);
  c.Expect(repaired.flags_per_iteration.front().size() == 1, "repair case starts with one flag");
  c.Expect(repaired.t == 1 && repaired.stop_reason == StopReason::kClean,
           "repair: t=" + std::to_string(repaired.t) + " " +
               StopReasonName(repaired.stop_reason));
  const auto stuck = run("stuck.jsonl", Strategy::kReflectLLM);
  c.Expect(stuck.t <= kRefineBudget && (stuck.stop_reason == StopReason::kNoProgress ||
                                        stuck.stop_reason == StopReason::kMaxIterations),
           "stuck: t=" + std::to_string(stuck.t) + " " + StopReasonName(stuck.stop_reason));
  const auto untouched = run("", Strategy::kNoCheck);
  c.Expect(untouched.versions.size() == 1 && untouched.final_version() == rc.passage &&
               Encode(untouched.final_version()) == Encode(rc.passage),
           "none strategy changed the instance");
  const double elapsed = Seconds(start);
  c.Expect(elapsed < kRefineSeconds, "runtime " + Fmt(elapsed) + "s");
  c.Note("repair t=1 Clean, stuck t=" + std::to_string(stuck.t) + " " +
         StopReasonName(stuck.stop_reason) + ", none identical, " + Fmt(elapsed * 1000) + " ms");
}

// 6. Answer standardization against hand labels and recorded judgments.
void Standardization(Check &c) {
  LexicalStandardizer lexical;
  auto replay = std::shared_ptr<EntailmentChecker>(
      ReplayEntailmentChecker::FromFile(testing::Fixture("checkers/judgments.jsonl").string()));
  EntailmentStandardizer entailment(replay);
  int agree = 0, labeled = 0, hedged = 0, judged = 0, entail_agree = 0;
  std::vector<std::string> hedged_as;
  for (const auto &line : ReadNonEmptyLines(testing::Fixture("checkers/answers.jsonl").string())) {
    const json j = json::parse(line);
    const std::string answer = j.at("answer");
    const std::string label = j.at("label");
    const bool lex = lexical.IsAffirmative(answer);
    const bool ent = entailment.IsAffirmative(answer);
    ++judged;
    if (label == "hedged") {
      ++hedged;
      hedged_as.push_back(lex ? "yes" : "no");
      continue;
    }
    ++labeled;
    const bool want = label == "yes";
    c.Expect(lex == want, "lexical disagrees on '" + answer + "'");
    agree += lex == want ? 1 : 0;
    entail_agree += ent == want ? 1 : 0;
  }
  c.Expect(labeled == 24 && hedged == 6, "fixture has " + std::to_string(labeled) +
                                              " labeled and " + std::to_string(hedged) +
                                              " hedged");
  c.Expect(judged == 30, "entailment path judged " + std::to_string(judged));
  c.Note("lexical " + std::to_string(agree) + "/" + std::to_string(labeled) +
         ", hedged read as [" + Join(hedged_as, " ") + "], entailment replay " +
         std::to_string(entail_agree) + "/" + std::to_string(labeled));
}

// 7. Replayed generation under a socket-blocking preload.
std::string E2eOutput(const fs::path &dir) { return (dir / "run1.jsonl").string(); }

void EndToEndDeterminism(Check &c, const fs::path &dir) {
  const std::string config = testing::Fixture("e2e/config.json").string();
  const std::string golden = Trim(ReadFile(testing::Fixture("e2e/golden.sha256").string()));
  std::vector<std::string> digests;
  double slowest = 0;
  for (int run = 1; run <= 2; ++run) {
    const std::string out = (dir / ("run" + std::to_string(run) + ".jsonl")).string();
    const std::string log = (dir / ("nonet" + std::to_string(run) + ".log")).string();
    WriteFile(log, "");
    const auto start = SteadyClock::now();
    const auto r = testing::RunProcess(
        {testing::CliPath(), "generate", "-c", config, "--with-refine", "--output", out},
        {{"LD_PRELOAD", testing::NoNetShimPath()},
         {"SF_NONET_LOG", log},
         {"OPENAI_API_KEY", ""},
         {"SF_SIM_TOKEN", ""}});
    const double elapsed = Seconds(start);
    slowest = std::max(slowest, elapsed);
    c.Expect(r.exit_code == 0, "run " + std::to_string(run) + " exit " +
                                   std::to_string(r.exit_code) + ": " + r.err);
    c.Expect(ReadFile(log).empty(), "network attempts: " + ReadFile(log));
    c.Expect(elapsed < kE2eSeconds, "runtime " + Fmt(elapsed) + "s");
    if (r.exit_code == 0) {
      digests.push_back(testing::FileSha256(out));
      c.Expect(ReadInstances(out).size() == kE2eInstances, "instance count");
    }
  }
  c.Expect(digests.size() == 2 && digests[0] == digests[1], "runs differ");
  c.Expect(!digests.empty() && digests[0] == golden, "digest differs from the checked-in golden");

  // The harness must actually catch a connection attempt.
  const std::string probe_log = (dir / "probe.log").string();
  WriteFile(probe_log, "");
  testing::ScratchDir scratch;
  json live = json::parse(ReadFile(config));
  for (const char *key : {"ontology", "seeds"}) {
    live[key] = (testing::Fixture("e2e") / live[key].get<std::string>()).string();
  }
  live["pools"] = scratch.File("p.jsonl");
  live["backend"] = {{"mode", "live"},
                     {"endpoint_url", "http://127.0.0.1:9/v1/chat/completions"},
                     {"retry", {{"max_attempts", 1}}}};
  WriteFile(scratch.File("live.json"), live.dump());
  const auto probe = testing::RunProcess(
      {testing::CliPath(), "pools", "-c", scratch.File("live.json")},
      {{"LD_PRELOAD", testing::NoNetShimPath()}, {"SF_NONET_LOG", probe_log},
       {"OPENAI_API_KEY", "x"}});
  c.Expect(probe.exit_code == 3 && !ReadFile(probe_log).empty(),
           "no-network harness did not observe a live connection attempt");
  c.Note("2 runs identical, sha " + (digests.empty() ? "?" : digests[0].substr(0, 12)) +
         " = golden, 0 network calls, slowest " + Fmt(slowest) + "s");
}

// 8. Retry, auth and rate behaviour against loopback servers.
void BackendRobustness(Check &c) {
  using Instant = RateLimiter::Clock::time_point;
  auto reply = [](httplib::Response &res, const std::string &text) {
    res.set_content(json{{"choices", {{{"message", {{"content", text}}}}}}}.dump(),
                    "application/json");
  };
  const ChatRequest hello{"m", {{"user", "hello"}}, 0.0, 8};
  {
    std::atomic<int> hits{0};
    testing::FakeHttpServer server([&](const httplib::Request &, httplib::Response &res) {
      if (++hits <= 2) {
        res.status = 429;
        return;
      }
      reply(res, "ok");
    });
    BackendConfig config;
    config.endpoint_url = server.Url("/v1/chat/completions");
    config.retry = {5, 100, 2.0};
    config.requests_per_second = 1000;
    std::vector<Instant> attempts;
    HttpChatBackend backend(config, "t", {[&](Instant t) { attempts.push_back(t); }});
    std::string text;
    try {
      text = backend.Complete(hello).text;
    } catch (const Error &e) {
      c.Expect(false, std::string("429 sequence failed: ") + e.what());
    }
    c.Expect(text == "ok" && attempts.size() == 3, "429,429,200 did not succeed on attempt 3");
    if (attempts.size() == 3) {
      const auto d1 = attempts[1] - attempts[0];
      const auto d2 = attempts[2] - attempts[1];
      c.Expect(d1 >= config.retry.DelayAfter(1) && d2 >= config.retry.DelayAfter(2),
               "backoff shorter than schedule");
      c.Note("backoff " +
             std::to_string(std::chrono::duration_cast<std::chrono::milliseconds>(d1).count()) +
             "/" +
             std::to_string(std::chrono::duration_cast<std::chrono::milliseconds>(d2).count()) +
             " ms >= 100/200");
    }
  }
  {
    std::atomic<int> hits{0};
    testing::FakeHttpServer server([&](const httplib::Request &, httplib::Response &res) {
      ++hits;
      res.status = 401;
    });
    BackendConfig config;
    config.endpoint_url = server.Url("/v1/chat/completions");
    config.retry = {5, 10, 2.0};
    HttpChatBackend backend(config, "bad", {});
    ErrorCode code = ErrorCode::kInvalidArgument;
    try {
      backend.Complete(hello);
    } catch (const Error &e) {
      code = e.code();
    }
    c.Expect(code == ErrorCode::kAuth && hits == 1, "auth failure retried or misclassified");
    c.Note("401 fails once with kAuth");
  }
  {
    testing::FakeHttpServer server(
        [&](const httplib::Request &, httplib::Response &res) { reply(res, "ok"); });
    BackendConfig config;
    config.endpoint_url = server.Url("/v1/chat/completions");
    config.requests_per_second = kRateCap;
    std::mutex mu;
    std::vector<Instant> attempts;
    HttpChatBackend backend(config, "t", {[&](Instant t) {
                              std::lock_guard<std::mutex> lock(mu);
                              attempts.push_back(t);
                            }});
    std::vector<std::thread> workers;
    for (int w = 0; w < 4; ++w) {
      workers.emplace_back([&] {
        for (int i = 0; i < kLoadRequests / 4; ++i) backend.Complete(hello);
      });
    }
    for (auto &t : workers) t.join();
    std::sort(attempts.begin(), attempts.end());
    size_t worst = 0;
    for (size_t i = 0; i < attempts.size(); ++i) {
      size_t n = 0;
      for (size_t j = i; j < attempts.size() && attempts[j] - attempts[i] < std::chrono::seconds(1);
           ++j) {
        ++n;
      }
      worst = std::max(worst, n);
    }
    c.Expect(attempts.size() == kLoadRequests, "load test lost requests");
    c.Expect(worst <= static_cast<size_t>(kRateCap), "window held " + std::to_string(worst));
    c.Note("peak " + std::to_string(worst) + " req/s under cap " + std::to_string(kRateCap));
  }
}

// 9. Every span of the end-to-end output exports or is logged.
void ExportTotality(Check &c, const fs::path &dir) {
  const std::string in = E2eOutput(dir);
  if (!fs::exists(in)) {
    c.Expect(false, "end-to-end output missing");
    return;
  }
  const auto instances = ReadInstances(in);
  const std::string out = (dir / "spans.jsonl").string();
  const ExportSummary summary = ExportSpanFormat(instances, out, false);
  c.Expect(summary.written + summary.skipped == instances.size(), "instances unaccounted for");
  c.Expect(summary.log.size() == summary.skipped, "skip without a log line");
  const auto lines = ReadNonEmptyLines(out);
  std::map<std::string, json> records;
  for (const auto &l : lines) {
    const json r = json::parse(l);
    records[r.at("id")] = r;
  }
  size_t mapped = 0;
  for (const auto &d : instances) {
    auto it = records.find(d.id);
    if (it == records.end()) continue;
    const json &r = it->second;
    std::vector<std::string> tokens = r.at("tokens").get<std::vector<std::string>>();
    c.Expect(StripAllWhitespace(Join(tokens, " ")) == StripAllWhitespace(d.passage),
             d.id + " does not detokenize to its passage");
    size_t spans = 0;
    for (const auto &e : r.value("events", json::array())) {
      if (!e.at("trigger").is_null()) ++spans;
      spans += e.at("args").size();
    }
    c.Expect(spans == d.spans.size(), d.id + " lost spans");
    const auto toks = Tokenize(d.passage);
    for (const auto &e : r.value("events", json::array())) {
      auto span_text = [&](const json &range) {
        std::vector<std::string> parts;
        for (size_t i = range[0]; i < range[1].get<size_t>(); ++i) parts.push_back(toks[i].text);
        return StripAllWhitespace(Join(parts, ""));
      };
      if (!e.at("trigger").is_null()) {
        bool found = false;
        for (const auto &s : d.spans) {
          if (s.label.is_trigger &&
              StripAllWhitespace(SpanText(d.passage, s.start, s.end)) == span_text(e["trigger"])) {
            found = true;
          }
        }
        c.Expect(found, d.id + " trigger maps to other text");
      }
    }
    mapped += spans;
  }
  c.Note(std::to_string(summary.written) + " exported, " + std::to_string(summary.skipped) +
         " skipped with log, " + std::to_string(mapped) + " spans mapped");
}

// 10. Same inputs under every strategy, audited by one common reflector.
void AblationParity(Check &c) {
  testing::ScratchDir dir;
  auto auditor = ReplayBackend::FromFile(testing::Fixture("e2e/audit.jsonl").string());
  Checkers checkers;
  checkers.standardizer = std::make_shared<LexicalStandardizer>();
  RefineContext audit;
  audit.strategy = Strategy::kReflectLLM;
  audit.backend = auditor.get();
  audit.checkers = &checkers;
  audit.ontology = &testing::ToyOntology();
  audit.settings.model_id = "sim-chat-1";

  std::vector<size_t> counts;
  std::vector<std::string> parts;
  for (const auto &strategy : kStrategies) {
    const std::string out = dir.File(strategy + ".jsonl");
    const RunConfig config = RunConfig::Load(
        testing::Fixture("e2e/config.json").string(),
        json{{"output", out},
             {"with_refine", true},
             {"strategy", strategy},
             {"backend",
              {{"cassette_path",
                testing::Fixture("e2e/cassette_" + strategy + ".jsonl").string()}}}});
    std::ostringstream diag;
    if (RunCommand("generate", config, diag) != 0) {
      c.Expect(false, strategy + " generation failed");
      return;
    }
    size_t flags = 0;
    const auto instances = ReadInstances(out);
    for (const auto &d : instances) {
      c.Expect(StrategyName(d.provenance.strategy) == strategy,
               d.id + " provenance strategy " + StrategyName(d.provenance.strategy));
      flags += IdentifyErrors(d.structure, d.Annotated(), audit).size();
    }
    counts.push_back(flags);
    parts.push_back(strategy + "=" + std::to_string(flags));
  }
  for (size_t i = 1; i < counts.size(); ++i) {
    c.Expect(counts[i] <= counts[i - 1], "flag count rises at " + kStrategies[i]);
  }
  c.Note("audited flags " + Join(parts, " "));
}

}  // namespace
}  // namespace starforge

int main() {
  using starforge::Check;
  namespace fs = std::filesystem;
  starforge::testing::ScratchDir scratch;
  const fs::path dir = scratch.path();
  const std::vector<std::pair<std::string, std::function<void(Check &)>>> criteria = {
      {"distribution control", starforge::DistributionControl},
      {"hallucination exactness", starforge::HallucinationExactness},
      {"span codec round trip", starforge::SpanCodecRoundTrip},
      {"worked example fidelity", starforge::ExampleFidelity},
      {"refinement contract", starforge::RefinementContract},
      {"answer standardization", starforge::Standardization},
      {"end-to-end determinism", [&](Check &c) { starforge::EndToEndDeterminism(c, dir); }},
      {"backend robustness", starforge::BackendRobustness},
      {"export totality", [&](Check &c) { starforge::ExportTotality(c, dir); }},
      {"ablation parity", starforge::AblationParity},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Check check;
    try {
      criteria[i].second(check);
    } catch (const std::exception &e) {
      check.Expect(false, std::string("exception: ") + e.what());
    }
    if (!check.ok()) ++failed;
    std::cout << (check.ok() ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first
              << ": " << check.Summary() << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
