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

#include "core/pipeline.h"

#include <gtest/gtest.h>

#include <sstream>

#include "core/error.h"
#include "core/io.h"
#include "core/text.h"
#include "support/fixtures.h"

namespace starforge {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string E2eConfig() { return testing::Fixture("e2e/config.json").string(); }

std::string Golden() {
  return Trim(ReadFile(testing::Fixture("e2e/golden.sha256").string()));
}

TEST(RunConfigTest, ResolvesPathsAgainstTheConfigFile) {
  const RunConfig c = RunConfig::Load(E2eConfig(), json::object());
  const fs::path dir = testing::Fixture("e2e");
  EXPECT_EQ(fs::weakly_canonical(c.ontology_path),
            fs::weakly_canonical(dir / "../toy/ontology.json"));
  EXPECT_EQ(fs::weakly_canonical(c.backend.cassette_path),
            fs::weakly_canonical(dir / "cassette_reflect-llm.jsonl"));
  EXPECT_EQ(c.generation.n, 10);
  EXPECT_EQ(c.strategy, Strategy::kReflectLLM);
  EXPECT_EQ(c.model.model_id, "sim-chat-1");
}

TEST(RunConfigTest, OverridesMergeOnTop) {
  const RunConfig c = RunConfig::Load(
      E2eConfig(), json{{"generation", {{"n", 4}}}, {"strategy", "none"}, {"output", "x.jsonl"}});
  EXPECT_EQ(c.generation.n, 4);
  EXPECT_EQ(c.generation.k, 2);
  EXPECT_EQ(c.strategy, Strategy::kNoCheck);
  EXPECT_EQ(c.output_path, "x.jsonl");
  EXPECT_EQ(c.DatasetIn(), "x.jsonl");
}

TEST(RunConfigTest, RequiresSeedAndValidValues) {
  auto code = [](const json &j) {
    try {
      RunConfig::Load("", j);
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::kInvalidArgument;
  };
  EXPECT_EQ(code(json{{"generation", {{"n", 1}}}}), ErrorCode::kConfig);
  EXPECT_EQ(code(json{{"generation", {{"rng_seed", 1}}}, {"strategy", "vibes"}}),
            ErrorCode::kConfig);
  EXPECT_EQ(code(json{{"generation", {{"rng_seed", 1}}}, {"workers", 0}}), ErrorCode::kConfig);
  try {
    RunConfig::Load("/nonexistent/config.json", json::object());
    FAIL();
  } catch (const Error &e) {
    EXPECT_NE(e.code(), ErrorCode::kInvalidArgument);
  }
}

TEST(OrderedParallelTest, KeepsIndexOrder) {
  for (int workers : {1, 3, 8}) {
    const auto out =
        OrderedParallel<size_t>(50, workers, [](size_t i) { return i * i; });
    ASSERT_EQ(out.size(), 50u);
    for (size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], i * i);
  }
}

TEST(OrderedParallelTest, PropagatesErrors) {
  EXPECT_THROW(OrderedParallel<int>(10, 4,
                                    [](size_t i) {
                                      if (i == 7) Fail(ErrorCode::kIo, "boom");
                                      return 0;
                                    }),
               Error);
}

TEST(LimitSeedsTest, KeepsFirstKPerType) {
  const auto seeds = LimitSeeds(testing::ToySeeds(), testing::ToyOntology(), Task::kEvent, 1);
  EXPECT_EQ(seeds.size(), 3u);
  EXPECT_TRUE(LimitSeeds(testing::ToySeeds(), testing::ToyOntology(), Task::kEvent, 0).empty());
  EXPECT_EQ(InstanceId(Task::kEvent, 7), "EE-000007");
  EXPECT_EQ(InstanceId(Task::kRelation, 12), "RE-000012");
}

TEST(PipelineTest, ReplayedGenerationMatchesTheGoldenDigest) {
  testing::ScratchDir dir;
  const RunConfig c = RunConfig::Load(
      E2eConfig(), json{{"output", dir.File("out.jsonl")}, {"with_refine", true}});
  std::ostringstream diag;
  ASSERT_EQ(RunCommand("generate", c, diag), 0) << diag.str();
  EXPECT_EQ(testing::FileSha256(dir.File("out.jsonl")), Golden());
  const auto instances = ReadInstances(dir.File("out.jsonl"));
  ASSERT_EQ(instances.size(), 30u);
  for (const auto &d : instances) {
    EXPECT_EQ(d.created_at, "2026-01-01T00:00:00Z");
    EXPECT_EQ(d.provenance.strategy, Strategy::kReflectLLM);
    EXPECT_EQ(d.provenance.model_id, "sim-chat-1");
    EXPECT_EQ(d.provenance.k, 2);
    EXPECT_TRUE(CheckInstance(d, testing::ToyOntology()).empty()) << d.id;
  }
}

TEST(PipelineTest, DownstreamCommandsOnGeneratedData) {
  testing::ScratchDir dir;
  const json base = {{"output", dir.File("out.jsonl")},
                     {"export", dir.File("spans.jsonl")},
                     {"stats", dir.File("stats.json")},
                     {"plan", dir.File("plan.jsonl")},
                     {"with_refine", true}};
  const RunConfig c = RunConfig::Load(E2eConfig(), base);
  std::ostringstream diag;
  ASSERT_EQ(RunCommand("generate", c, diag), 0) << diag.str();
  ASSERT_EQ(RunCommand("plan", c, diag), 0) << diag.str();
  EXPECT_EQ(LoadPlan(dir.File("plan.jsonl")).items.size(), 30u);
  ASSERT_EQ(RunCommand("export", c, diag), 0) << diag.str();
  EXPECT_EQ(ReadNonEmptyLines(dir.File("spans.jsonl")).size(), 30u);
  ASSERT_EQ(RunCommand("stats", c, diag), 0) << diag.str();
  const json stats = json::parse(ReadFile(dir.File("stats.json")));
  EXPECT_EQ(stats["total"], 30);
  EXPECT_EQ(stats["per_type"]["Justice:Sue"], 10);
  EXPECT_EQ(RunCommand("validate", c, diag), 0) << diag.str();
}

TEST(PipelineTest, ValidateReportsCorruptedInstances) {
  testing::ScratchDir dir;
  const RunConfig c = RunConfig::Load(
      E2eConfig(), json{{"output", dir.File("out.jsonl")}, {"with_refine", true}});
  std::ostringstream diag;
  ASSERT_EQ(RunCommand("generate", c, diag), 0);
  auto instances = ReadInstances(dir.File("out.jsonl"));
  instances[0].spans.push_back({0, 100000, SpanLabel::Trigger(), 0});
  WriteInstances(dir.File("bad.jsonl"), instances);
  const RunConfig v = RunConfig::Load(E2eConfig(), json{{"input", dir.File("bad.jsonl")}});
  std::ostringstream findings;
  EXPECT_EQ(RunCommand("validate", v, findings), 1);
  EXPECT_NE(findings.str().find(instances[0].id + ": invalid:"), std::string::npos);
}

TEST(PipelineTest, CassetteMissSurfacesAsError) {
  testing::ScratchDir dir;
  const RunConfig c = RunConfig::Load(
      E2eConfig(), json{{"output", dir.File("out.jsonl")},
                        {"generation", {{"rng_seed", 1}}}});
  std::ostringstream diag;
  try {
    RunCommand("generate", c, diag);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kCassetteMiss);
  }
  EXPECT_THROW(RunCommand("dance", c, diag), Error);
}

TEST(PipelineTest, RefineCommandOverUnrefinedData) {
  testing::ScratchDir dir;
  std::ostringstream diag;
  const RunConfig gen = RunConfig::Load(
      E2eConfig(),
      json{{"output", dir.File("raw.jsonl")},
           {"strategy", "none"},
           {"backend", {{"cassette_path", testing::Fixture("e2e/cassette_none.jsonl").string()}}}});
  ASSERT_EQ(RunCommand("generate", gen, diag), 0) << diag.str();
  const RunConfig refine = RunConfig::Load(
      E2eConfig(),
      json{{"input", dir.File("raw.jsonl")},
           {"output", dir.File("refined.jsonl")},
           {"strategy", "none"},
           {"backend", {{"cassette_path", testing::Fixture("e2e/cassette_none.jsonl").string()}}}});
  ASSERT_EQ(RunCommand("refine", refine, diag), 0) << diag.str();
  const auto raw = ReadInstances(dir.File("raw.jsonl"));
  const auto refined = ReadInstances(dir.File("refined.jsonl"));
  ASSERT_EQ(raw.size(), refined.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    EXPECT_EQ(raw[i].passage, refined[i].passage);
    EXPECT_EQ(raw[i].spans, refined[i].spans);
  }
}

}  // namespace
}  // namespace starforge
