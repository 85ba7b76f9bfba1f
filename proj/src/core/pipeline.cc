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

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <set>

#include "core/error.h"
#include "core/io.h"
#include "core/span_codec.h"
#include "core/text.h"

namespace starforge {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char *kPathKeys[] = {"ontology", "seeds",  "pools",
                                     "plan",     "input",  "output",
                                     "export",   "stats",  "dump_prompts"};

void ResolveAgainst(json &value, const fs::path &dir) {
  if (!value.is_string()) return;
  const fs::path p(value.get<std::string>());
  if (p.empty() || p.is_absolute()) return;
  value = (dir / p).lexically_normal().string();
}

void ResolvePaths(json &j, const fs::path &dir) {
  for (const char *key : kPathKeys) {
    if (j.contains(key)) ResolveAgainst(j[key], dir);
  }
  if (j.contains("backend") && j["backend"].is_object() &&
      j["backend"].contains("cassette_path")) {
    ResolveAgainst(j["backend"]["cassette_path"], dir);
  }
  if (j.contains("checkers") && j["checkers"].is_object() &&
      j["checkers"].contains("entailment") &&
      j["checkers"]["entailment"].is_object() &&
      j["checkers"]["entailment"].contains("cassette_path")) {
    ResolveAgainst(j["checkers"]["entailment"]["cassette_path"], dir);
  }
}

const std::string &RequirePath(const std::string &path, const char *what) {
  if (path.empty()) {
    Fail(ErrorCode::kConfig, std::string("no ") + what + " path configured");
  }
  return path;
}

}  // namespace

RunConfig RunConfig::Load(const std::string &config_path, const json &overrides) {
  json j = json::object();
  if (!config_path.empty()) {
    try {
      j = json::parse(ReadFile(config_path));
    } catch (const json::exception &e) {
      Fail(ErrorCode::kConfig, config_path + ": " + e.what());
    }
    if (!j.is_object()) Fail(ErrorCode::kConfig, config_path + ": expected an object");
    ResolvePaths(j, fs::path(config_path).parent_path());
  }
  if (!overrides.is_null()) {
    if (!overrides.is_object()) Fail(ErrorCode::kConfig, "overrides must be an object");
    j.merge_patch(overrides);
  }
  return FromJson(j);
}

RunConfig RunConfig::FromJson(const json &j) {
  RunConfig c;
  try {
    c.task = ParseTask(j.value("task", std::string("EE")));
    c.ontology_path = j.value("ontology", std::string());
    c.seeds_path = j.value("seeds", std::string());
    c.pools_path = j.value("pools", std::string());
    c.plan_path = j.value("plan", std::string());
    c.input_path = j.value("input", std::string());
    c.output_path = j.value("output", std::string());
    c.export_path = j.value("export", std::string());
    c.stats_path = j.value("stats", std::string());
    c.dump_prompts_dir = j.value("dump_prompts", std::string());

    const json gen = j.value("generation", json::object());
    if (!gen.contains("rng_seed") || gen.at("rng_seed").is_null()) {
      Fail(ErrorCode::kConfig, "generation.rng_seed is required");
    }
    const json &seed = gen.at("rng_seed");
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<int64_t>() < 0)) {
      Fail(ErrorCode::kConfig, "generation.rng_seed must be a non-negative integer");
    }
    c.generation.rng_seed = gen.at("rng_seed").get<uint64_t>();
    c.generation.k = gen.value("k", c.generation.k);
    c.generation.n = gen.value("n", c.generation.n);
    c.generation.max_density = gen.value("max_density", c.generation.max_density);
    if (gen.contains("hallucination_bins")) {
      c.generation.hallucination_bins =
          gen.at("hallucination_bins").get<std::vector<double>>();
    }
    c.generation.Validate();

    const json sizes = j.value("pool_sizes", json::object());
    c.pool_sizes.trigger = sizes.value("trigger", c.pool_sizes.trigger);
    c.pool_sizes.argument = sizes.value("argument", c.pool_sizes.argument);
    c.pool_sizes.entity = sizes.value("entity", c.pool_sizes.entity);
    c.pool_max_queries = j.value("pool_max_queries", c.pool_max_queries);
    c.pool_hard_cap = j.value("pool_hard_cap", c.pool_hard_cap);
    if (c.pool_sizes.trigger == 0 || c.pool_sizes.argument == 0 ||
        c.pool_sizes.entity == 0 || c.pool_hard_cap == 0) {
      Fail(ErrorCode::kConfig, "pool sizes must be positive");
    }

    const json model = j.value("model", json::object());
    c.model.model_id = model.value("model_id", c.model.model_id);
    c.model.max_tokens = model.value("max_tokens", c.model.max_tokens);
    c.model.generation_temperature =
        model.value("generation_temperature", c.model.generation_temperature);
    c.model.judge_temperature = model.value("judge_temperature", c.model.judge_temperature);

    c.strategy = ParseStrategy(j.value("strategy", StrategyName(c.strategy)));
    c.max_iterations = j.value("max_iterations", c.max_iterations);
    if (c.max_iterations < 0) Fail(ErrorCode::kConfig, "max_iterations must be >= 0");
    c.backend = BackendConfig::FromJson(j.value("backend", json::object()));
    c.checkers = CheckerConfig::FromJson(j.value("checkers", json::object()));
    c.workers = j.value("workers", c.workers);
    if (c.workers < 1) Fail(ErrorCode::kConfig, "workers must be >= 1");
    c.with_refine = j.value("with_refine", c.with_refine);
    c.drop_flagged = j.value("drop_flagged", c.drop_flagged);
  } catch (const json::exception &e) {
    Fail(ErrorCode::kConfig, std::string("config: ") + e.what());
  }
  return c;
}

std::string RunConfig::DatasetIn() const {
  return input_path.empty() ? output_path : input_path;
}

std::vector<SeedDemonstration> LimitSeeds(const std::vector<SeedDemonstration> &seeds,
                                          const Ontology &ontology, Task task, int k) {
  std::set<size_t> keep;
  auto take = [&](auto matches) {
    int taken = 0;
    for (size_t i = 0; i < seeds.size() && taken < k; ++i) {
      if (matches(seeds[i])) {
        keep.insert(i);
        ++taken;
      }
    }
  };
  if (task == Task::kRelation) {
    for (const auto &r : ontology.relation_types()) {
      take([&](const SeedDemonstration &s) {
        return s.structure.task == Task::kRelation &&
               s.structure.relation.relation == r.name;
      });
    }
  } else {
    for (const auto &e : ontology.event_types()) {
      take([&](const SeedDemonstration &s) {
        for (const auto &ev : s.structure.events) {
          if (ev.event_type == e.name) return true;
        }
        return false;
      });
    }
  }
  std::vector<SeedDemonstration> out;
  for (size_t i : keep) out.push_back(seeds[i]);
  return out;
}

std::string InstanceId(Task task, size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s-%06zu", std::string(TaskName(task)).c_str(), index);
  return buf;
}

PromptBundle PromptFor(const TargetStructure &y, const BatchContext &ctx) {
  const auto demos = SelectDemonstrations(
      ctx.seeds, y, static_cast<size_t>(ctx.config->generation.k));
  return BuildPassagePrompt(y, demos, *ctx.ontology);
}

namespace {

RefineContext RefineContextFor(const BatchContext &ctx) {
  RefineContext rc;
  rc.strategy = ctx.config->strategy;
  rc.backend = ctx.backend;
  rc.settings = ctx.config->model;
  rc.checkers = ctx.checkers;
  rc.ontology = ctx.ontology;
  rc.max_iterations = ctx.config->max_iterations;
  return rc;
}

void ApplyTrace(DataInstance &d, const RefinementTrace &trace, Strategy strategy) {
  const AnnotatedPassage &final_version = trace.final_version();
  d.passage = final_version.text;
  d.spans = final_version.spans;
  d.provenance.strategy = strategy;
  d.provenance.trace_summary = {trace.t, trace.stop_reason, trace.remaining()};
}

}  // namespace

DataInstance GenerateInstance(size_t index, const PlanItem &item,
                              const BatchContext &ctx, bool refine) {
  const RunConfig &config = *ctx.config;
  const TargetStructure y =
      config.task == Task::kRelation
          ? SampleRelationStructure(item, *ctx.pools, *ctx.ontology)
          : SampleTargetStructure(item, *ctx.pools, *ctx.ontology);
  const PromptBundle bundle = PromptFor(y, ctx);

  DataInstance d;
  d.id = InstanceId(config.task, index);
  d.task = config.task;
  d.structure = y;
  d.created_at = ctx.created_at;
  d.provenance.model_id = config.model.model_id;
  d.provenance.k = config.generation.k;
  d.provenance.plan_item = item;
  d.provenance.prompt_hash = bundle.content_hash;

  if (!config.dump_prompts_dir.empty()) {
    WriteFile((fs::path(config.dump_prompts_dir) / (d.id + ".txt")).string(),
              bundle.rendered);
  }

  const ChatResponse reply =
      ctx.backend->Complete(config.model.Generation({{"user", bundle.rendered}}));
  const AnnotatedPassage x0 =
      Decode(ExtractPassage(reply.text), y, *ctx.ontology).passage;
  d.passage = x0.text;
  d.spans = x0.spans;
  if (refine) {
    RefinementTrace trace;
    Refine(y, x0, bundle.rendered, RefineContextFor(ctx), trace);
    ApplyTrace(d, trace, config.strategy);
  }
  return d;
}

std::vector<DataInstance> GenerateBatch(const BatchPlan &plan,
                                        const BatchContext &ctx, bool refine) {
  return OrderedParallel<DataInstance>(
      plan.items.size(), ctx.config->workers,
      [&](size_t i) { return GenerateInstance(i, plan.items[i], ctx, refine); });
}

DataInstance RefineInstance(const DataInstance &instance, const BatchContext &ctx) {
  const PromptBundle bundle = PromptFor(instance.structure, ctx);
  RefinementTrace trace;
  Refine(instance.structure, instance.Annotated(), bundle.rendered,
         RefineContextFor(ctx), trace);
  DataInstance d = instance;
  d.provenance.prompt_hash = bundle.content_hash;
  ApplyTrace(d, trace, ctx.config->strategy);
  return d;
}

namespace {

std::string CreatedAt(const ChatBackend &backend) {
  if (const auto *replay = dynamic_cast<const ReplayBackend *>(&backend)) {
    const std::string &latest = replay->cassette().latest_recorded_at();
    return latest.empty() ? "1970-01-01T00:00:00Z" : latest;
  }
  return FormatRfc3339(std::chrono::system_clock::now());
}

std::vector<SeedDemonstration> LoadLimitedSeeds(const RunConfig &config,
                                                const Ontology &ontology) {
  if (config.seeds_path.empty()) {
    if (config.generation.k > 0) {
      Fail(ErrorCode::kConfig, "k > 0 needs a seeds path");
    }
    return {};
  }
  return LimitSeeds(LoadSeeds(config.seeds_path, ontology, config.task), ontology,
                    config.task, config.generation.k);
}

size_t TargetSizeFor(const PoolKey &key, const PoolSizes &sizes) {
  switch (key.kind) {
    case PoolKey::Kind::kTrigger: return sizes.trigger;
    case PoolKey::Kind::kArgument: return sizes.argument;
    case PoolKey::Kind::kEntity: return sizes.entity;
  }
  return sizes.argument;
}

int RunPools(const RunConfig &config, std::ostream &diag) {
  const std::string &path = RequirePath(config.pools_path, "pools");
  std::shared_ptr<ChatBackend> backend = MakeBackend(config.backend);
  const Ontology ontology = Ontology::LoadFile(RequirePath(config.ontology_path, "ontology"));
  const auto seeds = LoadLimitedSeeds(config, ontology);
  PoolSet existing;
  if (fs::exists(path)) existing = PoolSet::LoadJsonl(path);

  PoolFillOptions options;
  options.max_queries = config.pool_max_queries;
  options.hard_cap = config.pool_hard_cap;
  options.model = config.model;
  const std::vector<PoolKey> keys = RequiredPoolKeys(ontology, config.task);
  std::vector<CandidatePool> pools = OrderedParallel<CandidatePool>(
      keys.size(), config.workers, [&](size_t i) {
        const CandidatePool *have = existing.Find(keys[i]);
        if (have != nullptr && have->complete()) return *have;
        return FillPool(keys[i], TargetSizeFor(keys[i], config.pool_sizes), *backend,
                        seeds, ontology, options);
      });
  PoolSet out;
  for (auto &p : pools) {
    diag << "pool " << p.key().ToString() << ": " << p.size() << "/" << p.target_size()
         << (p.complete() ? "" : " (incomplete)") << "\n";
    out.Put(std::move(p));
  }
  out.SaveJsonl(path);
  return 0;
}

int RunPlan(const RunConfig &config, std::ostream &diag) {
  const std::string &path = RequirePath(config.plan_path, "plan");
  const Ontology ontology = Ontology::LoadFile(RequirePath(config.ontology_path, "ontology"));
  const BatchPlan plan = PlanBatch(config.generation, ontology, config.task);
  SavePlan(path, plan);
  diag << "planned " << plan.items.size() << " item(s) -> " << path << "\n";
  return 0;
}

struct Loaded {
  std::shared_ptr<ChatBackend> backend;
  Ontology ontology;
  Checkers checkers;
  PoolSet pools;
  BatchContext ctx;
};

// Backend first, so a missing credential is reported before any file is read.
std::unique_ptr<Loaded> LoadForBatch(const RunConfig &config, bool need_pools,
                                     bool need_checkers) {
  auto l = std::make_unique<Loaded>();
  l->backend = MakeBackend(config.backend);
  l->ontology = Ontology::LoadFile(RequirePath(config.ontology_path, "ontology"));
  if (need_checkers) l->checkers = Checkers::Make(config.checkers);
  if (need_pools) l->pools = PoolSet::LoadJsonl(RequirePath(config.pools_path, "pools"));
  l->ctx.config = &config;
  l->ctx.ontology = &l->ontology;
  l->ctx.seeds = LoadLimitedSeeds(config, l->ontology);
  l->ctx.pools = &l->pools;
  l->ctx.backend = l->backend.get();
  l->ctx.checkers = &l->checkers;
  l->ctx.created_at = CreatedAt(*l->backend);
  return l;
}

int RunGenerate(const RunConfig &config, std::ostream &diag) {
  const std::string &out = RequirePath(config.output_path, "output");
  auto l = LoadForBatch(config, /*need_pools=*/true, config.with_refine);
  const BatchPlan plan = PlanBatch(config.generation, l->ontology, config.task);
  if (!config.dump_prompts_dir.empty()) fs::create_directories(config.dump_prompts_dir);
  const auto instances = GenerateBatch(plan, l->ctx, config.with_refine);
  WriteInstances(out, instances);
  diag << "generated " << instances.size() << " instance(s) -> " << out << "\n";
  return 0;
}

int RunRefine(const RunConfig &config, std::ostream &diag) {
  const std::string in = RequirePath(config.DatasetIn(), "input");
  const std::string &out = RequirePath(config.output_path, "output");
  const auto instances = ReadInstances(in);
  auto l = LoadForBatch(config, /*need_pools=*/false, /*need_checkers=*/true);
  const auto refined = OrderedParallel<DataInstance>(
      instances.size(), config.workers,
      [&](size_t i) { return RefineInstance(instances[i], l->ctx); });
  WriteInstances(out, refined);
  diag << "refined " << refined.size() << " instance(s) -> " << out << "\n";
  return 0;
}

int RunExport(const RunConfig &config, std::ostream &diag) {
  const auto instances = ReadInstances(RequirePath(config.DatasetIn(), "input"));
  const std::string &path = RequirePath(config.export_path, "export");
  const ExportSummary summary = ExportSpanFormat(instances, path, config.drop_flagged);
  for (const auto &line : summary.log) diag << line << "\n";
  diag << "exported " << summary.written << " record(s), skipped " << summary.skipped
       << " -> " << path << "\n";
  return 0;
}

int RunStats(const RunConfig &config, std::ostream &diag) {
  const auto instances = ReadInstances(RequirePath(config.DatasetIn(), "input"));
  const std::string &path = RequirePath(config.stats_path, "stats");
  const DatasetStats stats = ComputeStats(instances, &config.generation);
  WriteFile(path, stats.ToJson().dump(2) + "\n");
  diag << "stats for " << stats.total << " instance(s) -> " << path << "\n";
  return 0;
}

bool SameFlagKeys(const std::vector<QualityFlag> &a, const std::vector<QualityFlag> &b) {
  std::set<std::tuple<DimensionId, int, std::string>> ka, kb;
  for (const auto &f : a) ka.insert(f.Key());
  for (const auto &f : b) kb.insert(f.Key());
  return ka == kb;
}

int RunValidate(const RunConfig &config, std::ostream &diag) {
  const auto instances = ReadInstances(RequirePath(config.DatasetIn(), "input"));
  const Ontology ontology =
      Ontology::LoadFile(RequirePath(config.ontology_path, "ontology"));

  bool need_backend = false;
  bool need_checkers = config.checkers.tagger.has_value();
  for (const auto &d : instances) {
    need_backend |= d.provenance.strategy == Strategy::kReflectLLM;
    need_checkers |= d.provenance.strategy != Strategy::kNoCheck;
  }
  std::shared_ptr<ChatBackend> backend;
  if (need_backend) backend = MakeBackend(config.backend);
  Checkers checkers;
  if (need_checkers) checkers = Checkers::Make(config.checkers);

  const auto reports = OrderedParallel<std::vector<std::string>>(
      instances.size(), config.workers, [&](size_t i) {
        const DataInstance &d = instances[i];
        std::vector<std::string> lines;
        for (const auto &p : CheckInstance(d, ontology)) {
          lines.push_back(d.id + ": invalid: " + p);
        }
        if (!lines.empty()) return lines;
        RefineContext rc;
        rc.strategy = d.provenance.strategy;
        rc.backend = backend.get();
        rc.settings = config.model;
        rc.checkers = &checkers;
        rc.ontology = &ontology;
        const auto flags = IdentifyErrors(d.structure, d.Annotated(), rc);
        for (const auto &f : flags) {
          lines.push_back(d.id + ": " + DimensionName(f.dimension) + " event " +
                          std::to_string(f.event_index) + " " + f.target +
                          (f.mention.empty() ? "" : " '" + f.mention + "'") + ": " +
                          f.detail);
        }
        if (!SameFlagKeys(flags, d.provenance.trace_summary.flags_remaining)) {
          lines.push_back(d.id + ": flags differ from the " +
                          std::to_string(d.provenance.trace_summary.flags_remaining.size()) +
                          " recorded in provenance");
        }
        return lines;
      });
  size_t failing = 0;
  for (const auto &lines : reports) {
    if (!lines.empty()) ++failing;
    for (const auto &line : lines) diag << line << "\n";
  }
  diag << "validated " << instances.size() << " instance(s), " << failing
       << " with findings\n";
  return failing == 0 ? 0 : 1;
}

}  // namespace

int RunCommand(const std::string &command, const RunConfig &config,
               std::ostream &diag) {
  if (command == "pools") return RunPools(config, diag);
  if (command == "plan") return RunPlan(config, diag);
  if (command == "generate") return RunGenerate(config, diag);
  if (command == "refine") return RunRefine(config, diag);
  if (command == "export") return RunExport(config, diag);
  if (command == "stats") return RunStats(config, diag);
  if (command == "validate") return RunValidate(config, diag);
  Fail(ErrorCode::kInvalidArgument, "unknown command '" + command + "'");
}

}  // namespace starforge
