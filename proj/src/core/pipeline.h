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

// End-to-end orchestration behind the command line: run configuration and
// the pools, plan, generate, refine, export, stats and validate commands.

#ifndef STAR_FORGE_CORE_PIPELINE_H_
#define STAR_FORGE_CORE_PIPELINE_H_

#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "core/backend.h"
#include "core/checkers.h"
#include "core/dataset.h"
#include "core/http_backend.h"
#include "core/ontology.h"
#include "core/pools.h"
#include "core/prompts.h"
#include "core/refine.h"
#include "core/sampler.h"
#include "core/seeds.h"

namespace starforge {

struct RunConfig {
  Task task = Task::kEvent;
  std::string ontology_path;
  std::string seeds_path;
  std::string pools_path;
  std::string plan_path;
  std::string input_path;   // dataset read by refine/export/stats/validate
  std::string output_path;  // dataset written by generate/refine
  std::string export_path;
  std::string stats_path;
  std::string dump_prompts_dir;

  GenerationConfig generation;
  PoolSizes pool_sizes;
  size_t pool_max_queries = 10;
  size_t pool_hard_cap = 500;
  ModelSettings model;
  Strategy strategy = Strategy::kReflectLLM;
  int max_iterations = 3;
  BackendConfig backend;
  CheckerConfig checkers;
  int workers = 1;
  bool with_refine = false;
  bool drop_flagged = false;

  // Reads the JSON config at `config_path` (may be empty), resolves its
  // relative paths against the file's directory, then applies `overrides`
  // (same shape, paths relative to the working directory) on top.
  // Throws Error(kConfig) for a missing rng_seed or invalid values.
  static RunConfig Load(const std::string &config_path,
                        const nlohmann::json &overrides);
  static RunConfig FromJson(const nlohmann::json &j);

  // Dataset read by commands that consume one: input_path, or output_path
  // when no input is set.
  std::string DatasetIn() const;
};

// Seeds restricted to the first k demonstrations of every type.
std::vector<SeedDemonstration> LimitSeeds(const std::vector<SeedDemonstration> &seeds,
                                          const Ontology &ontology, Task task, int k);

// Instance identifier for plan position `index`.
std::string InstanceId(Task task, size_t index);

// Shared state for generating and refining a batch.
struct BatchContext {
  const RunConfig *config = nullptr;
  const Ontology *ontology = nullptr;
  std::vector<SeedDemonstration> seeds;  // already limited to k per type
  const PoolSet *pools = nullptr;
  ChatBackend *backend = nullptr;
  const Checkers *checkers = nullptr;
  std::string created_at;
};

// Runs `fn(i)` for i in [0, count) on `workers` threads. Results come back in
// index order; the lowest-index exception is rethrown after all work stops.
template <typename T, typename Fn>
std::vector<T> OrderedParallel(size_t count, int workers, Fn fn);

// Generation prompt for `y` against the batch's seeds.
PromptBundle PromptFor(const TargetStructure &y, const BatchContext &ctx);

// Samples, prompts, decodes and (if requested) refines plan item `index`.
DataInstance GenerateInstance(size_t index, const PlanItem &item,
                              const BatchContext &ctx, bool refine);

std::vector<DataInstance> GenerateBatch(const BatchPlan &plan,
                                        const BatchContext &ctx, bool refine);

// Refines an existing instance with the configured strategy.
DataInstance RefineInstance(const DataInstance &instance, const BatchContext &ctx);

// Executes one subcommand. Returns 0 on success and 1 when `validate` finds
// problems; other failures throw Error.
int RunCommand(const std::string &command, const RunConfig &config,
               std::ostream &diag);

}  // namespace starforge

#include "core/pipeline_inl.h"

#endif  // STAR_FORGE_CORE_PIPELINE_H_
