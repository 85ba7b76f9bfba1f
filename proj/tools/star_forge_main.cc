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

// star-forge: command-line front end over the C API.
//
//   star-forge <command> [--config FILE] [overrides...]
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error,
// 3 backend failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "star_forge/star_forge.h"

namespace {

using json = nlohmann::json;

// Flags shared by every subcommand; unset flags leave the config untouched.
struct Overrides {
  std::string config;
  std::optional<std::string> task, ontology, seeds, pools, plan, input, output;
  std::optional<std::string> export_path, stats, dump_prompts, strategy, model;
  std::optional<std::string> replay, record, endpoint;
  std::optional<uint64_t> seed;
  std::optional<int> k, n, max_density, max_iterations, workers;
  std::vector<double> bins;
  bool with_refine = false;
  bool drop_flagged = false;

  json ToJson() const {
    json j = json::object();
    auto put = [&](const char *key, const auto &v) {
      if (v) j[key] = *v;
    };
    put("task", task);
    put("ontology", ontology);
    put("seeds", seeds);
    put("pools", pools);
    put("plan", plan);
    put("input", input);
    put("output", output);
    put("export", export_path);
    put("stats", stats);
    put("dump_prompts", dump_prompts);
    put("strategy", strategy);
    put("max_iterations", max_iterations);
    put("workers", workers);
    if (with_refine) j["with_refine"] = true;
    if (drop_flagged) j["drop_flagged"] = true;

    json gen = json::object();
    if (seed) gen["rng_seed"] = *seed;
    if (k) gen["k"] = *k;
    if (n) gen["n"] = *n;
    if (max_density) gen["max_density"] = *max_density;
    if (!bins.empty()) gen["hallucination_bins"] = bins;
    if (!gen.empty()) j["generation"] = gen;

    if (model) j["model"] = {{"model_id", *model}};

    json backend = json::object();
    if (replay) backend = {{"mode", "replay"}, {"cassette_path", *replay}};
    if (record) backend = {{"mode", "record"}, {"cassette_path", *record}};
    if (endpoint) backend["endpoint_url"] = *endpoint;
    if (!backend.empty()) j["backend"] = backend;
    return j;
  }
};

void AddCommonFlags(CLI::App *cmd, Overrides &o) {
  cmd->add_option("-c,--config", o.config, "Run configuration (JSON)");
  cmd->add_option("--task", o.task, "EE or RE");
  cmd->add_option("--ontology", o.ontology, "Ontology file");
  cmd->add_option("--seeds", o.seeds, "Seed demonstrations (JSONL)");
  cmd->add_option("--pools", o.pools, "Candidate pools (JSONL)");
  cmd->add_option("--plan", o.plan, "Batch plan file");
  cmd->add_option("--input", o.input, "Dataset to read");
  cmd->add_option("--output", o.output, "Dataset to write");
  cmd->add_option("--export", o.export_path, "Span-format export file");
  cmd->add_option("--stats", o.stats, "Statistics file");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--k", o.k, "Demonstrations per type");
  cmd->add_option("--n", o.n, "Instances per type");
  cmd->add_option("--max-density", o.max_density, "Maximum events per passage");
  cmd->add_option("--bins", o.bins, "Hallucination ratio bins");
  cmd->add_option("--strategy", o.strategy,
                  "none, rule-based, reflect-entailment or reflect-llm");
  cmd->add_option("--max-iterations", o.max_iterations, "Refinement budget");
  cmd->add_option("--workers", o.workers, "Parallel workers");
  cmd->add_option("--model", o.model, "Model identifier");
  cmd->add_option("--endpoint", o.endpoint, "Chat completion endpoint URL");
  auto *replay = cmd->add_option("--replay", o.replay, "Serve responses from a cassette");
  auto *record = cmd->add_option("--record", o.record, "Record responses to a cassette");
  replay->excludes(record);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"star-forge: synthetic information-extraction data generation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sf_version());

  Overrides o;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"pools", "Fill trigger, argument or entity candidate pools"},
      {"plan", "Write the balanced batch plan"},
      {"generate", "Generate passages for every plan item"},
      {"refine", "Refine an existing dataset"},
      {"export", "Export a dataset to token-level span format"},
      {"stats", "Compute dataset distribution statistics"},
      {"validate", "Check a dataset and report quality flags"},
  };
  for (const auto &[name, help] : commands) {
    CLI::App *cmd = app.add_subcommand(name, help);
    AddCommonFlags(cmd, o);
    if (name == "generate") {
      cmd->add_flag("--with-refine", o.with_refine, "Refine after generation");
      cmd->add_option("--dump-prompts", o.dump_prompts, "Write prompts to DIR");
    }
    if (name == "export") {
      cmd->add_flag("--drop-flagged", o.drop_flagged,
                    "Skip instances with remaining flags");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  sf_context *ctx = sf_context_create();
  if (ctx == nullptr) {
    std::cerr << "star-forge: out of memory\n";
    return 2;
  }
  const std::string overrides = o.ToJson().dump();
  const sf_status status = sf_run_command(
      ctx, command.c_str(), o.config.empty() ? nullptr : o.config.c_str(),
      overrides.c_str());
  if (status != SF_OK) {
    std::cerr << "star-forge " << command << ": " << sf_status_name(status) << ": "
              << sf_context_last_error(ctx) << "\n";
  }
  sf_context_free(ctx);
  return sf_status_exit_code(status);
}
