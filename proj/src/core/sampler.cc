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

#include "core/sampler.h"

#include <algorithm>
#include <cmath>

#include "core/error.h"
#include "core/io.h"
#include "core/text.h"

namespace starforge {

namespace {

// Domain tags for DeriveSeed so the derived streams never collide.
constexpr uint64_t kDensityStream = 1;
constexpr uint64_t kBinStream = 2;
constexpr uint64_t kItemStream = 3;

std::vector<std::string> PlanTypes(const Ontology &ontology, Task task) {
  std::vector<std::string> types;
  if (task == Task::kRelation) {
    for (const auto &r : ontology.relation_types()) types.push_back(r.name);
  } else {
    for (const auto &e : ontology.event_types()) types.push_back(e.name);
  }
  return types;
}

// Balanced multiset over [0, buckets) of size n, seeded permutation.
std::vector<size_t> BalancedAssignment(size_t n, size_t buckets, uint64_t seed) {
  std::vector<size_t> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = i % buckets;
  Rng rng(seed);
  rng.Shuffle(out);
  return out;
}

const std::string &Draw(const CandidatePool &pool, Rng &rng) {
  return pool.candidates()[rng.Uniform(pool.size())];
}

}  // namespace

void GenerationConfig::Validate() const {
  if (k < 0) Fail(ErrorCode::kConfig, "k must be non-negative");
  if (n < 0) Fail(ErrorCode::kConfig, "n must be non-negative");
  if (max_density < 0) Fail(ErrorCode::kConfig, "max_density must be >= 0");
  if (hallucination_bins.empty()) {
    Fail(ErrorCode::kConfig, "hallucination_bins must not be empty");
  }
  for (size_t i = 0; i < hallucination_bins.size(); ++i) {
    const double b = hallucination_bins[i];
    if (!(b >= 0.0 && b <= 1.0)) {
      Fail(ErrorCode::kConfig, "hallucination bins must lie in [0, 1]");
    }
    if (i > 0 && b < hallucination_bins[i - 1]) {
      Fail(ErrorCode::kConfig, "hallucination bins must be sorted");
    }
  }
}

ojson ToJson(const PlanItem &item) {
  return {{"primary_type", item.primary_type},
          {"density", item.density},
          {"hallucination_bin", item.hallucination_bin},
          {"item_seed", item.item_seed}};
}

PlanItem PlanItemFromJson(const ojson &j) {
  try {
    PlanItem item;
    item.primary_type = j.at("primary_type").get<std::string>();
    item.density = j.at("density").get<int>();
    item.hallucination_bin = j.at("hallucination_bin").get<double>();
    item.item_seed = j.at("item_seed").get<uint64_t>();
    return item;
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kParse, std::string("plan item: ") + e.what());
  }
}

BatchPlan PlanBatch(const GenerationConfig &config, const Ontology &ontology,
                    Task task) {
  config.Validate();
  const std::vector<std::string> types = PlanTypes(ontology, task);
  if (types.empty()) {
    Fail(ErrorCode::kEmptyOntology, task == Task::kRelation
                                        ? "ontology has no relation types"
                                        : "ontology has no event types");
  }
  const size_t n = static_cast<size_t>(config.n);
  const size_t densities = static_cast<size_t>(config.max_density) + 1;
  const size_t bins = config.hallucination_bins.size();

  std::vector<std::vector<size_t>> density_of(types.size());
  std::vector<std::vector<size_t>> bin_of(types.size());
  for (size_t t = 0; t < types.size(); ++t) {
    density_of[t] = BalancedAssignment(
        n, densities, DeriveSeed(config.rng_seed, {kDensityStream, t}));
    bin_of[t] =
        BalancedAssignment(n, bins, DeriveSeed(config.rng_seed, {kBinStream, t}));
  }

  BatchPlan plan;
  plan.task = task;
  plan.items.reserve(n * types.size());
  for (size_t i = 0; i < n; ++i) {
    for (size_t t = 0; t < types.size(); ++t) {
      PlanItem item;
      item.primary_type = types[t];
      item.item_seed = DeriveSeed(config.rng_seed, {kItemStream, t, i});
      if (task == Task::kRelation) {
        item.density = 1;
        item.hallucination_bin = 0.0;
      } else {
        item.density = static_cast<int>(density_of[t][i]);
        item.hallucination_bin = config.hallucination_bins[bin_of[t][i]];
      }
      plan.items.push_back(std::move(item));
    }
  }
  return plan;
}

void SavePlan(const std::string &path, const BatchPlan &plan) {
  std::string out;
  out += ojson{{"task", TaskName(plan.task)}, {"items", plan.items.size()}}.dump();
  out += '\n';
  for (const auto &item : plan.items) {
    out += ToJson(item).dump();
    out += '\n';
  }
  WriteFile(path, out);
}

BatchPlan LoadPlan(const std::string &path) {
  std::vector<std::string> lines = ReadNonEmptyLines(path);
  if (lines.empty()) Fail(ErrorCode::kParse, path + ": empty plan file");
  BatchPlan plan;
  try {
    ojson header = ojson::parse(lines[0]);
    plan.task = ParseTask(header.at("task").get<std::string>());
    for (size_t i = 1; i < lines.size(); ++i) {
      plan.items.push_back(PlanItemFromJson(ojson::parse(lines[i])));
    }
  } catch (const nlohmann::json::exception &e) {
    Fail(ErrorCode::kParse, path + ": " + e.what());
  }
  return plan;
}

size_t HallucinationCount(double ratio, size_t role_count) {
  double x = std::floor(ratio * static_cast<double>(role_count) + 0.5);
  if (x < 0) return 0;
  return std::min(role_count, static_cast<size_t>(x));
}

EventSpec ApplyHallucination(EventSpec event, double ratio, Rng &rng) {
  const size_t count = HallucinationCount(ratio, event.args.size());
  for (size_t idx : rng.SampleWithoutReplacement(event.args.size(), count)) {
    event.args[idx].mention.reset();
  }
  return event;
}

TargetStructure SampleTargetStructure(const PlanItem &item, const PoolSet &pools,
                                      const Ontology &ontology) {
  const std::vector<std::string> types = PlanTypes(ontology, Task::kEvent);
  if (types.empty()) Fail(ErrorCode::kEmptyOntology, "no event types");
  Rng rng(item.item_seed);
  TargetStructure y;
  y.task = Task::kEvent;
  for (int e = 0; e < item.density; ++e) {
    const std::string &type_name =
        e == 0 ? item.primary_type : types[rng.Uniform(types.size())];
    const EventTypeSpec &type = ontology.EventType(type_name);
    EventSpec event;
    event.event_type = type.name;
    event.trigger = Draw(pools.Require(PoolKey::Trigger(type.name)), rng);
    for (const auto &role : type.roles) {
      const CandidatePool &pool =
          pools.Require(PoolKey::Argument(type.name, role.role));
      event.args.push_back({role.role, Draw(pool, rng)});
    }
    y.events.push_back(ApplyHallucination(std::move(event),
                                          item.hallucination_bin, rng));
  }
  return y;
}

namespace {

// Candidates allowed for one side of a relation, deduplicated.
CandidatePool SideCandidates(const std::vector<std::string> &constraint,
                             const PoolSet &pools, const Ontology &ontology) {
  const std::vector<std::string> &types =
      constraint.empty() ? ontology.entity_types() : constraint;
  CandidatePool out(PoolKey::Entity("*"), 1);
  for (const auto &t : types) {
    if (const CandidatePool *p = pools.Find(PoolKey::Entity(t))) {
      for (const auto &c : p->candidates()) out.Add(c);
    }
  }
  return out;
}

}  // namespace

TargetStructure SampleRelationStructure(const PlanItem &item,
                                        const PoolSet &entity_pools,
                                        const Ontology &ontology) {
  const RelationTypeSpec &relation = ontology.RelationType(item.primary_type);
  const CandidatePool subjects =
      SideCandidates(relation.subject_types, entity_pools, ontology);
  const CandidatePool objects =
      SideCandidates(relation.object_types, entity_pools, ontology);

  // Subjects that have at least one distinct object available.
  std::vector<size_t> viable;
  for (size_t i = 0; i < subjects.size(); ++i) {
    const std::string key = NormalizeMention(subjects.candidates()[i]);
    for (const auto &o : objects.candidates()) {
      if (NormalizeMention(o) != key) {
        viable.push_back(i);
        break;
      }
    }
  }
  if (viable.empty()) {
    Fail(ErrorCode::kInsufficientCandidates,
         "relation " + relation.name + " needs two distinct entity candidates");
  }
  Rng rng(item.item_seed);
  const std::string &subject = subjects.candidates()[viable[rng.Uniform(viable.size())]];
  std::vector<const std::string *> others;
  for (const auto &o : objects.candidates()) {
    if (NormalizeMention(o) != NormalizeMention(subject)) others.push_back(&o);
  }
  TargetStructure y;
  y.task = Task::kRelation;
  y.relation = {subject, *others[rng.Uniform(others.size())], relation.name};
  return y;
}

}  // namespace starforge
