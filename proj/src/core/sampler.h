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

// Distribution-controlled sampling of target structures.
//
// A BatchPlan fixes, for every instance to generate, its primary type, event
// density and hallucination ratio so that types, densities and ratios are
// balanced. Sampling a plan item then draws concrete mentions from the
// candidate pools with the item's own seed, so items can be sampled in any
// order or in parallel with identical results.

#ifndef STAR_FORGE_CORE_SAMPLER_H_
#define STAR_FORGE_CORE_SAMPLER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "core/ontology.h"
#include "core/pools.h"
#include "core/rng.h"
#include "core/structure.h"

namespace starforge {

struct GenerationConfig {
  int k = 0;            // demonstrations per type
  int n = 0;            // instances per type
  int max_density = 5;  // events per passage: 0..max_density
  std::vector<double> hallucination_bins = {0.0, 0.25, 0.5, 0.75, 1.0};
  uint64_t rng_seed = 0;

  // Throws Error(kConfig).
  void Validate() const;
};

struct PlanItem {
  std::string primary_type;
  int density = 1;
  double hallucination_bin = 0.0;
  uint64_t item_seed = 0;

  bool operator==(const PlanItem &) const = default;
};

struct BatchPlan {
  Task task = Task::kEvent;
  std::vector<PlanItem> items;
};

ojson ToJson(const PlanItem &item);
PlanItem PlanItemFromJson(const ojson &j);

// n items per event type (relation type for Task::kRelation), interleaved by
// type. Within a type densities cycle over 0..max_density and bins cycle over
// the configured ratios, each as a seeded permutation of a balanced multiset.
// Throws Error(kEmptyOntology) when there are no types.
BatchPlan PlanBatch(const GenerationConfig &config, const Ontology &ontology,
                    Task task = Task::kEvent);

void SavePlan(const std::string &path, const BatchPlan &plan);
BatchPlan LoadPlan(const std::string &path);

// round_half_up(ratio * role_count).
size_t HallucinationCount(double ratio, size_t role_count);

// Sets exactly HallucinationCount(ratio, |args|) roles to None, chosen
// uniformly without replacement.
EventSpec ApplyHallucination(EventSpec event, double ratio, Rng &rng);

// Throws Error(kMissingPool) when a required pool is absent or empty.
TargetStructure SampleTargetStructure(const PlanItem &item, const PoolSet &pools,
                                      const Ontology &ontology);

// Throws Error(kInsufficientCandidates) without two distinct entities.
TargetStructure SampleRelationStructure(const PlanItem &item,
                                        const PoolSet &entity_pools,
                                        const Ontology &ontology);

}  // namespace starforge

#endif  // STAR_FORGE_CORE_SAMPLER_H_
