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

// Candidate pools: deduplicated mention lists that target structures are
// sampled from. Trigger pools are keyed by event type, argument pools by
// (event type, role), entity pools (relation task) by entity type.

#ifndef STAR_FORGE_CORE_POOLS_H_
#define STAR_FORGE_CORE_POOLS_H_

#include <compare>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "core/backend.h"
#include "core/ontology.h"
#include "core/seeds.h"
#include "core/structure.h"

namespace starforge {

struct PoolKey {
  enum class Kind { kTrigger, kArgument, kEntity };

  Kind kind = Kind::kTrigger;
  std::string event_type;   // trigger, argument
  std::string role;         // argument
  std::string entity_type;  // entity

  static PoolKey Trigger(std::string event_type);
  static PoolKey Argument(std::string event_type, std::string role);
  static PoolKey Entity(std::string entity_type);

  std::string ToString() const;
  ojson ToJson() const;
  static PoolKey FromJson(const ojson &j);

  // Throws Error(kValidation) if a referenced name is missing.
  void Validate(const Ontology &ontology) const;

  bool operator==(const PoolKey &) const = default;
  auto operator<=>(const PoolKey &) const = default;
};

struct PoolProvenance {
  std::string request_hash;
  std::string response_id;

  bool operator==(const PoolProvenance &) const = default;
};

class CandidatePool {
 public:
  CandidatePool() = default;
  CandidatePool(PoolKey key, size_t target_size);

  const PoolKey &key() const { return key_; }
  const std::vector<std::string> &candidates() const { return candidates_; }
  const std::vector<PoolProvenance> &provenance() const { return provenance_; }
  size_t target_size() const { return target_size_; }
  bool complete() const { return complete_; }
  size_t size() const { return candidates_.size(); }
  bool empty() const { return candidates_.empty(); }

  // Adds a mention unless empty, already present after normalization, or the
  // pool is at `hard_cap`. Returns true if added.
  bool Add(const std::string &mention, size_t hard_cap = SIZE_MAX);
  bool Contains(const std::string &mention) const;

  void AddProvenance(PoolProvenance p) { provenance_.push_back(std::move(p)); }
  void set_complete(bool complete) { complete_ = complete; }
  void set_target_size(size_t n) { target_size_ = n; }

  ojson ToJson() const;
  static CandidatePool FromJson(const ojson &j);

  bool operator==(const CandidatePool &o) const {
    return key_ == o.key_ && candidates_ == o.candidates_ &&
           provenance_ == o.provenance_ && target_size_ == o.target_size_ &&
           complete_ == o.complete_;
  }

 private:
  PoolKey key_;
  std::vector<std::string> candidates_;
  std::set<std::string> normalized_;
  std::vector<PoolProvenance> provenance_;
  size_t target_size_ = 1;
  bool complete_ = false;
};

class PoolSet {
 public:
  void Put(CandidatePool pool);
  const CandidatePool *Find(const PoolKey &key) const;
  // Throws Error(kMissingPool) if absent or empty.
  const CandidatePool &Require(const PoolKey &key) const;
  const std::map<PoolKey, CandidatePool> &pools() const { return pools_; }

  static PoolSet LoadJsonl(const std::string &path);
  void SaveJsonl(const std::string &path) const;

 private:
  std::map<PoolKey, CandidatePool> pools_;
};

struct TriggerParse {
  std::vector<std::string> candidates;
  std::vector<std::string> warnings;
};

std::string BuildTriggerPrompt(const EventTypeSpec &event_type,
                               const std::vector<SeedDemonstration> &demos);

TriggerParse ParseTriggerCandidates(const std::string &response);

// Throws Error(kDisallowedEntityType).
std::string BuildArgumentPrompt(const EventTypeSpec &event_type,
                                const ArgumentRoleSpec &role,
                                const std::string &entity_type);

std::vector<std::string> ParseListResponse(const std::string &response);

// Seed entities used as in-context examples for an entity pool.
std::vector<std::string> SeedEntitiesOfType(
    const std::vector<SeedDemonstration> &seeds, const std::string &entity_type);

std::string BuildEntityPrompt(const std::string &entity_type,
                              const std::vector<std::string> &examples);

// Union of pools sharing a key (argument pools may differ only by the entity
// type they were queried with). Throws Error(kKeyMismatch).
CandidatePool MergePools(const std::vector<CandidatePool> &pools);

struct PoolFillOptions {
  size_t max_queries = 10;
  size_t hard_cap = 500;
  ModelSettings model;
};

struct PoolSizes {
  size_t trigger = 100;
  size_t argument = 50;
  size_t entity = 100;
};

// Queries `backend` until the pool holds `target_size` distinct candidates or
// `max_queries` requests have been made. Backend errors propagate.
CandidatePool FillPool(const PoolKey &key, size_t target_size,
                       ChatBackend &backend,
                       const std::vector<SeedDemonstration> &demos,
                       const Ontology &ontology, const PoolFillOptions &options);

CandidatePool GenerateEntityCandidates(
    const std::string &entity_type, const std::vector<SeedDemonstration> &seeds,
    ChatBackend &backend, const Ontology &ontology, size_t target_size,
    const PoolFillOptions &options);

// Every pool key a run over `task` needs, in ontology order.
std::vector<PoolKey> RequiredPoolKeys(const Ontology &ontology, Task task);

}  // namespace starforge

#endif  // STAR_FORGE_CORE_POOLS_H_
