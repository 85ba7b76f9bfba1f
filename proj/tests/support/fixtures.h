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

// Shared test helpers: fixture locations, scratch directories and running
// the command-line tool as a child process.

#ifndef STAR_FORGE_TESTS_SUPPORT_FIXTURES_H_
#define STAR_FORGE_TESTS_SUPPORT_FIXTURES_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "core/ontology.h"
#include "core/pools.h"
#include "core/seeds.h"
#include "core/structure.h"

namespace starforge::testing {

std::filesystem::path FixtureDir();
std::filesystem::path Fixture(const std::string &relative);
std::string CliPath();
std::string NoNetShimPath();

// The three-type event ontology and its seeds.
const Ontology &ToyOntology();
std::vector<SeedDemonstration> ToySeeds();
// Checked-in pools for the toy ontology.
PoolSet ToyPools();

// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  ScratchDir();
  ~ScratchDir();
  ScratchDir(const ScratchDir &) = delete;
  ScratchDir &operator=(const ScratchDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::string File(const std::string &name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

struct ProcessResult {
  int exit_code = -1;
  std::string err;  // captured standard error
};

// Runs `argv` with `env` added to (and overriding) the current environment;
// variables mapped to "" are removed.
ProcessResult RunProcess(const std::vector<std::string> &argv,
                         const std::map<std::string, std::string> &env = {});

std::string FileSha256(const std::string &path);

// The single-flag refinement scenario shared by the refine cassettes.
struct RefineCase {
  TargetStructure structure;
  AnnotatedPassage passage;
  std::string prompt;
};
RefineCase LoadRefineCase();

}  // namespace starforge::testing

#endif  // STAR_FORGE_TESTS_SUPPORT_FIXTURES_H_
