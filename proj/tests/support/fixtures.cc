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

#include "support/fixtures.h"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <random>
#include <stdexcept>

#include "core/digest.h"
#include "core/io.h"
#include "core/structure.h"

extern char **environ;

namespace starforge::testing {

namespace fs = std::filesystem;

fs::path FixtureDir() { return SF_FIXTURE_DIR; }

fs::path Fixture(const std::string &relative) { return FixtureDir() / relative; }

std::string CliPath() { return SF_CLI_PATH; }

std::string NoNetShimPath() { return SF_NONET_SHIM; }

const Ontology &ToyOntology() {
  static const Ontology kOntology =
      Ontology::LoadFile(Fixture("toy/ontology.json").string());
  return kOntology;
}

std::vector<SeedDemonstration> ToySeeds() {
  return LoadSeeds(Fixture("toy/seeds.jsonl").string(), ToyOntology(), Task::kEvent);
}

PoolSet ToyPools() { return PoolSet::LoadJsonl(Fixture("e2e/pools.jsonl").string()); }

ScratchDir::ScratchDir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("star-forge-test-" + std::to_string(::getpid()) + "-" +
           std::to_string(counter++) + "-" + std::to_string(rd()));
  fs::create_directories(path_);
}

ScratchDir::~ScratchDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

ProcessResult RunProcess(const std::vector<std::string> &argv,
                         const std::map<std::string, std::string> &env) {
  std::map<std::string, std::string> merged;
  for (char **e = environ; *e != nullptr; ++e) {
    const char *eq = std::strchr(*e, '=');
    if (eq != nullptr) merged[std::string(*e, static_cast<size_t>(eq - *e))] = eq + 1;
  }
  for (const auto &[k, v] : env) {
    if (v.empty()) {
      merged.erase(k);
    } else {
      merged[k] = v;
    }
  }
  std::vector<std::string> env_strings;
  for (const auto &[k, v] : merged) env_strings.push_back(k + "=" + v);
  std::vector<char *> envp;
  for (auto &s : env_strings) envp.push_back(s.data());
  envp.push_back(nullptr);
  std::vector<std::string> args = argv;
  std::vector<char *> argp;
  for (auto &s : args) argp.push_back(s.data());
  argp.push_back(nullptr);

  int pipe_fd[2];
  if (::pipe(pipe_fd) != 0) throw std::runtime_error("pipe failed");
  const pid_t pid = ::fork();
  if (pid < 0) throw std::runtime_error("fork failed");
  if (pid == 0) {
    ::dup2(pipe_fd[1], STDERR_FILENO);
    ::close(pipe_fd[0]);
    ::close(pipe_fd[1]);
    ::execve(argp[0], argp.data(), envp.data());
    ::_exit(127);
  }
  ::close(pipe_fd[1]);
  ProcessResult result;
  char buf[4096];
  ssize_t n;
  while ((n = ::read(pipe_fd[0], buf, sizeof buf)) > 0) result.err.append(buf, n);
  ::close(pipe_fd[0]);
  int status = 0;
  ::waitpid(pid, &status, 0);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string FileSha256(const std::string &path) { return Sha256Hex(ReadFile(path)); }

RefineCase LoadRefineCase() {
  const ojson j = ojson::parse(ReadFile(Fixture("refine/case.json").string()));
  RefineCase c;
  c.structure = TargetStructureFromJson(j.at("structure"), Task::kEvent);
  c.passage.text = j.at("passage").get<std::string>();
  for (const auto &s : j.at("spans")) c.passage.spans.push_back(SpanFromJson(s));
  c.prompt = j.at("prompt").get<std::string>();
  return c;
}

}  // namespace starforge::testing
