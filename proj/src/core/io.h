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

#ifndef STAR_FORGE_CORE_IO_H_
#define STAR_FORGE_CORE_IO_H_

#include <chrono>
#include <string>
#include <vector>

namespace starforge {

// Throw Error(kIo) on failure.
std::string ReadFile(const std::string &path);
void WriteFile(const std::string &path, const std::string &contents);

// Non-empty lines of a text file.
std::vector<std::string> ReadNonEmptyLines(const std::string &path);

// "2026-10-18T12:00:00Z" style UTC timestamp.
std::string FormatRfc3339(std::chrono::system_clock::time_point t);

}  // namespace starforge

#endif  // STAR_FORGE_CORE_IO_H_
