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

#ifndef STAR_FORGE_CORE_PIPELINE_INL_H_
#define STAR_FORGE_CORE_PIPELINE_INL_H_

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <thread>

namespace starforge {

template <typename T, typename Fn>
std::vector<T> OrderedParallel(size_t count, int workers, Fn fn) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    while (!failed.load()) {
      const size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
        failed.store(true);
      }
    }
  };
  const size_t n = std::min<size_t>(count, static_cast<size_t>(std::max(1, workers)));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (size_t i = 0; i < n; ++i) threads.emplace_back(worker);
    for (auto &t : threads) t.join();
  }
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> out;
  out.reserve(count);
  for (auto &s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace starforge

#endif  // STAR_FORGE_CORE_PIPELINE_INL_H_
