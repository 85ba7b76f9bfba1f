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

#ifndef STAR_FORGE_CORE_RNG_H_
#define STAR_FORGE_CORE_RNG_H_

#include <cstdint>
#include <random>
#include <vector>

namespace starforge {

// SplitMix64 finalizer. Used to derive independent sub-seeds.
uint64_t MixSeed(uint64_t x);

// Derives a sub-seed from a parent seed and a sequence of discriminators.
uint64_t DeriveSeed(uint64_t parent, std::initializer_list<uint64_t> parts);

// Seedable generator with a fully specified output sequence. std::mt19937_64
// is pinned by the standard; the standard distributions are not, so bounded
// draws are implemented here to keep results identical across platforms.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t Next() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  uint64_t Uniform(uint64_t n);

  // Uniform double in [0, 1) with 53 bits of precision.
  double UniformReal();

  // Fisher-Yates shuffle driven by Uniform().
  template <typename T>
  void Shuffle(std::vector<T> &items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Uniform(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // `count` distinct indices from [0, n), uniformly without replacement.
  std::vector<size_t> SampleWithoutReplacement(size_t n, size_t count);

 private:
  std::mt19937_64 engine_;
};

}  // namespace starforge

#endif  // STAR_FORGE_CORE_RNG_H_
