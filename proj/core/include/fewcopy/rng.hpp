// Copyright 2026 The fewcopy Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace fewcopy {

/// splitmix64 step; used to decorrelate derived seeds.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent stream for repetition `index` of an experiment seeded with
/// `seed`. Protocol repetitions each draw their own stream so results are
/// reproducible regardless of how repetitions are scheduled across workers.
inline std::mt19937_64 derive_rng(uint64_t seed, uint64_t index) {
  return std::mt19937_64(mix64(mix64(seed) ^ mix64(index + 0x51ed2701)));
}

}  // namespace fewcopy
