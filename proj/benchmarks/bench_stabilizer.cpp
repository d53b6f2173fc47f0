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

#include <benchmark/benchmark.h>

#include <random>

#include "fewcopy/detect.hpp"
#include "fewcopy/stabilizer.hpp"

using namespace fewcopy;

static void BM_TableauClone(benchmark::State &state) {
  int n = static_cast<int>(state.range(0));
  StabilizerTableau tmpl = init_linear_cluster(n, true);
  for (auto _ : state) {
    StabilizerTableau copy = tmpl;
    benchmark::DoNotOptimize(copy);
  }
}
BENCHMARK(BM_TableauClone)->Arg(48)->Arg(240)->Arg(960);

static void BM_PauliProductMeasurement(benchmark::State &state) {
  int n = static_cast<int>(state.range(0));
  StabilizerTableau tmpl = init_linear_cluster(n, true);
  std::mt19937_64 rng(1);
  SparsePauli p;
  p.factors.emplace(0, PauliBasis::Z);
  p.factors.emplace(1, PauliBasis::Y);
  p.factors.emplace(2, PauliBasis::Y);
  p.factors.emplace(3, PauliBasis::Z);
  for (auto _ : state) {
    StabilizerTableau t = tmpl;
    benchmark::DoNotOptimize(t.measure(p, rng));
  }
}
BENCHMARK(BM_PauliProductMeasurement)->Arg(48)->Arg(240)->Arg(960);

// the acceptance-relevant unit: one full protocol round (partition, draw
// settings, measure every qubit, score the clusters)
static void BM_LcsSingleRound(benchmark::State &state) {
  int n = static_cast<int>(state.range(0));
  LcsBackend backend{init_linear_cluster(n, true)};
  DetectOptions opts;
  opts.keep_round_log = false;
  uint64_t seed = 7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_lcs_protocol(backend, n, n / 3, 1, seed++, opts));
  }
}
BENCHMARK(BM_LcsSingleRound)->Arg(48)->Arg(240)->Arg(960)->Unit(benchmark::kMillisecond);
