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

#include "fewcopy/state_vector.hpp"
#include "fewcopy/witness.hpp"

using namespace fewcopy;

static void BM_SampleLocalMeasurement(benchmark::State &state) {
  int n = static_cast<int>(state.range(0));
  StateVector s = prepare_linear_cluster(n, true, kHardQubitCap);
  std::vector<PauliBasis> bases(n);
  for (int q = 0; q < n; ++q) {
    bases[q] = q % 3 == 0 ? PauliBasis::Z : (q % 3 == 1 ? PauliBasis::X : PauliBasis::Y);
  }
  std::mt19937_64 rng(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_local_measurement(s, bases, rng));
  }
}
BENCHMARK(BM_SampleLocalMeasurement)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMicrosecond);

static void BM_PauliProductDense(benchmark::State &state) {
  int n = static_cast<int>(state.range(0));
  StateVector tmpl = prepare_linear_cluster(n, true, kHardQubitCap);
  SignedPauli g;
  g.word.factors.emplace(n - 1, PauliBasis::Z);
  g.word.factors.emplace(0, PauliBasis::X);
  g.word.factors.emplace(1, PauliBasis::Z);
  std::mt19937_64 rng(5);
  for (auto _ : state) {
    StateVector s = tmpl;
    benchmark::DoNotOptimize(measure_pauli_product(s, g, rng));
  }
}
BENCHMARK(BM_PauliProductDense)->Arg(12)->Arg(16)->Arg(20)->Unit(benchmark::kMicrosecond);

static void BM_WitnessRound(benchmark::State &state) {
  SamplingTable w1 = witness_w1_cluster6();
  NoisyStateSource source(prepare_cluster6_h(), 11);
  WitnessOptions opts;
  opts.keep_round_log = false;
  uint64_t seed = 13;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_witness_protocol(w1, source, 100, seed++, opts));
  }
}
BENCHMARK(BM_WitnessRound)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
