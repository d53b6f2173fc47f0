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

#include <atomic>
#include <cstdint>
#include <random>

#include "fewcopy/state_vector.hpp"

namespace fewcopy {

/// Per-shot sampler for the mixture lambda * rho_noise + (1-lambda) * rho_target.
/// Each emitted shot is one of the two pure prototypes; no density matrix is
/// ever materialized. Shots drawn from the owned stream (seeded at
/// construction) or from a caller-provided stream.
class NoisyStateSource {
 public:
  NoisyStateSource(StateVector target, StateVector noise_state, double lambda, uint64_t seed);
  /// Noise-free source (lambda = 0); the noise prototype is unused.
  NoisyStateSource(StateVector target, uint64_t seed);

  const StateVector &target() const { return target_; }
  const StateVector &noise_state() const { return noise_; }
  double lambda() const { return lambda_; }
  int n_qubits() const { return target_.n_qubits(); }

  /// Fresh copy of the emitted prototype.
  StateVector next_shot() { return next_shot(rng_); }
  StateVector next_shot(std::mt19937_64 &rng);

  /// true when the shot is the noise branch; the reference stays valid until
  /// the source is destroyed. Avoids copying amplitudes on hot paths.
  /// Thread-safe when each worker brings its own stream.
  std::pair<bool, const StateVector *> next_shot_ref(std::mt19937_64 &rng);

  /// Number of shots emitted so far (record-reuse instrumentation).
  uint64_t shots_emitted() const { return shots_.load(std::memory_order_relaxed); }

 private:
  StateVector target_;
  StateVector noise_;
  double lambda_;
  std::mt19937_64 rng_;  // backs the no-argument next_shot only
  std::atomic<uint64_t> shots_{0};
};

}  // namespace fewcopy
