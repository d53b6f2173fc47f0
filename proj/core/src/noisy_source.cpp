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

#include "fewcopy/noisy_source.hpp"

#include <stdexcept>

namespace fewcopy {

NoisyStateSource::NoisyStateSource(StateVector target, StateVector noise_state, double lambda,
                                   uint64_t seed)
    : target_(std::move(target)),
      noise_(std::move(noise_state)),
      lambda_(lambda),
      rng_(seed) {
  if (lambda_ < 0.0 || lambda_ > 1.0) throw std::invalid_argument("lambda must be in [0, 1]");
  if (lambda_ > 0.0 && noise_.n_qubits() != target_.n_qubits()) {
    throw std::invalid_argument("noise state width does not match target");
  }
}

NoisyStateSource::NoisyStateSource(StateVector target, uint64_t seed)
    : NoisyStateSource(target, target, 0.0, seed) {}

StateVector NoisyStateSource::next_shot(std::mt19937_64 &rng) {
  return *next_shot_ref(rng).second;
}

std::pair<bool, const StateVector *> NoisyStateSource::next_shot_ref(std::mt19937_64 &rng) {
  shots_.fetch_add(1, std::memory_order_relaxed);
  if (lambda_ <= 0.0) return {false, &target_};
  if (lambda_ >= 1.0) return {true, &noise_};
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  bool is_noise = uni(rng) < lambda_;
  return {is_noise, is_noise ? &noise_ : &target_};
}

}  // namespace fewcopy
