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

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "fewcopy/hamiltonian.hpp"
#include "fewcopy/noisy_source.hpp"
#include "fewcopy/stabilizer.hpp"
#include "fewcopy/state_vector.hpp"
#include "fewcopy/stats.hpp"

namespace fewcopy {

enum class DetectProtocol { singlet, lcs, hamiltonian };

/// One local check inside one repetition.
struct DetectRoundEntry {
  uint32_t round;
  uint16_t check;
  uint16_t setting;
  uint8_t outcome;  // local cost S_k
};

/// Outcome of a detection run. `epsilon` is the observed deviation of the
/// success rate from the separable bound (post-hoc) unless a fixed epsilon
/// was requested, in which case it echoes that. The confidence lower bound
/// is 1 - exp(-D(rate||bound) * checks_per_rep * N), zero when the rate
/// does not exceed the bound; the hamiltonian protocol reports zero since
/// its tail exponent has no closed-form constant.
struct DetectionRun {
  DetectProtocol protocol{};
  int n = 0;                   // system size (pairs for singlet, qubits for lcs)
  uint64_t repetitions = 0;
  uint32_t checks_per_rep = 0;
  double separable_bound = 0;  // per-check bound (2/3); NaN for hamiltonian
  double epsilon = 0;
  double success_rate = 0;       // mean local success rate
  double overall_pass_rate = 0;  // fraction of repetitions with S_[n] = 1
  int s_overall = 0;             // 1 when the aggregated rate exceeds the bound + eps
  double confidence_lower_bound = 0;
  std::vector<uint32_t> local_successes;  // per repetition
  std::vector<double> shot_values;        // hamiltonian: H_[n] per repetition
  std::vector<DetectRoundEntry> round_log;
};

struct DetectOptions {
  std::optional<double> fixed_epsilon;             // threshold studies
  std::optional<std::vector<int>> fixed_settings;  // singlet: per-pair setting 0..2
  bool keep_round_log = true;
  int threads = 1;
};

/// S_k = (1 - (-1)^(i+j)) / 2: 1 on anti-correlated outcome bits.
int singlet_local_cost(int i, int j);

/// Settings of the singlet test, sampled uniformly.
enum class SingletSetting : int { XX = 0, YY = 1, ZZ = 2 };

/// Randomized singlet-product test on a 2*n_pairs-qubit source: per pair one
/// of XX/YY/ZZ, success when outcomes anti-correlate; the repetition passes
/// when the success count reaches (2/3 + eps) * n_pairs.
DetectionRun run_singlet_protocol(NoisyStateSource &source, int n_pairs, uint64_t repetitions,
                                  uint64_t seed, const DetectOptions &opts = {});

enum class LcsSetting : int { ZXZZ = 0, ZZXZ = 1, ZYYZ = 2 };

/// Parity cost of one 4-qubit cluster measurement (bits ordered along the
/// cluster).
int lcs_local_cost(LcsSetting setting, const std::array<uint8_t, 4> &bits);

/// Regular partition of the periodic n-qubit chain into L = n/3 four-qubit
/// clusters at a uniformly random cyclic offset; adjacent clusters share one
/// boundary qubit. Requires n = 3L.
std::vector<std::array<int, 4>> lcs_regular_partition(int n, int L, std::mt19937_64 &rng);

/// Backend for the LCS protocol: a template state cloned per repetition.
/// Statevector up to the dense capacity, stabilizer tableau beyond it.
struct LcsBackend {
  std::variant<StateVector, StabilizerTableau> state;

  int n_qubits() const;
  static LcsBackend ideal_cluster(int n, int cap = kDefaultQubitCap);
  static LcsBackend product_zeros(int n, bool use_tableau = true);
};

DetectionRun run_lcs_protocol(const LcsBackend &backend, int n, int L, uint64_t repetitions,
                              uint64_t seed, const DetectOptions &opts = {});

/// Single-copy energy estimate: every qubit is measured in a uniformly
/// random Pauli basis; each term whose letters all match the drawn bases
/// contributes sign * weight * 3^|support|. Unbiased for <H>.
double hamiltonian_single_shot_energy(const LocalHamiltonian &h, const StateVector &shot,
                                      std::mt19937_64 &rng);

/// Energy value given already-drawn bases and outcome bits.
double hamiltonian_energy_from_outcomes(const LocalHamiltonian &h,
                                        const std::vector<PauliBasis> &bases,
                                        const std::vector<uint8_t> &bits);

/// Threshold test S = 1 iff H_[n] <= n (eps_sep - delta), 0 < delta < g_E.
DetectionRun run_hamiltonian_protocol(const LocalHamiltonian &h, NoisyStateSource &source,
                                      double delta, uint64_t repetitions, uint64_t seed,
                                      const DetectOptions &opts = {});

}  // namespace fewcopy
