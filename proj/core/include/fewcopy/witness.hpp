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
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fewcopy/noisy_source.hpp"
#include "fewcopy/pauli.hpp"
#include "fewcopy/state_vector.hpp"

namespace fewcopy {

/// Local binary observable: an idempotent pass/fail measurement with a
/// concrete local recipe.
class BinaryObservable {
 public:
  /// Pass iff every generator reads +1. All generators must be measurable in
  /// one simultaneous per-qubit setting; a stabilizer projector (1+S)/2 is
  /// the single-generator case (the word is measured locally and the sign
  /// mapped to the outcome).
  static BinaryObservable stabilizer_and(std::vector<SignedPauli> generators);
  /// Pass with probability <psi|M|psi> for a projector on `support`.
  static BinaryObservable projector(std::vector<int> support, Eigen::MatrixXcd m);
  /// The identity observable (always passes); shows up as the trivial
  /// stabilizer in projective witness tables.
  static BinaryObservable always_pass();

  const std::vector<int> &support() const { return support_; }
  bool trivial() const;

  /// Dense projector on the (sorted) support; an oracle surface, not the
  /// measurement path.
  Eigen::MatrixXcd projector_on_support() const;

  /// Measure on one copy, collapsing it. Returns 0/1.
  int measure(StateVector &shot, std::mt19937_64 &rng) const;

 private:
  struct StabilizerAnd {
    std::vector<SignedPauli> generators;
    std::vector<std::pair<int, PauliBasis>> bases;  // union setting
  };
  struct Projector {
    std::vector<int> support;
    Eigen::MatrixXcd m;
  };
  std::variant<StabilizerAnd, Projector> impl_;
  std::vector<int> support_;

  BinaryObservable() = default;
};

struct TableEntry {
  double mu = 0;
  BinaryObservable observable;
};

/// A translated witness: sampling probabilities mu_ik over binary
/// observables M_ik, with the separable bound p_s = (gamma_s + alpha)/tau
/// and, when a target is known, the entanglement value p_e.
struct SamplingTable {
  int n_qubits = 0;
  std::vector<TableEntry> entries;
  double gamma_s = 0;
  double alpha_total = 0;  // sum of the per-term shifts alpha_i
  double tau = 0;
  uint64_t term_count = 0;  // L
  double p_s = 0;
  std::optional<double> p_e;

  /// sum mu = 1, mu >= 0, p_s reproduces (gamma_s + alpha)/tau, entries
  /// idempotent on their support, p_e in (p_s, 1] when present.
  void validate() const;
};

/// A Hermitian witness term acting on a few qubits.
struct LocalTerm {
  std::vector<int> support;
  Eigen::MatrixXcd op;
};

/// Translate O = sum_i O_i with separable bound Tr(O rho_s) <= gamma_s into
/// a sampling table: shift each term nonnegative (minimal shift), take
/// eigenprojectors as the binary observables, normalize eigenvalues into
/// sampling probabilities. When `target` is given, p_e is the exact success
/// probability on it.
SamplingTable translate_witness(double gamma_s, const std::vector<LocalTerm> &terms,
                                int n_qubits, const StateVector *target = nullptr);

/// W1 = 1/2 - |G><G| for the stabilizer state generated by `generators`:
/// 2^g uniformly sampled stabilizer projectors, p_s = 3/4, p_e = 1.
SamplingTable projective_graph_witness(const std::vector<SignedPauli> &generators, int n_qubits);

/// W2 = 3 - 2(M_A + M_B) with M = prod (1+G)/2 over one colour class;
/// both classes must each be measurable in one local setting. p_s = 3/4.
SamplingTable two_setting_witness(const std::vector<SignedPauli> &gens_a,
                                  const std::vector<SignedPauli> &gens_b, int n_qubits);

/// W = (n-1) - sum_i S_i: n stabilizer projectors at mu = 1/n. The
/// mechanical bound is p_s = (n-1+n)/(2n) = 1 - 1/(2n).
SamplingTable generic_stabilizer_witness(const std::vector<SignedPauli> &generators,
                                         int n_qubits);

/// O = sum_i w_i P_i given as weighted Pauli words (the witness-file form);
/// every entry becomes a sign test of its word.
SamplingTable pauli_sum_witness(double gamma_s,
                                const std::vector<std::pair<double, SparsePauli>> &terms,
                                int n_qubits, const StateVector *target = nullptr);

/// Built-in witnesses for the pinned six-qubit cluster state.
std::vector<SignedPauli> cluster6_h_generators();
SamplingTable witness_w1_cluster6();
SamplingTable witness_w2_cluster6();

struct WitnessRound {
  uint32_t round;
  uint32_t entry;
  uint8_t outcome;
};

struct WitnessRunResult {
  uint64_t repetitions = 0;
  double success_rate = 0;  // S_[N]
  double p_s = 0;
  double epsilon = 0;  // S_[N] - p_s (may be negative)
  double c_min = 0;    // 1 - exp(-D(p_s+eps||p_s) N) when eps > 0
  std::vector<WitnessRound> round_log;
};

struct WitnessOptions {
  bool keep_round_log = true;
  int threads = 1;
};

/// Few-copy witness protocol: per copy sample an entry by mu, measure it
/// via its local recipe, report the observed success rate, deviation and
/// Chernoff confidence.
WitnessRunResult run_witness_protocol(const SamplingTable &table, NoisyStateSource &source,
                                      uint64_t repetitions, uint64_t seed,
                                      const WitnessOptions &opts = {});

/// Exact success probability sum_ik mu_ik <M_ik> on a state; equals
/// (Tr(O rho) + alpha)/tau for translated witnesses.
double exact_success_probability(const SamplingTable &table, const StateVector &state);

/// ceil(log(1/delta) / D(p_e || p_s)): average copies to reach confidence
/// 1 - delta on a target with entanglement value p_e. Natural log.
uint64_t copies_needed(double p_e, double p_s, double delta);

}  // namespace fewcopy
