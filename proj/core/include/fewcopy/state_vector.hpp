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

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "fewcopy/observable.hpp"
#include "fewcopy/pauli.hpp"

namespace fewcopy {

using cplx = std::complex<double>;

/// Capacity guards for dense simulation. Qubit counts above the hard cap are
/// rejected outright; the default cap is what preparation helpers use unless
/// the caller raises it.
inline constexpr int kDefaultQubitCap = 20;
inline constexpr int kHardQubitCap = 24;

/// Dense n-qubit pure state. Qubit 0 is the most significant bit of the
/// amplitude index, so the basis label read left to right is the binary
/// expansion of the index. Amplitudes are normalized to 1 within kNormTol.
class StateVector {
 public:
  static constexpr double kNormTol = 1e-10;

  StateVector() = default;
  StateVector(int n_qubits, std::vector<cplx> amplitudes, std::string label = {});

  /// |00...0> on n qubits.
  static StateVector zero(int n_qubits, int cap = kDefaultQubitCap);
  /// Computational basis state |index>.
  static StateVector basis(int n_qubits, uint64_t index, int cap = kDefaultQubitCap);

  int n_qubits() const { return n_qubits_; }
  uint64_t dim() const { return uint64_t{1} << n_qubits_; }
  const std::vector<cplx> &amplitudes() const { return amps_; }
  std::vector<cplx> &mutable_amplitudes() { return amps_; }
  const std::string &label() const { return label_; }

  double norm_sq() const;
  void renormalize();

 private:
  int n_qubits_ = 0;
  std::vector<cplx> amps_;
  std::string label_;
};

/// Named target states used by the protocols.
///   singlet_product(n_pairs)        (|01>-|10>)/sqrt(2) on consecutive pairs
///   linear_cluster(n, periodic)     1D cluster state
///   ghz(n)                          (|0..0>+|1..1>)/sqrt(2); ghz(1) = |+>
///   cluster6_h                      1/2(|000000>+|000111>+|111000>-|111111>)
///   product_cheat_phi_p             (|x+>|x->)^3 (|y+>|y->)^3 (|z+>|z->)^2
StateVector prepare_singlet_product(int n_pairs, int cap = kDefaultQubitCap);
StateVector prepare_linear_cluster(int n, bool periodic, int cap = kDefaultQubitCap);
StateVector prepare_ghz(int n, int cap = kDefaultQubitCap);
StateVector prepare_cluster6_h();
StateVector prepare_product_cheat_phi_p();
/// Neel product state |0101...> on n qubits.
StateVector prepare_neel(int n, int cap = kDefaultQubitCap);

/// Dispatch by name, e.g. "singlet_product:8", "linear_cluster:24:periodic",
/// "ghz:3", "cluster6_h", "phi_p", "zeros:16", "neel:8", "basis:4:0101".
StateVector prepare_named_state(const std::string &name, int cap = kDefaultQubitCap);

/// Exact expectation <psi|A|psi>. The brute-force oracle for every protocol
/// test. Throws on dimension mismatch or non-Hermitian A.
double expectation(const StateVector &state, const ObservableMatrix &obs);

/// Exact expectation of a Pauli word (no dense matrix materialized).
double pauli_expectation(const StateVector &state, const SignedPauli &p);

/// Measure every qubit in the given basis (bases.size() == n_qubits).
/// Returns one outcome bit per qubit (0 for the +1 eigenvector) and leaves
/// `state` collapsed and renormalized.
std::vector<uint8_t> measure_local_paulis(StateVector &state,
                                          const std::vector<PauliBasis> &bases,
                                          std::mt19937_64 &rng);

/// Measure a subset of qubits, collapsing the state. Entries of `bases`
/// pair a qubit index with its measurement basis.
std::vector<uint8_t> measure_qubits(StateVector &state,
                                    const std::vector<std::pair<int, PauliBasis>> &bases,
                                    std::mt19937_64 &rng);

/// Sample the outcome bits of measuring every qubit locally, without
/// producing the collapsed state. One O(2^n) sweep instead of n of them;
/// this is the protocol hot path.
std::vector<uint8_t> sample_local_measurement(const StateVector &state,
                                              const std::vector<PauliBasis> &bases,
                                              std::mt19937_64 &rng);

/// Projective measurement of a Hermitian Pauli word. Returns the +/-1
/// outcome and collapses the state.
int measure_pauli_product(StateVector &state, const SignedPauli &p, std::mt19937_64 &rng);

/// Binary measurement {M, 1-M} of a projector supported on `support`
/// (matrix dimension 2^|support|). Returns 1 when the M branch is taken.
int measure_projector(StateVector &state, const std::vector<int> &support,
                      const Eigen::MatrixXcd &projector, std::mt19937_64 &rng);

/// <psi|M|psi> for an operator embedded on `support`.
double support_expectation(const StateVector &state, const std::vector<int> &support,
                           const Eigen::MatrixXcd &op);

/// If the 2n-qubit state factors into consecutive 2-qubit blocks, return the
/// factors; otherwise nullopt. Protocols that measure pairwise use this to
/// avoid dense passes on product sources.
std::optional<std::vector<StateVector>> try_factor_pairs(const StateVector &state,
                                                         double tol = 1e-9);

// In-place Clifford-circuit gates (used by state preparation and the
// classical-shadow ensembles).
void apply_h(StateVector &state, int q);
void apply_s(StateVector &state, int q);
void apply_sdag(StateVector &state, int q);
void apply_x(StateVector &state, int q);
void apply_z(StateVector &state, int q);
void apply_cx(StateVector &state, int control, int target);
void apply_cz(StateVector &state, int a, int b);

}  // namespace fewcopy
