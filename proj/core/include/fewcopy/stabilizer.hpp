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
#include <vector>

#include "fewcopy/pauli.hpp"

namespace fewcopy {

/// Binary-symplectic stabilizer state in the destabilizer-augmented
/// representation (rows 0..n-1 destabilizers, n..2n-1 stabilizers), with
/// rows bit-packed into 64-bit words. Phases are tracked internally as
/// powers of i so Y factors compose correctly; exposed signs are +/-1.
class StabilizerTableau {
 public:
  explicit StabilizerTableau(int n_qubits);

  /// |0...0>: stabilizers Z_k, destabilizers X_k.
  static StabilizerTableau computational_zero(int n_qubits);
  /// |bits> with bits.size() == n (bit 1 flips the Z_k sign).
  static StabilizerTableau computational_basis(const std::vector<uint8_t> &bits);

  int n_qubits() const { return n_; }

  // Stabilizer-half accessors (row in [0, n)).
  bool stab_x(int row, int qubit) const { return get_bit(x_, n_ + row, qubit); }
  bool stab_z(int row, int qubit) const { return get_bit(z_, n_ + row, qubit); }
  /// +1 or -1.
  int stab_sign(int row) const;
  SignedPauli stabilizer(int row) const;

  /// Overwrite stabilizer row `row` and its destabilizer partner. Used by
  /// state initializers; callers are responsible for symplectic validity
  /// (checked by valid()).
  void set_stabilizer(int row, const SignedPauli &stab, const SparsePauli &destab);

  /// Projective measurement of a Hermitian Pauli word (canonical +1 sign).
  /// Deterministic +/-1 when the word is in +/- the stabilizer group,
  /// otherwise a uniformly random sign with the tableau updated.
  int measure(const SparsePauli &p, std::mt19937_64 &rng);

  /// True when measuring p would not disturb the state.
  bool is_deterministic(const SparsePauli &p) const;

  /// Symplectic pairing, pairwise commutation and phase validity.
  bool valid() const;
  /// Rank over F2 of the stacked stabilizer (x|z) block; n for valid states.
  int stabilizer_rank() const;

 private:
  int n_;
  size_t words_;
  std::vector<uint64_t> x_, z_;  // (2n rows) x words_
  std::vector<uint8_t> phase_;   // i-exponent mod 4 per row

  bool get_bit(const std::vector<uint64_t> &m, int row, int qubit) const {
    return (m[row * words_ + qubit / 64] >> (qubit % 64)) & 1;
  }
  void set_bit(std::vector<uint64_t> &m, int row, int qubit, bool v) {
    uint64_t &w = m[row * words_ + qubit / 64];
    uint64_t bit = uint64_t{1} << (qubit % 64);
    w = v ? (w | bit) : (w & ~bit);
  }

  struct PackedRow {
    std::vector<uint64_t> x, z;
    int phase = 0;
  };
  PackedRow pack(const SparsePauli &p) const;
  bool row_anticommutes(int row, const PackedRow &p) const;
  bool rows_anticommute(int row_a, int row_b) const;
  void mult_row(int dst, int src);  // row_dst <- row_dst * row_src
  void copy_row(int dst, int src);
};

/// Linear-cluster-state tableau, stabilized by G_k = Z_{k-1} X_k Z_{k+1}
/// (indices wrap when periodic). Requires n >= 3 for periodic chains and
/// n >= 2 otherwise.
StabilizerTableau init_linear_cluster(int n, bool periodic);

/// Free-function form of StabilizerTableau::measure.
int measure_pauli_product(StabilizerTableau &tableau, const SparsePauli &p, std::mt19937_64 &rng);

}  // namespace fewcopy
