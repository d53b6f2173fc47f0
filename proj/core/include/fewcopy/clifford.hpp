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
#include <string>
#include <vector>

#include "fewcopy/state_vector.hpp"

namespace fewcopy {

enum class CliffGate : uint8_t { H, S, SDAG, X, Z, CX, CZ };

struct CliffordOp {
  CliffGate gate;
  int a = 0;
  int b = 0;  // second qubit for CX/CZ

  bool operator==(const CliffordOp &) const = default;
};

/// Conjugation table of an n-qubit Clifford (n <= 16): the images of X_q
/// and Z_q under U . U^dagger, bit-packed per row.
struct CliffordTableau {
  struct Row {
    uint32_t x = 0, z = 0;
    bool neg = false;

    bool operator==(const Row &) const = default;
  };
  int n = 0;
  std::vector<Row> xs, zs;

  static CliffordTableau identity(int n);
  /// Conjugate all rows by one more gate (composing the gate after the
  /// tableau's unitary).
  void apply(const CliffordOp &op);
  /// Symplectic pairing checks.
  bool valid() const;

  bool operator==(const CliffordTableau &) const = default;
};

/// Uniformly random Clifford (mod phase) via the canonical-form sampler of
/// Bravyi & Maslov, "Hadamard-free circuits expose the structure of the
/// Clifford group" (arXiv:2003.09412), plus 2n random sign bits.
CliffordTableau random_clifford_tableau(int n, std::mt19937_64 &rng);

/// Gate sequence realizing the tableau (first op acts first on a ket).
/// Gaussian-elimination sweep; O(n^2) gates.
std::vector<CliffordOp> synthesize_circuit(const CliffordTableau &t);

void apply_circuit(StateVector &state, const std::vector<CliffordOp> &ops);
/// Applies the inverse circuit (inverted ops in reverse order).
void apply_inverse_circuit(StateVector &state, const std::vector<CliffordOp> &ops);

/// Compact text form, e.g. "H0 S1 CX0.1 CZ2.3". Round-trips exactly.
std::string circuit_to_string(const std::vector<CliffordOp> &ops);
std::vector<CliffordOp> circuit_from_string(const std::string &text);

}  // namespace fewcopy
