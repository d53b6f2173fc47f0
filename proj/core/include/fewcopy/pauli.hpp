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
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fewcopy {

enum class PauliBasis : uint8_t { X = 0, Y = 1, Z = 2 };

char basis_char(PauliBasis b);
PauliBasis basis_from_char(char c);

/// Tensor product of single-qubit X/Y/Z factors on the listed qubits
/// (identity elsewhere), with a +1 coefficient. Qubit indices are 0-based;
/// qubit 0 is the most significant bit of a computational-basis index.
struct SparsePauli {
  std::map<int, PauliBasis> factors;

  SparsePauli() = default;
  explicit SparsePauli(std::map<int, PauliBasis> f) : factors(std::move(f)) {}

  bool empty() const { return factors.empty(); }
  int max_qubit() const { return factors.empty() ? -1 : factors.rbegin()->first; }
  std::vector<int> support() const;
  std::string to_string() const;  // e.g. "X0 Z3"
};

/// sign * SparsePauli, sign in {+1, -1}.
struct SignedPauli {
  SparsePauli word;
  int sign = +1;

  std::string to_string() const;
};

/// Hermitian product of two signed Pauli words. Throws std::invalid_argument
/// if the factors anticommute (the product would carry a factor of i).
SignedPauli multiply(const SignedPauli &a, const SignedPauli &b);

bool commute(const SparsePauli &a, const SparsePauli &b);

/// Dense matrix of the operator on `n_qubits` qubits (tests and small-system
/// oracles; 2^n x 2^n).
Eigen::MatrixXcd dense_pauli(const SignedPauli &p, int n_qubits);

const Eigen::Matrix2cd &pauli_matrix(PauliBasis b);

}  // namespace fewcopy
