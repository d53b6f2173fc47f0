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

#include "fewcopy/pauli.hpp"

#include <stdexcept>

namespace fewcopy {

char basis_char(PauliBasis b) {
  switch (b) {
    case PauliBasis::X: return 'X';
    case PauliBasis::Y: return 'Y';
    case PauliBasis::Z: return 'Z';
  }
  return '?';
}

PauliBasis basis_from_char(char c) {
  switch (c) {
    case 'X': case 'x': return PauliBasis::X;
    case 'Y': case 'y': return PauliBasis::Y;
    case 'Z': case 'z': return PauliBasis::Z;
  }
  throw std::invalid_argument(std::string("not a Pauli basis: ") + c);
}

std::vector<int> SparsePauli::support() const {
  std::vector<int> s;
  s.reserve(factors.size());
  for (const auto &[q, b] : factors) s.push_back(q);
  return s;
}

std::string SparsePauli::to_string() const {
  std::string out;
  for (const auto &[q, b] : factors) {
    if (!out.empty()) out += ' ';
    out += basis_char(b);
    out += std::to_string(q);
  }
  return out.empty() ? "I" : out;
}

std::string SignedPauli::to_string() const {
  return (sign < 0 ? "-" : "+") + word.to_string();
}

namespace {

// i-exponent of a*b for single-qubit Paulis a,b (0 if either is identity or
// a == b; +1 for the cyclic order XY, YZ, ZX; -1 otherwise).
int phase_exponent(PauliBasis a, PauliBasis b) {
  if (a == b) return 0;
  int ai = static_cast<int>(a), bi = static_cast<int>(b);
  return ((bi - ai + 3) % 3 == 1) ? 1 : -1;
}

}  // namespace

SignedPauli multiply(const SignedPauli &a, const SignedPauli &b) {
  SignedPauli out;
  out.sign = a.sign * b.sign;
  int i_exp = 0;
  out.word.factors = a.word.factors;
  for (const auto &[q, pb] : b.word.factors) {
    auto it = out.word.factors.find(q);
    if (it == out.word.factors.end()) {
      out.word.factors.emplace(q, pb);
      continue;
    }
    PauliBasis pa = it->second;
    if (pa == pb) {
      out.word.factors.erase(it);
      continue;
    }
    i_exp += phase_exponent(pa, pb);
    // the remaining factor is the third Pauli
    int third = 3 - static_cast<int>(pa) - static_cast<int>(pb);
    it->second = static_cast<PauliBasis>(third);
  }
  i_exp = ((i_exp % 4) + 4) % 4;
  if (i_exp == 2) {
    out.sign = -out.sign;
  } else if (i_exp != 0) {
    throw std::invalid_argument("pauli product is not Hermitian (factors anticommute)");
  }
  return out;
}

bool commute(const SparsePauli &a, const SparsePauli &b) {
  int anti = 0;
  for (const auto &[q, pb] : b.factors) {
    auto it = a.factors.find(q);
    if (it != a.factors.end() && it->second != pb) anti ^= 1;
  }
  return anti == 0;
}

const Eigen::Matrix2cd &pauli_matrix(PauliBasis b) {
  using namespace std::complex_literals;
  static const Eigen::Matrix2cd x = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
  static const Eigen::Matrix2cd y = (Eigen::Matrix2cd() << 0, -1i, 1i, 0).finished();
  static const Eigen::Matrix2cd z = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
  switch (b) {
    case PauliBasis::X: return x;
    case PauliBasis::Y: return y;
    default: return z;
  }
}

Eigen::MatrixXcd dense_pauli(const SignedPauli &p, int n_qubits) {
  if (p.word.max_qubit() >= n_qubits) {
    throw std::invalid_argument("pauli support exceeds qubit count");
  }
  // qubit 0 is the most significant index bit, so it is the leftmost
  // Kronecker factor
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < n_qubits; ++q) {
    auto it = p.word.factors.find(q);
    Eigen::Matrix2cd f =
        it == p.word.factors.end() ? Eigen::Matrix2cd::Identity() : pauli_matrix(it->second);
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      for (Eigen::Index j = 0; j < out.cols(); ++j) {
        next.block<2, 2>(2 * i, 2 * j) = out(i, j) * f;
      }
    }
    out.swap(next);
  }
  return static_cast<double>(p.sign) * out;
}

}  // namespace fewcopy
