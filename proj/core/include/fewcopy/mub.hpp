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
#include <random>
#include <span>

#include <Eigen/Dense>

#include "fewcopy/observable.hpp"

namespace fewcopy {

/// Complete family of d+1 mutually unbiased bases. Basis index m runs over
/// 1..d+1 with m = 1 the computational basis; element indices k (and matrix
/// element indices i, j, l) are 0-based. |<i,m|j,n>|^2 = 1/d for m != n.
///
/// Supported dimensions: odd primes (Ivanovic construction,
/// alpha_l = omega^(a l^2 + k l)) and powers of two (Galois-ring GR(4,k)
/// construction with coefficients that are powers of i). Other composite
/// dimensions are rejected outright; no approximate family is built.
class MubFamily {
 public:
  int dimension() const { return d_; }

  /// Basis m as a matrix whose column k is |k,m>.
  const Eigen::MatrixXcd &basis(int m) const;
  Eigen::VectorXcd vector(int k, int m) const;
  /// Rank-1 projector |k,m><k,m|.
  Eigen::MatrixXcd projector(int k, int m) const;

  /// alpha_l^{k,m} = sqrt(d) <l|k,m> for m >= 2; unit modulus.
  std::complex<double> alpha(int l, int k, int m) const;

  friend MubFamily build_mub(int d);

 private:
  int d_ = 0;
  std::vector<Eigen::MatrixXcd> bases_;  // bases_[m-1]
};

/// Build the complete family for dimension d. Throws std::invalid_argument
/// for unsupported (composite, non-2^k) dimensions such as d = 6, and
/// CapacityError above 2^10.
MubFamily build_mub(int d);

/// Coefficients of A = -Tr(A) 1 + sum_{m,k} O_k^(m) Pi_k^(m) with
/// O_k^(m) = Tr[A Pi_k^(m)]. Coefficients are stored complex so arbitrary
/// operators round-trip; they are real (to tolerance) for Hermitian A.
struct MubDecomposition {
  int d = 0;
  Eigen::MatrixXcd coefficients;  // (d+1) x d, row m-1, col k
  std::complex<double> trace_term;

  Eigen::MatrixXcd reconstruct(const MubFamily &fam) const;
};

MubDecomposition decompose_operator(const Eigen::MatrixXcd &a, const MubFamily &fam);

/// eta_ij^{k,m}: the unit-modulus single-outcome estimate of rho_ij
/// attached to POVM outcome (k, m). Requires m >= 2 and i != j; the diagonal
/// path uses the computational record instead.
std::complex<double> eta(int i, int j, int k, int m, const MubFamily &fam);

/// One POVM draw {Pi_k^(m)/d : m >= 2}: m uniform over the d non-computational
/// bases, k Born-distributed within basis m. `state` holds d qudit amplitudes.
std::pair<int, int> sample_mub_povm(std::span<const std::complex<double>> state,
                                    const MubFamily &fam, std::mt19937_64 &rng);

}  // namespace fewcopy
