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

#include <random>
#include <vector>

#include "fewcopy/pauli.hpp"
#include "fewcopy/state_vector.hpp"

namespace fewcopy {

/// L-local Hamiltonian H = sum_i w_i P_i on n sites, together with the two
/// energies-per-particle that define the entanglement gap
/// g_E = eps_sep - eps_0 > 0.
struct LocalHamiltonian {
  int n = 0;
  int locality = 0;  // max term support size
  std::vector<std::pair<SparsePauli, double>> terms;
  double eps_sep = 0.0;  // min over separable states of <H>/n
  double eps_0 = 0.0;    // ground energy per particle

  double entanglement_gap() const { return eps_sep - eps_0; }
  void validate() const;
};

/// Spin-1/2 Heisenberg chain, H = sum_bonds (XX + YY + ZZ)/4. The shipped
/// demo Hamiltonian: eps_sep = -1/4 per bond (the Neel product state
/// saturates it; see min_product_energy for the numeric oracle). Periodic
/// chains require even n so the bound is frustration-free. eps_0 is left
/// unset until solve_ground_state fills it.
LocalHamiltonian heisenberg_chain(int n, bool periodic);

/// Dense 2^n matrix (small n only).
Eigen::MatrixXcd dense_hamiltonian(const LocalHamiltonian &h);

/// Exact ground state via dense diagonalization; also fills h.eps_0.
StateVector solve_ground_state(LocalHamiltonian &h, int cap = kDefaultQubitCap);

/// Numeric oracle: minimal <H> over product states, found by sweeping
/// single-site Bloch vectors to their conditional optimum from random
/// starts. Used to validate eps_sep at small n.
double min_product_energy(const LocalHamiltonian &h, int restarts, std::mt19937_64 &rng);

}  // namespace fewcopy
